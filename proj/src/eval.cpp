#include "embedlab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "embedlab/error.hpp"

namespace embedlab {

std::string_view to_string(AnalogyMethod m) {
    switch (m) {
    case AnalogyMethod::Offset: return "offset";
    case AnalogyMethod::OnlyB: return "only-b";
    case AnalogyMethod::IgnoreA: return "ignore-a";
    }
    return "offset";
}

AnalogyMethod parse_analogy_method(std::string_view name) {
    if (name == "offset" || name == "3cosadd") return AnalogyMethod::Offset;
    if (name == "only-b") return AnalogyMethod::OnlyB;
    if (name == "ignore-a") return AnalogyMethod::IgnoreA;
    throw UsageError("unknown analogy method '" + std::string(name) + "' (expected offset, only-b or ignore-a)");
}

std::string_view to_string(Task t) { return t == Task::Analogy ? "analogy" : "intrusion"; }

Task parse_task(std::string_view name) {
    if (name == "analogy" || name == "analogies") return Task::Analogy;
    if (name == "intrusion" || name == "doesnt-match") return Task::Intrusion;
    throw UsageError("unknown task '" + std::string(name) + "' (expected analogy or intrusion)");
}

void GroupStats::add(const QuestionRecord& r) {
    if (r.skipped) {
        ++skipped;
    } else {
        ++attempted;
        if (r.correct) ++correct;
    }
}

GroupStats EvalReport::total() const {
    GroupStats g;
    for (const auto& r : records) g.add(r);
    return g;
}

std::vector<std::pair<std::string, GroupStats>> EvalReport::by_section() const {
    std::vector<std::pair<std::string, GroupStats>> out;
    for (const auto& r : records) {
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == r.section; });
        if (it == out.end()) it = out.insert(out.end(), {r.section, {}});
        it->second.add(r);
    }
    return out;
}

std::map<int, GroupStats> EvalReport::by_difficulty() const {
    std::map<int, GroupStats> out;
    for (const auto& r : records) out[r.difficulty].add(r);
    return out;
}

std::size_t EvalReport::tie_count() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.skipped && r.tie; }));
}

bool EvalReport::degenerate() const {
    const auto attempted = total().attempted;
    return task == Task::Intrusion && attempted > 0 && tie_count() == attempted;
}

std::optional<double> EvalReport::random_baseline() const {
    if (task == Task::Intrusion) return 0.25;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<TermId> resolve(const Vocabulary& vocab, const std::string& term, const EvalOptions& options) {
    if (auto id = vocab.find(term)) return id;
    if (options.fold_case) return vocab.find(fold_case(term));
    return std::nullopt;
}

bool same_answer(const std::string& predicted, const std::string& gold, const EvalOptions& options) {
    return options.fold_case ? fold_case(predicted) == fold_case(gold) : predicted == gold;
}

} // namespace

std::optional<std::string> solve_analogy(const SimilarityProvider& model, const AnalogyQuestion& q,
                                         AnalogyMethod method, const EvalOptions& options) {
    const auto& vocab = model.vocabulary();
    const auto a = resolve(vocab, q.a, options);
    const auto a_star = resolve(vocab, q.a_star, options);
    const auto b = resolve(vocab, q.b, options);
    if (!a || !a_star || !b) return std::nullopt;

    std::vector<TermId> positives;
    std::vector<TermId> negatives;
    switch (method) {
    case AnalogyMethod::Offset:
        positives = {*a_star, *b};
        negatives = {*a};
        break;
    case AnalogyMethod::OnlyB:
        positives = {*b};
        break;
    case AnalogyMethod::IgnoreA:
        positives = {*a_star, *b};
        break;
    }
    const std::unordered_set<TermId> exclude = {*a, *a_star, *b};
    const auto best = model.rank(positives, negatives, 1, exclude);
    if (best.empty()) return std::nullopt;
    return best.front().term;
}

EvalReport eval_analogies(const SimilarityProvider& model, const std::vector<AnalogyQuestion>& questions,
                          AnalogyMethod method, const EvalOptions& options, std::string model_id) {
    EvalReport report;
    report.model_id = std::move(model_id);
    report.task = Task::Analogy;
    report.method = method;
    report.records.reserve(questions.size());
    for (const auto& q : questions) {
        QuestionRecord r;
        r.section = q.section;
        r.terms = {q.a, q.a_star, q.b};
        r.gold = q.b_star;
        if (auto predicted = solve_analogy(model, q, method, options)) {
            r.predicted = std::move(*predicted);
            r.correct = same_answer(r.predicted, r.gold, options);
        } else {
            r.skipped = true;
        }
        report.records.push_back(std::move(r));
    }
    return report;
}

std::optional<IntruderPick> find_intruder(const SimilarityProvider& model, std::span<const std::string> terms,
                                          const EvalOptions& options) {
    std::vector<TermId> ids;
    for (const auto& t : terms) {
        const auto id = resolve(model.vocabulary(), t, options);
        if (!id) return std::nullopt;
        ids.push_back(*id);
    }
    if (ids.empty()) return std::nullopt;
    const auto cos = model.centroid_cosines(ids);
    IntruderPick pick;
    for (std::size_t i = 1; i < cos.size(); ++i)
        if (cos[i] < cos[pick.index]) pick.index = i;
    for (std::size_t i = 0; i < cos.size(); ++i)
        if (i != pick.index && std::abs(cos[i] - cos[pick.index]) <= 1e-12) pick.tie = true;
    return pick;
}

EvalReport eval_intrusion(const SimilarityProvider& model, const std::vector<IntrusionQuestion>& questions,
                          const EvalOptions& options, std::string model_id) {
    EvalReport report;
    report.model_id = std::move(model_id);
    report.task = Task::Intrusion;
    report.records.reserve(questions.size());
    for (const auto& q : questions) {
        QuestionRecord r;
        r.section = q.section;
        r.difficulty = q.difficulty;
        r.terms.assign(q.terms.begin(), q.terms.end());
        r.gold = q.outlier;
        if (auto pick = find_intruder(model, q.terms, options)) {
            r.predicted = q.terms[pick->index];
            r.correct = r.predicted == r.gold;
            r.tie = pick->tie;
        } else {
            r.skipped = true;
        }
        report.records.push_back(std::move(r));
    }
    return report;
}

// ---------------------------------------------------------------------------

int frequency_bin(double count) {
    for (std::size_t i = 0; i < kFrequencyBinUpperEdges.size(); ++i)
        if (count <= kFrequencyBinUpperEdges[i]) return static_cast<int>(i) + 1;
    return 6;
}

FrequencyAnalysis frequency_analysis(const EvalReport& report, const Vocabulary& vocab) {
    if (report.task != Task::Intrusion) throw UsageError("frequency analysis needs an intrusion report");
    FrequencyAnalysis fa;
    std::set<std::string> missing;
    auto count_of = [&](const std::string& term) -> double {
        if (auto id = vocab.find(term)) return static_cast<double>(vocab.count(*id));
        missing.insert(term);
        return 0.0;
    };
    auto tally = [](FrequencyTable& table, double count, bool correct) {
        auto& bin = table[static_cast<std::size_t>(frequency_bin(count) - 1)];
        ++bin.questions;
        if (correct) ++bin.correct;
    };
    for (const auto& r : report.records) {
        if (r.skipped) continue;
        double sum = 0.0;
        for (const auto& t : r.terms) sum += count_of(t);
        tally(fa.average, r.terms.empty() ? 0.0 : sum / static_cast<double>(r.terms.size()), r.correct);
        tally(fa.gold, count_of(r.gold), r.correct);
        tally(fa.predicted, count_of(r.predicted), r.correct);
    }
    fa.missing_terms.assign(missing.begin(), missing.end());
    return fa;
}

// ---------------------------------------------------------------------------
// Output

ReportFormat parse_report_format(std::string_view name) {
    if (name == "table") return ReportFormat::Table;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "jsonl") return ReportFormat::JsonLines;
    throw UsageError("unknown report format '" + std::string(name) + "' (expected table, csv or jsonl)");
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string join(const std::vector<std::string>& terms, char sep) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += sep;
        out += terms[i];
    }
    return out;
}

std::string percent(const std::optional<double>& acc) {
    if (!acc) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *acc * 100.0);
    return buf;
}

nlohmann::ordered_json group_json(const GroupStats& g) {
    nlohmann::ordered_json j;
    j["attempted"] = g.attempted;
    j["correct"] = g.correct;
    j["skipped"] = g.skipped;
    if (auto a = g.accuracy()) j["accuracy"] = *a;
    else j["accuracy"] = nullptr;
    return j;
}

nlohmann::ordered_json table_json(const FrequencyTable& t) {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        nlohmann::ordered_json j;
        j["bin"] = i + 1;
        j["questions"] = t[i].questions;
        j["correct"] = t[i].correct;
        if (auto a = t[i].accuracy()) j["accuracy"] = *a;
        else j["accuracy"] = nullptr;
        arr.push_back(std::move(j));
    }
    return arr;
}

/// Left-aligned first column, right-aligned rest.
std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (width.size() <= c) width.push_back(0);
            width[c] = std::max(width[c], row[c].size());
        }
    std::string out;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string pad(width[c] - row[c].size(), ' ');
            line += c == 0 ? row[c] + pad : "  " + pad + row[c];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

std::string model_label(const EvalReport& r) {
    std::string label = r.model_id.empty() ? "model" : r.model_id;
    if (r.task == Task::Analogy && r.method && *r.method != AnalogyMethod::Offset)
        label += " [" + std::string(to_string(*r.method)) + "]";
    return label;
}

} // namespace

std::string comparison_table(std::span<const EvalReport> reports, Grouping grouping) {
    std::vector<std::string> columns;
    std::vector<std::size_t> sizes;
    if (grouping == Grouping::Section) {
        for (const auto& r : reports)
            for (const auto& [name, g] : r.by_section())
                if (std::find(columns.begin(), columns.end(), name) == columns.end()) columns.push_back(name);
    } else {
        std::set<int> levels;
        for (const auto& r : reports)
            for (const auto& [d, g] : r.by_difficulty()) levels.insert(d);
        for (int d : levels) columns.push_back(std::to_string(d));
    }

    auto group_of = [&](const EvalReport& r, const std::string& col) -> GroupStats {
        if (grouping == Grouping::Section) {
            for (const auto& [name, g] : r.by_section())
                if (name == col) return g;
            return {};
        }
        const auto by = r.by_difficulty();
        const auto it = by.find(std::stoi(col));
        return it == by.end() ? GroupStats{} : it->second;
    };

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {grouping == Grouping::Section ? "Task Section" : "Task Difficulty"};
    header.insert(header.end(), columns.begin(), columns.end());
    header.push_back("Total");
    rows.push_back(header);
    if (!reports.empty()) {
        std::vector<std::string> counts = {"Number of tasks"};
        for (const auto& col : columns) {
            const auto g = group_of(reports.front(), col);
            counts.push_back(std::to_string(g.attempted + g.skipped));
        }
        counts.push_back(std::to_string(reports.front().records.size()));
        rows.push_back(counts);
    }
    for (const auto& r : reports) {
        std::vector<std::string> row = {model_label(r)};
        for (const auto& col : columns) row.push_back(percent(group_of(r, col).accuracy()));
        row.push_back(percent(r.total().accuracy()));
        rows.push_back(std::move(row));
    }
    return render_rows(rows);
}

std::string frequency_table(const FrequencyAnalysis& fa) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"Frequency Bin", "1", "2", "3", "4", "5", "6"});
    rows.push_back({"Term frequency", "0-20", "21-50", "51-100", "101-500", "501-1000", ">1000"});
    auto add = [&](const char* label, const FrequencyTable& t) {
        std::vector<std::string> acc = {label};
        std::vector<std::string> n = {""};
        for (const auto& b : t) {
            acc.push_back(percent(b.accuracy()));
            n.push_back("(" + std::to_string(b.questions) + ")");
        }
        rows.push_back(std::move(acc));
        rows.push_back(std::move(n));
    };
    add("average of four", fa.average);
    add("gold outlier", fa.gold);
    add("predicted outlier", fa.predicted);
    return render_rows(rows);
}

std::string emit_report(const EvalReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::Table: {
        std::string out = comparison_table(std::span(&report, 1), Grouping::Section);
        if (report.task == Task::Intrusion) {
            out += '\n' + comparison_table(std::span(&report, 1), Grouping::Difficulty);
            out += "\nrandom baseline: 25.00\n";
            if (report.degenerate()) out += "warning: degenerate model, every answer was a tie\n";
        }
        const auto t = report.total();
        out += "attempted: " + std::to_string(t.attempted) + "  skipped (OOV): " + std::to_string(t.skipped) + '\n';
        return out;
    }
    case ReportFormat::Csv: {
        std::string out = "section,difficulty,terms,gold,predicted,correct,skipped\n";
        for (const auto& r : report.records) {
            out += csv_field(r.section) + ',' + std::to_string(r.difficulty) + ',' + csv_field(join(r.terms, ' ')) +
                   ',' + csv_field(r.gold) + ',' + csv_field(r.predicted) + ',' + (r.correct ? "1" : "0") + ',' +
                   (r.skipped ? "1" : "0") + '\n';
        }
        return out;
    }
    case ReportFormat::JsonLines: {
        nlohmann::ordered_json meta;
        meta["type"] = "meta";
        meta["model"] = report.model_id;
        meta["task"] = to_string(report.task);
        if (report.method) meta["method"] = to_string(*report.method);
        else meta["method"] = nullptr;
        std::string out = meta.dump() + '\n';
        for (const auto& r : report.records) {
            nlohmann::ordered_json j;
            j["section"] = r.section;
            j["difficulty"] = r.difficulty;
            j["terms"] = r.terms;
            j["gold"] = r.gold;
            j["predicted"] = r.predicted;
            j["correct"] = r.correct;
            j["skipped"] = r.skipped;
            j["tie"] = r.tie;
            out += j.dump() + '\n';
        }
        return out;
    }
    }
    throw UsageError("unknown report format");
}

EvalReport parse_report_jsonl(std::string_view text) {
    EvalReport report;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_meta = false;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (j.value("type", "") == "meta") {
                if (have_meta) throw FormatError("second metadata line", line_no);
                have_meta = true;
                report.model_id = j.at("model").get<std::string>();
                report.task = parse_task(j.at("task").get<std::string>());
                if (!j.at("method").is_null()) report.method = parse_analogy_method(j.at("method").get<std::string>());
                continue;
            }
            QuestionRecord r;
            r.section = j.at("section").get<std::string>();
            r.difficulty = j.at("difficulty").get<int>();
            r.terms = j.at("terms").get<std::vector<std::string>>();
            r.gold = j.at("gold").get<std::string>();
            r.predicted = j.at("predicted").get<std::string>();
            r.correct = j.at("correct").get<bool>();
            r.skipped = j.at("skipped").get<bool>();
            r.tie = j.value("tie", false);
            report.records.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(e.what(), line_no);
        }
    }
    if (!have_meta) throw FormatError("report has no metadata line");
    return report;
}

std::string summary_json(const EvalReport& report, const FrequencyAnalysis* frequency) {
    nlohmann::ordered_json j;
    j["model"] = report.model_id;
    j["task"] = to_string(report.task);
    if (report.method) j["method"] = to_string(*report.method);
    j["total"] = group_json(report.total());
    auto sections = nlohmann::ordered_json::array();
    for (const auto& [name, g] : report.by_section()) {
        auto s = group_json(g);
        s["section"] = name;
        sections.push_back(std::move(s));
    }
    j["sections"] = std::move(sections);
    if (report.task == Task::Intrusion) {
        auto diff = nlohmann::ordered_json::object();
        for (const auto& [d, g] : report.by_difficulty()) diff[std::to_string(d)] = group_json(g);
        j["difficulty"] = std::move(diff);
        j["random_baseline"] = 0.25;
        j["degenerate"] = report.degenerate();
    }
    if (frequency) {
        nlohmann::ordered_json f;
        f["average"] = table_json(frequency->average);
        f["gold"] = table_json(frequency->gold);
        f["predicted"] = table_json(frequency->predicted);
        f["missing_terms"] = frequency->missing_terms;
        j["frequency_bins"] = std::move(f);
    }
    return j.dump(2);
}

} // namespace embedlab
