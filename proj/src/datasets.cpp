#include "embedlab/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "embedlab/error.hpp"
#include "embedlab/random.hpp"

namespace embedlab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool has_space(std::string_view s) {
    return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

/// Calls fn(line_number, line) for each line; handles a missing final newline.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        fn(++line_no, text.substr(pos, end - pos));
        pos = end + 1;
    }
}

std::vector<std::string> split_terms(std::string_view list, std::size_t line_no) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = list.find(',', pos);
        const auto term = trim(list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (term.empty()) throw DefinitionError("empty term in list", line_no);
        if (has_space(term)) throw DefinitionError("term contains whitespace: '" + std::string(term) + "'", line_no);
        out.emplace_back(term);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << text;
    if (!out) throw IoError(path.string(), "write failed");
}

} // namespace

// ---------------------------------------------------------------------------
// Task definitions

TaskDefinition parse_task_definition(std::string_view text) {
    TaskDefinition defs;
    enum class Block { None, Analogy, Intrusion } block = Block::None;
    std::size_t triple_line = 0;
    std::array<bool, 4> have_group{};

    auto finish_triple = [&]() {
        if (block != Block::Intrusion || defs.intrusion_sections.back().triples.empty()) return;
        for (bool g : have_group)
            if (!g) throw DefinitionError("triple is missing difficulty groups (need d1..d4)", triple_line);
    };

    for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') return;

        if (line.front() == '[') {
            finish_triple();
            if (line.back() != ']') throw DefinitionError("unterminated block header", line_no);
            const auto inner = trim(line.substr(1, line.size() - 2));
            const auto space = inner.find_first_of(" \t");
            const auto kind = inner.substr(0, space);
            const auto name = space == std::string_view::npos ? std::string_view{} : trim(inner.substr(space));
            if (name.empty()) throw DefinitionError("block header needs a section name", line_no);
            if (kind == "analogy") {
                block = Block::Analogy;
                defs.analogy_sections.push_back({std::string(name), {}});
            } else if (kind == "intrusion") {
                block = Block::Intrusion;
                defs.intrusion_sections.push_back({std::string(name), {}});
            } else {
                throw DefinitionError("unknown block kind '" + std::string(kind) + "'", line_no);
            }
            return;
        }

        if (block == Block::None) throw DefinitionError("content outside of a block", line_no);

        if (block == Block::Analogy) {
            auto terms = split_terms(line, line_no);
            if (terms.size() != 2) throw DefinitionError("analogy pair needs exactly two terms", line_no);
            if (terms[0] == terms[1]) throw DefinitionError("analogy pair repeats a term", line_no);
            defs.analogy_sections.back().pairs.emplace_back(std::move(terms[0]), std::move(terms[1]));
            return;
        }

        const auto colon = line.find(':');
        if (colon == std::string_view::npos) throw DefinitionError("expected 'triple:' or 'dN:'", line_no);
        const auto label = trim(line.substr(0, colon));
        const auto list = line.substr(colon + 1);
        auto& section = defs.intrusion_sections.back();
        if (label == "triple") {
            finish_triple();
            auto terms = split_terms(list, line_no);
            if (terms.size() != 3) throw DefinitionError("triple needs exactly three terms", line_no);
            IntrusionTriple t;
            std::move(terms.begin(), terms.end(), t.related.begin());
            section.triples.push_back(std::move(t));
            triple_line = line_no;
            have_group = {};
            return;
        }
        if (label.size() == 2 && label[0] == 'd' && label[1] >= '1' && label[1] <= '4') {
            if (section.triples.empty()) throw DefinitionError("difficulty group before any triple", line_no);
            const int d = label[1] - '1';
            if (have_group[d]) throw DefinitionError("duplicate difficulty group " + std::string(label), line_no);
            auto terms = split_terms(list, line_no);
            if (terms.size() != 5)
                throw DefinitionError("difficulty group needs exactly five outliers, found " + std::to_string(terms.size()),
                                      line_no);
            section.triples.back().outliers[d] = std::move(terms);
            have_group[d] = true;
            return;
        }
        throw DefinitionError("unknown label '" + std::string(label) + "'", line_no);
    });
    finish_triple();
    return defs;
}

TaskDefinition load_task_definition(const std::filesystem::path& path) {
    return parse_task_definition(read_text(path));
}

std::vector<AnalogyQuestion> generate_analogy_questions(const TaskDefinition& defs) {
    std::vector<AnalogyQuestion> out;
    for (const auto& section : defs.analogy_sections) {
        const auto& pairs = section.pairs;
        if (pairs.size() < 2)
            throw DefinitionError("analogy section '" + section.name + "' needs at least two pairs");
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = 0; j < pairs.size(); ++j)
                if (i != j)
                    out.push_back({pairs[i].first, pairs[i].second, pairs[j].first, pairs[j].second, section.name});
    }
    return out;
}

std::vector<IntrusionQuestion> generate_intrusion_questions(const TaskDefinition& defs) {
    std::vector<IntrusionQuestion> out;
    for (const auto& section : defs.intrusion_sections) {
        for (const auto& triple : section.triples) {
            const auto& r = triple.related;
            if (r[0] == r[1] || r[0] == r[2] || r[1] == r[2])
                throw DefinitionError("triple repeats a term in section '" + section.name + "'");
            for (int d = 0; d < 4; ++d) {
                if (triple.outliers[d].size() != 5)
                    throw DefinitionError("difficulty group " + std::to_string(d + 1) + " of a triple in section '" +
                                          section.name + "' has " + std::to_string(triple.outliers[d].size()) +
                                          " outliers, expected 5");
                for (const auto& outlier : triple.outliers[d]) {
                    if (std::find(r.begin(), r.end(), outlier) != r.end())
                        throw DefinitionError("outlier '" + outlier + "' is part of its triple");
                    IntrusionQuestion q;
                    q.terms = {r[0], r[1], r[2], outlier};
                    q.outlier = outlier;
                    q.section = section.name;
                    q.difficulty = d + 1;
                    std::uint64_t seed = stable_hash(section.name);
                    for (const auto& t : q.terms) seed = stable_hash(t, stable_hash("\x1f", seed));
                    Rng rng(seed);
                    for (std::size_t i = q.terms.size() - 1; i > 0; --i)
                        std::swap(q.terms[i], q.terms[rng.below(i + 1)]);
                    out.push_back(std::move(q));
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Question files

namespace {

template <typename Question, typename LineFn>
std::string format_sections(const std::vector<Question>& questions, LineFn&& line) {
    std::string out;
    const std::string* current = nullptr;
    for (const auto& q : questions) {
        if (current == nullptr ? !q.section.empty() : *current != q.section) {
            out += ": " + q.section + "\n";
        }
        current = &q.section;
        line(out, q);
    }
    return out;
}

} // namespace

std::string format_analogy_questions(const std::vector<AnalogyQuestion>& questions) {
    return format_sections(questions, [](std::string& out, const AnalogyQuestion& q) {
        out += q.a + ' ' + q.a_star + ' ' + q.b + ' ' + q.b_star + '\n';
    });
}

std::vector<AnalogyQuestion> parse_analogy_questions(std::string_view text) {
    std::vector<AnalogyQuestion> out;
    std::string section;
    for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        const auto line = trim(raw);
        if (line.empty()) return;
        if (line.front() == ':') {
            section = std::string(trim(line.substr(1)));
            return;
        }
        const auto f = split_ws(line);
        if (f.size() != 4)
            throw FormatError("analogy line needs 4 terms, found " + std::to_string(f.size()), line_no);
        if (f[0] == f[1] || f[2] == f[3]) throw SemanticError("analogy pair repeats a term", line_no);
        out.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3]), section});
    });
    return out;
}

void write_analogy_file(const std::vector<AnalogyQuestion>& questions, const std::filesystem::path& path) {
    write_text(format_analogy_questions(questions), path);
}

std::vector<AnalogyQuestion> parse_analogy_file(const std::filesystem::path& path) {
    return parse_analogy_questions(read_text(path));
}

std::string format_intrusion_questions(const std::vector<IntrusionQuestion>& questions) {
    return format_sections(questions, [](std::string& out, const IntrusionQuestion& q) {
        out += q.terms[0] + ' ' + q.terms[1] + ' ' + q.terms[2] + ' ' + q.terms[3] + " | " + q.outlier;
        if (q.difficulty != 0) out += " | " + std::to_string(q.difficulty);
        out += '\n';
    });
}

std::vector<IntrusionQuestion> parse_intrusion_questions(std::string_view text,
                                                         const IntrusionParseOptions& options) {
    std::vector<IntrusionQuestion> out;
    std::string section;
    for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
        const auto line = trim(raw);
        if (line.empty()) return;
        if (line.front() == ':') {
            section = std::string(trim(line.substr(1)));
            return;
        }
        std::vector<std::string_view> parts;
        std::size_t pos = 0;
        while (true) {
            const auto bar = line.find('|', pos);
            parts.push_back(trim(line.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos)));
            if (bar == std::string_view::npos) break;
            pos = bar + 1;
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw FormatError("expected 't1 t2 t3 t4 | outlier | difficulty'", line_no);
        if (parts.size() == 2 && options.require_difficulty) throw FormatError("missing difficulty field", line_no);
        const auto terms = split_ws(parts[0]);
        if (terms.size() != 4) throw FormatError("intrusion line needs 4 terms, found " + std::to_string(terms.size()), line_no);
        if (parts[1].empty() || has_space(parts[1])) throw FormatError("outlier field must be one term", line_no);

        IntrusionQuestion q;
        for (std::size_t i = 0; i < 4; ++i) q.terms[i] = std::string(terms[i]);
        q.outlier = std::string(parts[1]);
        q.section = section;
        if (parts.size() == 3) {
            const auto d = parts[2];
            const auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), q.difficulty);
            if (ec != std::errc() || ptr != d.data() + d.size() || q.difficulty < 0 || q.difficulty > 4)
                throw FormatError("difficulty must be an integer in 0..4", line_no);
        }
        const auto hits = std::count(q.terms.begin(), q.terms.end(), q.outlier);
        if (hits == 0) throw SemanticError("outlier '" + q.outlier + "' is not among the four terms", line_no);
        if (hits > 1) throw SemanticError("outlier '" + q.outlier + "' occurs more than once", line_no);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j)
                if (q.terms[i] == q.terms[j]) throw SemanticError("question repeats term '" + q.terms[i] + "'", line_no);
        out.push_back(std::move(q));
    });
    return out;
}

void write_intrusion_file(const std::vector<IntrusionQuestion>& questions, const std::filesystem::path& path) {
    write_text(format_intrusion_questions(questions), path);
}

std::vector<IntrusionQuestion> parse_intrusion_file(const std::filesystem::path& path,
                                                    const IntrusionParseOptions& options) {
    return parse_intrusion_questions(read_text(path), options);
}

} // namespace embedlab
