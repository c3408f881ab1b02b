#include "embedlab/gridsearch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "embedlab/error.hpp"
#include "embedlab/eval.hpp"

namespace embedlab {

void GridSpec::validate() const {
    if (algorithms.empty()) throw ConfigError("grid: empty algorithm list");
    if (dims.empty()) throw ConfigError("grid: empty dims list");
    if (windows.empty()) throw ConfigError("grid: empty window list");
    if (negatives.empty()) throw ConfigError("grid: empty negative list");
}

GridSpec parse_grid_spec(std::string_view text) {
    GridSpec spec;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("grid spec: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("grid spec must be a JSON object");
    try {
        if (j.contains("algorithm")) {
            spec.algorithms.clear();
            for (const auto& a : j["algorithm"]) spec.algorithms.push_back(parse_algorithm(a.get<std::string>()));
            j.erase("algorithm");
        }
        if (j.contains("dims")) {
            spec.dims = j["dims"].get<std::vector<std::size_t>>();
            j.erase("dims");
        }
        if (j.contains("window")) {
            spec.windows = j["window"].get<std::vector<unsigned>>();
            j.erase("window");
        }
        if (j.contains("negative")) {
            spec.negatives = j["negative"].get<std::vector<unsigned>>();
            j.erase("negative");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("grid spec: ") + e.what());
    }
    spec.base = config_from_json(j.dump());
    spec.validate();
    return spec;
}

GridSpec load_grid_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open grid spec");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_grid_spec(ss.str());
}

std::vector<TrainingConfig> expand_grid(const GridSpec& spec) {
    spec.validate();
    std::vector<TrainingConfig> out;
    out.reserve(spec.size());
    for (auto a : spec.algorithms)
        for (auto d : spec.dims)
            for (auto w : spec.windows)
                for (auto n : spec.negatives) {
                    TrainingConfig c = spec.base;
                    c.algorithm = a;
                    c.dims = d;
                    c.window = w;
                    c.negative = n;
                    out.push_back(c);
                }
    return out;
}

std::string config_id(const TrainingConfig& c) {
    const char* algorithm = c.algorithm == Algorithm::SkipGram ? "sg" : "cbow";
    const char* loss = c.loss == Loss::NegativeSampling ? "ns" : "hs";
    return "algorithm-" + std::string(algorithm) + "_dims-" + std::to_string(c.dims) + "_epochs-" +
           std::to_string(c.epochs) + "_loss-" + loss + "_negative-" + std::to_string(c.negative) + "_seed-" +
           std::to_string(c.seed) + "_window-" + std::to_string(c.window);
}

// ---------------------------------------------------------------------------
// Results CSV

namespace {

constexpr const char* kHeader =
    "id,algorithm,loss,dims,window,negative,epochs,seed,min_count,status,analogy_accuracy,intrusion_accuracy,"
    "intrusion_d1,intrusion_d2,intrusion_d3,intrusion_d4,train_seconds,error";
constexpr std::size_t kColumns = 18;

std::string number(const std::optional<double>& v) {
    if (!v) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + '"';
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields(1);
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    fields.back() += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (in_quotes) throw FormatError("unterminated quote", line_no);
    return fields;
}

std::optional<double> parse_number(const std::string& s, std::size_t line_no) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("bad number '" + s + "'", line_no);
    }
}

template <typename Int>
Int parse_int(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return static_cast<Int>(v);
    } catch (const std::exception&) {
        throw FormatError("bad integer '" + s + "'", line_no);
    }
}

} // namespace

std::string grid_csv_header() { return kHeader; }

std::string format_grid_row(const GridRow& r) {
    const auto& c = r.config;
    std::string line = r.id + ',' + (c.algorithm == Algorithm::SkipGram ? "sg" : "cbow") + ',' +
                       (c.loss == Loss::NegativeSampling ? "ns" : "hs") + ',' + std::to_string(c.dims) + ',' +
                       std::to_string(c.window) + ',' + std::to_string(c.negative) + ',' +
                       std::to_string(c.epochs) + ',' + std::to_string(c.seed) + ',' +
                       std::to_string(c.min_count) + ',' + (r.ok ? "ok" : "failed") + ',' +
                       number(r.analogy_accuracy) + ',' + number(r.intrusion_accuracy);
    for (const auto& d : r.intrusion_by_difficulty) line += ',' + number(d);
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", r.train_seconds);
    line += std::string(",") + secs + ',' + quoted(r.error);
    return line;
}

std::vector<GridRow> parse_grid_results(std::string_view csv) {
    std::vector<GridRow> rows;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < csv.size()) {
        std::size_t end = csv.find('\n', pos);
        if (end == std::string_view::npos) end = csv.size();
        auto line = csv.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1) {
            if (line != kHeader) throw FormatError("unexpected results header", line_no);
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_csv_line(line, line_no);
        if (f.size() != kColumns)
            throw FormatError("expected " + std::to_string(kColumns) + " fields, got " + std::to_string(f.size()),
                              line_no);
        GridRow r;
        r.id = f[0];
        r.config.algorithm = parse_algorithm(f[1]);
        r.config.loss = parse_loss(f[2]);
        r.config.dims = parse_int<std::size_t>(f[3], line_no);
        r.config.window = parse_int<unsigned>(f[4], line_no);
        r.config.negative = parse_int<unsigned>(f[5], line_no);
        r.config.epochs = parse_int<unsigned>(f[6], line_no);
        r.config.seed = parse_int<std::uint64_t>(f[7], line_no);
        r.config.min_count = parse_int<std::uint64_t>(f[8], line_no);
        if (f[9] != "ok" && f[9] != "failed") throw FormatError("bad status '" + f[9] + "'", line_no);
        r.ok = f[9] == "ok";
        r.analogy_accuracy = parse_number(f[10], line_no);
        r.intrusion_accuracy = parse_number(f[11], line_no);
        for (std::size_t d = 0; d < 4; ++d) r.intrusion_by_difficulty[d] = parse_number(f[12 + d], line_no);
        r.train_seconds = parse_number(f[16], line_no).value_or(0.0);
        r.error = f[17];
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open results file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GridRow run_one(const Corpus& corpus, const GridDatasets& datasets, TrainingConfig config,
                const GridOptions& options) {
    GridRow row;
    row.id = config_id(config);
    config.workers = 1;
    row.config = config;
    try {
        const auto start = std::chrono::steady_clock::now();
        const auto model = train(corpus, config);
        row.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (options.model_dir) save_binary(model, *options.model_dir / (row.id + ".bin"));
        const DenseSimilarity sim(model);
        if (!datasets.analogies.empty())
            row.analogy_accuracy = eval_analogies(sim, datasets.analogies, AnalogyMethod::Offset).total().accuracy();
        if (!datasets.intrusion.empty()) {
            const auto report = eval_intrusion(sim, datasets.intrusion);
            row.intrusion_accuracy = report.total().accuracy();
            for (const auto& [d, g] : report.by_difficulty())
                if (d >= 1 && d <= 4) row.intrusion_by_difficulty[static_cast<std::size_t>(d - 1)] = g.accuracy();
        }
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
        row.analogy_accuracy.reset();
        row.intrusion_accuracy.reset();
        row.intrusion_by_difficulty = {};
    }
    return row;
}

} // namespace

std::vector<GridRow> load_grid_results(const std::filesystem::path& path) { return parse_grid_results(read_file(path)); }

std::vector<GridRow> run_grid(const Corpus& corpus, const GridDatasets& datasets, const GridSpec& spec,
                              const std::filesystem::path& results_csv, const GridOptions& options) {
    const auto configs = expand_grid(spec);
    if (options.model_dir) std::filesystem::create_directories(*options.model_dir);

    std::unordered_set<std::string> done;
    if (std::filesystem::exists(results_csv)) {
        auto text = read_file(results_csv);
        const auto last_newline = text.rfind('\n');
        const std::size_t keep = last_newline == std::string::npos ? 0 : last_newline + 1;
        if (keep != text.size()) {
            // interrupted mid-row
            text.resize(keep);
            std::ofstream out(results_csv, std::ios::binary | std::ios::trunc);
            out << text;
        }
        for (const auto& r : parse_grid_results(text)) done.insert(r.id);
        if (text.empty()) {
            std::ofstream out(results_csv, std::ios::binary | std::ios::trunc);
            out << kHeader << '\n';
        }
    } else {
        if (results_csv.has_parent_path()) std::filesystem::create_directories(results_csv.parent_path());
        std::ofstream out(results_csv, std::ios::binary);
        if (!out) throw IoError(results_csv.string(), "cannot create results file");
        out << kHeader << '\n';
    }

    std::vector<TrainingConfig> pending;
    for (const auto& c : configs) {
        if (options.max_configs && pending.size() >= options.max_configs) break;
        if (!done.count(config_id(c))) pending.push_back(c);
    }

    std::mutex write_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pending.size()) return;
            const auto row = run_one(corpus, datasets, pending[i], options);
            std::lock_guard lock(write_mutex);
            std::ofstream out(results_csv, std::ios::binary | std::ios::app);
            out << format_grid_row(row) << '\n';
            out.flush();
            if (!out) throw IoError(results_csv.string(), "cannot append to results file");
            if (options.on_row) options.on_row(row);
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.sweep_workers,
                                                              static_cast<unsigned>(pending.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    auto rows = load_grid_results(results_csv);
    std::unordered_map<std::string, std::size_t> order;
    for (std::size_t i = 0; i < configs.size(); ++i) order.emplace(config_id(configs[i]), i);
    std::stable_sort(rows.begin(), rows.end(), [&](const GridRow& a, const GridRow& b) {
        const auto ia = order.count(a.id) ? order.at(a.id) : configs.size();
        const auto ib = order.count(b.id) ? order.at(b.id) : configs.size();
        return ia < ib;
    });
    return rows;
}

// ---------------------------------------------------------------------------

std::string summarize_grid(const std::vector<GridRow>& rows) {
    struct Acc {
        std::size_t n = 0;
        double sum = 0, min = 0, max = 0;
        void add(double v) {
            if (n == 0) min = max = v;
            min = std::min(min, v);
            max = std::max(max, v);
            sum += v;
            ++n;
        }
        nlohmann::ordered_json json() const {
            nlohmann::ordered_json j;
            j["n"] = n;
            if (n) {
                j["mean"] = sum / static_cast<double>(n);
                j["min"] = min;
                j["max"] = max;
            } else {
                j["mean"] = j["min"] = j["max"] = nullptr;
            }
            return j;
        }
    };
    struct Group {
        std::size_t rows = 0, failed = 0;
        Acc analogy, intrusion;
    };
    using Key = std::function<std::string(const TrainingConfig&)>;
    const std::vector<std::pair<std::string, Key>> params = {
        {"algorithm", [](const TrainingConfig& c) { return std::string(c.algorithm == Algorithm::SkipGram ? "sg" : "cbow"); }},
        {"dims", [](const TrainingConfig& c) { return std::to_string(c.dims); }},
        {"window", [](const TrainingConfig& c) { return std::to_string(c.window); }},
        {"negative", [](const TrainingConfig& c) { return std::to_string(c.negative); }},
    };
    nlohmann::ordered_json out;
    out["rows"] = rows.size();
    for (const auto& [name, key] : params) {
        std::vector<std::pair<std::string, Group>> groups;
        for (const auto& r : rows) {
            const auto k = key(r.config);
            auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == k; });
            if (it == groups.end()) it = groups.insert(groups.end(), {k, {}});
            auto& g = it->second;
            ++g.rows;
            if (!r.ok) {
                ++g.failed;
                continue;
            }
            if (r.analogy_accuracy) g.analogy.add(*r.analogy_accuracy);
            if (r.intrusion_accuracy) g.intrusion.add(*r.intrusion_accuracy);
        }
        // numeric parameters sort numerically
        std::stable_sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
            if (name == "algorithm") return a.first < b.first;
            return std::stoull(a.first) < std::stoull(b.first);
        });
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [value, g] : groups) {
            nlohmann::ordered_json j;
            j["value"] = value;
            j["rows"] = g.rows;
            j["failed"] = g.failed;
            j["analogy"] = g.analogy.json();
            j["intrusion"] = g.intrusion.json();
            arr.push_back(std::move(j));
        }
        out[name] = std::move(arr);
    }
    return out.dump(2);
}

} // namespace embedlab
