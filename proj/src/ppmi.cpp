#include "embedlab/ppmi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "embedlab/error.hpp"

namespace embedlab {

template <typename Value>
Value SparseRows<Value>::at(std::size_t r, TermId c) const {
    const auto cols = row_columns(r);
    const auto it = std::lower_bound(cols.begin(), cols.end(), c);
    if (it == cols.end() || *it != c) return Value{0};
    return values[offsets[r] + static_cast<std::size_t>(it - cols.begin())];
}

template struct SparseRows<std::uint64_t>;
template struct SparseRows<double>;

namespace {

using PairCounts = std::unordered_map<std::uint64_t, std::uint64_t>;

constexpr std::uint64_t key(TermId w, TermId c) { return (static_cast<std::uint64_t>(w) << 32) | c; }

void count_range(const Corpus& corpus, const Vocabulary& vocab, unsigned window, std::size_t begin,
                 std::size_t end, PairCounts& out) {
    std::vector<std::optional<TermId>> ids;
    for (std::size_t s = begin; s < end; ++s) {
        const auto& sentence = corpus.sentences[s];
        ids.clear();
        for (const auto& tok : sentence) ids.push_back(vocab.find(tok));
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!ids[i]) continue;
            const std::size_t lo = i >= window ? i - window : 0;
            const std::size_t hi = std::min(ids.size() - 1, i + window);
            for (std::size_t j = lo; j <= hi; ++j)
                if (j != i && ids[j]) ++out[key(*ids[i], *ids[j])];
        }
    }
}

} // namespace

CooccurrenceMatrix count_cooccurrences(const Corpus& corpus, const Vocabulary& vocab, unsigned window,
                                       unsigned workers) {
    if (window < 1) throw DomainError("window must be >= 1");
    workers = std::max(1u, workers);
    const std::size_t n_sent = corpus.sentences.size();
    std::vector<PairCounts> partial(workers);
    if (workers == 1) {
        count_range(corpus, vocab, window, 0, n_sent, partial[0]);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = n_sent * w / workers;
            const std::size_t e = n_sent * (w + 1) / workers;
            threads.emplace_back([&, b, e, w] { count_range(corpus, vocab, window, b, e, partial[w]); });
        }
        for (auto& t : threads) t.join();
    }
    for (unsigned w = 1; w < workers; ++w) {
        for (const auto& [k, v] : partial[w]) partial[0][k] += v;
        PairCounts().swap(partial[w]);
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells(partial[0].begin(), partial[0].end());
    std::sort(cells.begin(), cells.end());

    const std::size_t n = vocab.size();
    CooccurrenceMatrix m;
    m.row_sums.assign(n, 0);
    m.column_sums.assign(n, 0);
    m.counts.offsets.assign(n + 1, 0);
    m.counts.columns.reserve(cells.size());
    m.counts.values.reserve(cells.size());
    for (const auto& [k, v] : cells) {
        const auto w = static_cast<TermId>(k >> 32);
        const auto c = static_cast<TermId>(k & 0xffffffffULL);
        ++m.counts.offsets[w + 1];
        m.counts.columns.push_back(c);
        m.counts.values.push_back(v);
        m.row_sums[w] += v;
        m.column_sums[c] += v;
        m.total += v;
    }
    for (std::size_t r = 0; r < n; ++r) m.counts.offsets[r + 1] += m.counts.offsets[r];
    return m;
}

SparsePpmiModel to_ppmi(const CooccurrenceMatrix& counts, Vocabulary vocab, unsigned window) {
    if (counts.total == 0) throw DomainError("co-occurrence matrix is empty");
    SparsePpmiModel model;
    model.vocab = std::move(vocab);
    model.window = window;
    auto& out = model.weights;
    const std::size_t n = counts.counts.rows();
    out.offsets.assign(1, 0);
    const double total = static_cast<double>(counts.total);
    for (std::size_t r = 0; r < n; ++r) {
        const auto cols = counts.counts.row_columns(r);
        const auto vals = counts.counts.row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            // Integer products stay exact in double for any corpus that fits in memory.
            const double num = static_cast<double>(vals[k]) * total;
            const double den = static_cast<double>(counts.row_sums[r]) * static_cast<double>(counts.column_sums[cols[k]]);
            if (num <= den) continue;
            out.columns.push_back(cols[k]);
            out.values.push_back(std::log(num / den));
        }
        out.offsets.push_back(out.values.size());
    }
    return model;
}

SparsePpmiModel train_ppmi(const Corpus& corpus, std::uint64_t min_count, unsigned window, unsigned workers) {
    Vocabulary vocab = build_vocab(corpus, min_count);
    if (vocab.empty()) throw ConfigError("vocabulary is empty after min_count filtering");
    const auto counts = count_cooccurrences(corpus, vocab, window, workers);
    return to_ppmi(counts, std::move(vocab), window);
}

void save_ppmi(const SparsePpmiModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << "ppmi " << model.vocab.size() << ' ' << model.window << '\n';
    for (const auto& e : model.vocab.entries()) out << e.term << ' ' << e.count << '\n';
    char buf[40];
    for (std::size_t r = 0; r < model.weights.rows(); ++r) {
        const auto cols = model.weights.row_columns(r);
        const auto vals = model.weights.row_values(r);
        const auto& word = model.vocab.term(static_cast<TermId>(r));
        for (std::size_t k = 0; k < cols.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
            out << word << ' ' << model.vocab.term(cols[k]) << ' ' << buf << '\n';
        }
    }
    if (!out) throw IoError(path.string(), "write failed");
}

bool is_ppmi_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string head(5, '\0');
    in.read(head.data(), 5);
    return in.gcount() == 5 && head == "ppmi ";
}

SparsePpmiModel load_ppmi(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file");
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw FormatError("empty PPMI file", 1);
    std::istringstream header(line);
    std::string keyword;
    std::size_t n = 0;
    unsigned window = 0;
    if (!(header >> keyword >> n >> window) || keyword != "ppmi")
        throw FormatError("malformed PPMI header", line_no);

    std::vector<VocabEntry> entries;
    entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ++line_no;
        if (!std::getline(in, line)) throw FormatError("vocabulary block ends early", line_no);
        std::istringstream ls(line);
        VocabEntry e;
        std::string extra;
        if (!(ls >> e.term >> e.count) || (ls >> extra)) throw FormatError("bad vocabulary line", line_no);
        entries.push_back(std::move(e));
    }
    SparsePpmiModel model;
    model.window = window;
    try {
        model.vocab = Vocabulary::from_ordered(std::move(entries), 1);
    } catch (const ConfigError& e) {
        throw FormatError(e.what(), line_no);
    }

    std::vector<std::tuple<TermId, TermId, double>> cells;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string w, c, extra;
        double v = 0.0;
        if (!(ls >> w >> c >> v) || (ls >> extra)) throw FormatError("bad triplet", line_no);
        const auto wi = model.vocab.find(w);
        const auto ci = model.vocab.find(c);
        if (!wi || !ci) throw FormatError("triplet term not in vocabulary block", line_no);
        if (!(v > 0.0) || !std::isfinite(v)) throw FormatError("PPMI weight must be positive and finite", line_no);
        cells.emplace_back(*wi, *ci, v);
    }
    std::sort(cells.begin(), cells.end());
    auto& wts = model.weights;
    wts.offsets.assign(model.vocab.size() + 1, 0);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const auto [w, c, v] = cells[k];
        if (k && std::get<0>(cells[k - 1]) == w && std::get<1>(cells[k - 1]) == c)
            throw FormatError("duplicate PPMI cell " + model.vocab.term(w) + " " + model.vocab.term(c));
        ++wts.offsets[w + 1];
        wts.columns.push_back(c);
        wts.values.push_back(v);
    }
    for (std::size_t r = 0; r < model.vocab.size(); ++r) wts.offsets[r + 1] += wts.offsets[r];
    return model;
}

// ---------------------------------------------------------------------------

PpmiSimilarity::PpmiSimilarity(const SparsePpmiModel& model) : model_(&model) {
    norms_.resize(model.weights.rows());
    for (std::size_t r = 0; r < norms_.size(); ++r) {
        double s = 0.0;
        for (double v : model.weights.row_values(r)) s += v * v;
        norms_[r] = std::sqrt(s);
    }
}

double PpmiSimilarity::row_dot_dense(std::size_t r, std::span<const double> dense) const {
    const auto cols = model_->weights.row_columns(r);
    const auto vals = model_->weights.row_values(r);
    double s = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * dense[cols[k]];
    return s;
}

namespace {

void add_unit_row(const SparseRows<double>& rows, std::size_t r, double norm, double sign,
                  std::vector<double>& dense) {
    if (norm == 0.0) return;
    const auto cols = rows.row_columns(r);
    const auto vals = rows.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) dense[cols[k]] += sign * vals[k] / norm;
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

std::vector<ScoredTerm> PpmiSimilarity::rank(std::span<const TermId> positives,
                                             std::span<const TermId> negatives, std::size_t topn,
                                             const std::unordered_set<TermId>& exclude) const {
    if (topn == 0) return {};
    const auto& rows = model_->weights;
    std::vector<double> query(model_->vocab.size(), 0.0);
    for (TermId id : positives) add_unit_row(rows, id, norms_[id], 1.0, query);
    for (TermId id : negatives) add_unit_row(rows, id, norms_[id], -1.0, query);
    const double qn = norm(query);
    std::vector<std::pair<double, TermId>> scored;
    scored.reserve(norms_.size());
    for (std::size_t r = 0; r < norms_.size(); ++r) {
        const auto id = static_cast<TermId>(r);
        if (exclude.contains(id)) continue;
        const double denom = norms_[r] * qn;
        scored.emplace_back(denom > 0.0 ? row_dot_dense(r, query) / denom : 0.0, id);
    }
    return detail::top_terms(std::move(scored), topn, model_->vocab);
}

std::vector<double> PpmiSimilarity::centroid_cosines(std::span<const TermId> group) const {
    std::vector<double> mean(model_->vocab.size(), 0.0);
    for (TermId id : group) add_unit_row(model_->weights, id, norms_[id], 1.0, mean);
    for (double& m : mean) m /= static_cast<double>(group.size());
    const double mn = norm(mean);
    std::vector<double> out;
    for (TermId id : group) {
        const double denom = norms_[id] * mn;
        out.push_back(denom > 0.0 ? row_dot_dense(id, mean) / denom : 0.0);
    }
    return out;
}

double PpmiSimilarity::similarity(TermId a, TermId b) const {
    const double denom = norms_[a] * norms_[b];
    if (denom == 0.0) return 0.0;
    const auto ca = model_->weights.row_columns(a);
    const auto va = model_->weights.row_values(a);
    const auto cb = model_->weights.row_columns(b);
    const auto vb = model_->weights.row_values(b);
    double s = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ca.size() && j < cb.size()) {
        if (ca[i] < cb[j]) ++i;
        else if (cb[j] < ca[i]) ++j;
        else s += va[i++] * vb[j++];
    }
    return s / denom;
}

std::vector<ScoredTerm> ppmi_most_similar(const SparsePpmiModel& model,
                                          std::span<const std::string> positives,
                                          std::span<const std::string> negatives, std::size_t topn,
                                          std::span<const std::string> exclude) {
    const PpmiSimilarity index(model);
    return most_similar(static_cast<const SimilarityProvider&>(index), positives, negatives, topn, exclude);
}

} // namespace embedlab
