#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "embedlab/embeddings.hpp"
#include "embedlab/error.hpp"

namespace embedlab {

template <typename Real>
void BasicEmbeddingModel<Real>::validate() const {
    if (input_vectors.rows() != vocab.size())
        throw ConfigError("input matrix rows do not match the vocabulary size");
    if (!output_vectors.empty()) {
        if (output_vectors.rows() != vocab.size())
            throw ConfigError("output matrix rows do not match the vocabulary size");
        if (output_vectors.cols() != input_vectors.cols())
            throw ConfigError("input and output dimensionality differ");
    }
    for (Real x : input_vectors.data())
        if (!std::isfinite(x)) throw ConfigError("non-finite input vector entry");
    for (Real x : output_vectors.data())
        if (!std::isfinite(x)) throw ConfigError("non-finite output vector entry");
}

template <typename Real>
BasicEmbeddingModel<Real> init_model(Vocabulary vocab, const TrainingConfig& config) {
    BasicEmbeddingModel<Real> m;
    m.config = config;
    const std::size_t n = vocab.size();
    m.vocab = std::move(vocab);
    m.input_vectors = Matrix<Real>(n, config.dims);
    m.output_vectors = Matrix<Real>(n, config.dims);
    Rng rng(mix_seed(config.seed, 0));
    const double scale = 1.0 / static_cast<double>(config.dims);
    for (Real& x : m.input_vectors.data()) x = static_cast<Real>((rng.uniform() - 0.5) * scale);
    return m;
}

namespace {

double sigmoid(double x) {
    return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

/// log(1 + e^x) without overflow.
double softplus(double x) {
    return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

template <typename Real>
double dot(std::span<const Real> a, std::span<const Real> b) {
    Real s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return static_cast<double>(s);
}

struct Target {
    TermId row;
    bool positive;
};

template <typename Real>
struct Workspace {
    std::vector<Real> hidden;
    std::vector<Real> grad;
    std::vector<Target> targets;
    std::vector<Real> coeff;
};

void add_targets(std::vector<Target>& out, TermId word, const TrainingTables& tables,
                 const StepMode& mode, Rng& rng) {
    if (mode.loss == Loss::NegativeSampling) {
        out.push_back({word, true});
        for (unsigned k = 0; k < mode.negative; ++k) {
            for (int attempt = 0; attempt < 8; ++attempt) {
                const TermId noise = tables.noise->sample(rng);
                if (noise != word) {
                    out.push_back({noise, false});
                    break;
                }
            }
        }
    } else {
        const auto& code = tables.tree->codes[word];
        const auto& path = tables.tree->paths[word];
        for (std::size_t d = 0; d < code.size(); ++d) out.push_back({path[d], code[d] == 0});
    }
}

template <typename Real>
double sgd_step(BasicEmbeddingModel<Real>& m, const TrainingTables& tables, TermId center,
                std::span<const TermId> context, double lr, const StepMode& mode, Rng& rng,
                Workspace<Real>& ws) {
    if (context.empty()) return 0.0;
    const std::size_t dims = m.dims();
    ws.hidden.assign(dims, Real{0});
    ws.grad.assign(dims, Real{0});
    ws.targets.clear();

    if (mode.algorithm == Algorithm::SkipGram) {
        const auto v = m.input_vectors.row(center);
        std::copy(v.begin(), v.end(), ws.hidden.begin());
        for (TermId c : context) add_targets(ws.targets, c, tables, mode, rng);
    } else {
        for (TermId c : context) {
            const auto v = m.input_vectors.row(c);
            for (std::size_t i = 0; i < dims; ++i) ws.hidden[i] += v[i];
        }
        const Real inv = Real{1} / static_cast<Real>(context.size());
        for (auto& h : ws.hidden) h *= inv;
        add_targets(ws.targets, center, tables, mode, rng);
    }

    // Phase 1: scores and input-side gradient at the current parameters.
    double loss = 0.0;
    ws.coeff.resize(ws.targets.size());
    const std::span<const Real> hidden(ws.hidden);
    for (std::size_t j = 0; j < ws.targets.size(); ++j) {
        const auto u = m.output_vectors.row(ws.targets[j].row);
        const double f = dot<Real>(u, hidden);
        const double label = ws.targets[j].positive ? 1.0 : 0.0;
        loss += ws.targets[j].positive ? softplus(-f) : softplus(f);
        const Real g = static_cast<Real>(lr * (label - sigmoid(f)));
        ws.coeff[j] = g;
        for (std::size_t i = 0; i < dims; ++i) ws.grad[i] += g * u[i];
    }
    // Phase 2: output rows.
    for (std::size_t j = 0; j < ws.targets.size(); ++j) {
        auto u = m.output_vectors.row(ws.targets[j].row);
        const Real g = ws.coeff[j];
        for (std::size_t i = 0; i < dims; ++i) u[i] += g * hidden[i];
    }
    // Phase 3: input rows.
    if (mode.algorithm == Algorithm::SkipGram) {
        auto v = m.input_vectors.row(center);
        for (std::size_t i = 0; i < dims; ++i) v[i] += ws.grad[i];
    } else {
        const Real inv = Real{1} / static_cast<Real>(context.size());
        for (TermId c : context) {
            auto v = m.input_vectors.row(c);
            for (std::size_t i = 0; i < dims; ++i) v[i] += ws.grad[i] * inv;
        }
    }
    return loss;
}

} // namespace

template <typename Real>
double train_step(BasicEmbeddingModel<Real>& model, const TrainingTables& tables, TermId center,
                  std::span<const TermId> context, double lr, const StepMode& mode, Rng& rng) {
    const std::size_t n = model.vocab.size();
    if (model.output_vectors.rows() != n) throw ConfigError("model has no output layer");
    if (center >= n) throw DomainError("center index out of range");
    for (TermId c : context)
        if (c >= n) throw DomainError("context index out of range");
    if (!(lr >= 0.0)) throw DomainError("learning rate must be non-negative");
    if (mode.loss == Loss::NegativeSampling && !tables.noise)
        throw ConfigError("negative sampling needs a noise table");
    if (mode.loss == Loss::HierarchicalSoftmax && !tables.tree)
        throw ConfigError("hierarchical softmax needs a Huffman tree");
    Workspace<Real> ws;
    return sgd_step(model, tables, center, context, lr, mode, rng, ws);
}

template double train_step<float>(BasicEmbeddingModel<float>&, const TrainingTables&, TermId,
                                  std::span<const TermId>, double, const StepMode&, Rng&);
template double train_step<double>(BasicEmbeddingModel<double>&, const TrainingTables&, TermId,
                                   std::span<const TermId>, double, const StepMode&, Rng&);
template BasicEmbeddingModel<float> init_model<float>(Vocabulary, const TrainingConfig&);
template BasicEmbeddingModel<double> init_model<double>(Vocabulary, const TrainingConfig&);
template struct BasicEmbeddingModel<float>;
template struct BasicEmbeddingModel<double>;

// ---------------------------------------------------------------------------
// Training loop

namespace {

using Segment = std::vector<TermId>;

std::vector<Segment> index_corpus(const Corpus& corpus, const Vocabulary& vocab, bool cross_sentence) {
    std::vector<Segment> out;
    Segment stream;
    for (const auto& sentence : corpus.sentences) {
        Segment seg;
        for (const auto& tok : sentence)
            if (auto id = vocab.find(tok)) seg.push_back(*id);
        if (cross_sentence) {
            stream.insert(stream.end(), seg.begin(), seg.end());
        } else if (!seg.empty()) {
            out.push_back(std::move(seg));
        }
    }
    if (cross_sentence && !stream.empty()) out.push_back(std::move(stream));
    return out;
}

/// A worker's share: [segment, offset) ranges, contiguous in token order.
struct Slice {
    std::size_t segment;
    std::size_t begin;
    std::size_t end;
};

std::vector<std::vector<Slice>> shard(const std::vector<Segment>& segments, unsigned workers) {
    std::uint64_t total = 0;
    for (const auto& s : segments) total += s.size();
    std::vector<std::vector<Slice>> shards(workers);
    const std::uint64_t per = (total + workers - 1) / workers;
    // Sentences go whole to one worker; a few long streams are cut instead.
    const bool cut = segments.size() < workers;
    std::size_t w = 0;
    std::uint64_t filled = 0;
    for (std::size_t si = 0; si < segments.size(); ++si) {
        std::size_t pos = 0;
        const std::size_t len = segments[si].size();
        while (pos < len) {
            std::size_t take = len - pos;
            if (cut && w + 1 < workers) take = std::min<std::uint64_t>(take, per - filled);
            shards[w].push_back({si, pos, pos + take});
            pos += take;
            filled += take;
            if (filled >= per && w + 1 < workers) {
                ++w;
                filled = 0;
            }
        }
    }
    return shards;
}

void run_training(EmbeddingModel& model, const std::vector<Segment>& segments,
                  const TrainingConfig& cfg, TrainingStats* stats) {
    const auto started = std::chrono::steady_clock::now();
    std::uint64_t token_count = 0;
    for (const auto& s : segments) token_count += s.size();
    if (token_count == 0) return;

    const TrainingTables tables = TrainingTables::build(model.vocab, cfg.unigram_power);
    if (cfg.loss == Loss::HierarchicalSoftmax && !tables.tree)
        throw ConfigError("hierarchical softmax needs at least two vocabulary terms");

    std::vector<double> keep(model.vocab.size(), 1.0);
    if (cfg.subsample_t > 0.0) {
        for (std::size_t i = 0; i < keep.size(); ++i) {
            const auto c = model.vocab.count(static_cast<TermId>(i));
            if (c > 0) keep[i] = subsample_keep_prob(c, model.vocab.total_tokens(), cfg.subsample_t);
        }
    }

    const StepMode mode{cfg.algorithm, cfg.loss, cfg.negative};
    const double total_work = static_cast<double>(cfg.epochs) * static_cast<double>(token_count);
    std::atomic<std::uint64_t> processed{0};
    const auto shards = shard(segments, cfg.workers);
    std::vector<std::vector<EpochStats>> worker_stats(cfg.workers, std::vector<EpochStats>(cfg.epochs));

    auto worker = [&](unsigned w) {
        Rng rng(mix_seed(cfg.seed, w + 1));
        Workspace<float> ws;
        std::vector<TermId> kept;
        std::vector<std::size_t> offset;
        std::vector<TermId> context;
        for (unsigned epoch = 0; epoch < cfg.epochs; ++epoch) {
            auto& es = worker_stats[w][epoch];
            for (const auto& slice : shards[w]) {
                const auto& seg = segments[slice.segment];
                kept.clear();
                offset.clear();
                for (std::size_t i = slice.begin; i < slice.end; ++i) {
                    const TermId t = seg[i];
                    if (keep[t] >= 1.0 || keep[t] > rng.uniform()) {
                        kept.push_back(t);
                        offset.push_back(i - slice.begin);
                    }
                }
                const std::uint64_t base = processed.load(std::memory_order_relaxed);
                for (std::size_t pos = 0; pos < kept.size(); ++pos) {
                    const double progress = static_cast<double>(base + offset[pos]) / total_work;
                    const double lr = std::max(cfg.alpha_min, cfg.alpha0 - (cfg.alpha0 - cfg.alpha_min) * progress);
                    const std::size_t b = cfg.fixed_window ? cfg.window : 1 + rng.below(cfg.window);
                    context.clear();
                    const std::size_t lo = pos >= b ? pos - b : 0;
                    const std::size_t hi = std::min(kept.size() - 1, pos + b);
                    for (std::size_t j = lo; j <= hi; ++j)
                        if (j != pos) context.push_back(kept[j]);
                    if (context.empty()) continue;
                    es.loss_sum += sgd_step<float>(model, tables, kept[pos], context, lr, mode, rng, ws);
                    ++es.steps;
                }
                processed.fetch_add(slice.end - slice.begin, std::memory_order_relaxed);
            }
        }
    };

    if (cfg.workers == 1) {
        worker(0);
    } else {
        // Hogwild: workers update the shared matrices without locks.
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < cfg.workers; ++w) threads.emplace_back(worker, w);
        for (auto& t : threads) t.join();
    }

    model.trained_tokens += processed.load();
    if (stats) {
        stats->epochs.assign(cfg.epochs, {});
        for (const auto& ws : worker_stats)
            for (unsigned e = 0; e < cfg.epochs; ++e) {
                stats->epochs[e].loss_sum += ws[e].loss_sum;
                stats->epochs[e].steps += ws[e].steps;
            }
        stats->processed_tokens = processed.load();
        stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
}

} // namespace

EmbeddingModel train(const Corpus& corpus, const TrainingConfig& config, TrainingStats* stats) {
    config.validate();
    if (corpus.token_count == 0) throw ConfigError("cannot train on an empty corpus");
    Vocabulary vocab = build_vocab(corpus, config.min_count);
    if (vocab.empty()) throw ConfigError("vocabulary is empty after min_count filtering");
    if (config.loss == Loss::HierarchicalSoftmax && vocab.size() < 2)
        throw ConfigError("hierarchical softmax needs at least two vocabulary terms");
    EmbeddingModel model = init_model<float>(std::move(vocab), config);
    run_training(model, index_corpus(corpus, model.vocab, config.cross_sentence_window), config, stats);
    return model;
}

EmbeddingModel update_model(const EmbeddingModel& base, const Corpus& corpus,
                            const TrainingConfig& config, TrainingStats* stats) {
    config.validate();
    if (config.dims != base.dims())
        throw FormatError("update dims " + std::to_string(config.dims) + " do not match model dims " +
                          std::to_string(base.dims()));
    if (corpus.token_count == 0) return base;

    // Merge counts: known terms accumulate, new terms need min_count in the new corpus.
    std::vector<VocabEntry> merged(base.vocab.entries().begin(), base.vocab.entries().end());
    for (const auto& e : count_tokens(corpus)) {
        if (auto id = base.vocab.find(e.term)) merged[*id].count += e.count;
        else if (e.count >= config.min_count) merged.push_back(e);
    }
    const std::uint64_t min_count = std::min(base.vocab.min_count(), config.min_count);
    Vocabulary vocab = Vocabulary::from_counts(std::move(merged), min_count);

    EmbeddingModel model = init_model<float>(std::move(vocab), config);
    model.trained_tokens = base.trained_tokens;
    const bool hs = config.loss == Loss::HierarchicalSoftmax;
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
        const auto old = base.vocab.find(model.vocab.term(static_cast<TermId>(i)));
        if (!old) continue;
        const auto src = base.input_vectors.row(*old);
        std::copy(src.begin(), src.end(), model.input_vectors.row(i).begin());
        if (!hs && !base.output_vectors.empty()) {
            const auto out = base.output_vectors.row(*old);
            std::copy(out.begin(), out.end(), model.output_vectors.row(i).begin());
        }
    }
    // Tree node weights are carried over by position; the rebuilt tree reuses the old node slots.
    if (hs && !base.output_vectors.empty()) {
        const std::size_t rows = std::min(base.output_vectors.rows(), model.output_vectors.rows());
        for (std::size_t r = 0; r < rows; ++r) {
            const auto src = base.output_vectors.row(r);
            std::copy(src.begin(), src.end(), model.output_vectors.row(r).begin());
        }
    }
    run_training(model, index_corpus(corpus, model.vocab, config.cross_sentence_window), config, stats);
    return model;
}

} // namespace embedlab
