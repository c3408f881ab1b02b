#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "embedlab/corpus.hpp"
#include "embedlab/random.hpp"
#include "embedlab/similarity.hpp"

namespace embedlab {

/// Dense row-major matrix.
template <typename Real>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, Real fill = Real{0})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<Real> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Real> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<Real> data() noexcept { return data_; }
    std::span<const Real> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Real> data_;
};

enum class Algorithm { SkipGram, Cbow };
enum class Loss { NegativeSampling, HierarchicalSoftmax };

std::string_view to_string(Algorithm a);
std::string_view to_string(Loss l);
/// Accepts "sg", "skip-gram", "skipgram", "cbow".
Algorithm parse_algorithm(std::string_view name);
/// Accepts "ns", "negative-sampling", "hs", "hierarchical-softmax".
Loss parse_loss(std::string_view name);

struct TrainingConfig {
    std::size_t dims = 100;
    Algorithm algorithm = Algorithm::Cbow;
    Loss loss = Loss::NegativeSampling;
    unsigned negative = 5;       // noise words per target, negative sampling only
    unsigned window = 5;         // max context half-width
    unsigned epochs = 5;
    double alpha0 = 0.025;
    double alpha_min = 0.0001;
    double subsample_t = 1e-3;   // 0 disables subsampling
    std::uint64_t min_count = 5;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool cross_sentence_window = false;
    bool fixed_window = false;   // always use the full window instead of 1..window
    double unigram_power = 0.75;

    /// Throws ConfigError.
    void validate() const;
    friend bool operator==(const TrainingConfig&, const TrainingConfig&) = default;
};

/// Named configurations: w2v-default, w2v-ww12-i15-ns, w2v-ww12-i15-hs, w2v-CBOW.
/// Throws UsageError listing the known names.
TrainingConfig preset(std::string_view name);
std::vector<std::string> preset_names();

std::string config_to_json(const TrainingConfig& config);
TrainingConfig config_from_json(std::string_view json);

/// Word vectors plus the output-layer weights used for training.
///
/// `output_vectors` has either |V| rows (trainable model) or zero rows (a view loaded
/// from a plain vector file). With hierarchical softmax the output rows hold the
/// |V|-1 internal tree nodes; the last row is unused.
template <typename Real>
struct BasicEmbeddingModel {
    Vocabulary vocab;
    Matrix<Real> input_vectors;
    Matrix<Real> output_vectors;
    TrainingConfig config;
    std::uint64_t trained_tokens = 0;

    std::size_t dims() const noexcept { return input_vectors.cols(); }
    std::size_t size() const noexcept { return vocab.size(); }
    /// Throws LookupError.
    std::span<const Real> vector(std::string_view term) const {
        return input_vectors.row(vocab.at(term));
    }
    /// Throws ConfigError when shapes disagree or an entry is not finite.
    void validate() const;
};

using EmbeddingModel = BasicEmbeddingModel<float>;

// ---------------------------------------------------------------------------
// Output-layer structures

struct HuffmanTree {
    /// Per term: branch bits from the root.
    std::vector<std::vector<std::uint8_t>> codes;
    /// Per term: internal node indices from the root, same length as the code.
    std::vector<std::vector<std::uint32_t>> paths;
    std::size_t node_count = 0;
};

/// Throws ConfigError for fewer than two terms.
HuffmanTree build_huffman(std::span<const std::uint64_t> counts);
HuffmanTree build_huffman(const Vocabulary& vocab);

/// Noise distribution P(term) proportional to count^power.
class UnigramTable {
public:
    UnigramTable(const Vocabulary& vocab, double power);

    double probability(TermId id) const;
    TermId sample(Rng& rng) const;
    std::size_t size() const noexcept { return cdf_.size(); }
    double power() const noexcept { return power_; }

private:
    std::vector<double> cdf_;
    double power_;
};

UnigramTable build_unigram_table(const Vocabulary& vocab, double power = 0.75);

/// Noise table and Huffman tree for a vocabulary; the tree is absent when |V| < 2.
struct TrainingTables {
    std::optional<UnigramTable> noise;
    std::optional<HuffmanTree> tree;

    static TrainingTables build(const Vocabulary& vocab, double unigram_power = 0.75);
};

struct StepMode {
    Algorithm algorithm = Algorithm::SkipGram;
    Loss loss = Loss::NegativeSampling;
    unsigned negative = 5;
};

/// One SGD step on the loss of (center, context), returning the loss before the update.
///
/// Skip-gram predicts every context word from the center word's input vector; CBOW predicts
/// the center word from the mean of the context input vectors. All dot products are taken
/// at the pre-update parameters, so the update is exactly -lr times the gradient of
///   NS: -log s(u_o.h) - sum_k log s(-u_k.h)      HS: -sum_nodes log s(+-u_n.h)
/// Noise words equal to the target are redrawn up to 8 times, then skipped.
/// Throws DomainError for out-of-range indices or negative lr.
template <typename Real>
double train_step(BasicEmbeddingModel<Real>& model, const TrainingTables& tables, TermId center,
                  std::span<const TermId> context, double lr, const StepMode& mode, Rng& rng);

/// Fresh model: input rows uniform in [-0.5/dims, 0.5/dims), output rows zero.
template <typename Real>
BasicEmbeddingModel<Real> init_model(Vocabulary vocab, const TrainingConfig& config);

struct EpochStats {
    double loss_sum = 0.0;
    std::uint64_t steps = 0;
    double mean_loss() const { return steps ? loss_sum / static_cast<double>(steps) : 0.0; }
};

struct TrainingStats {
    std::vector<EpochStats> epochs;
    std::uint64_t processed_tokens = 0;
    double seconds = 0.0;
};

/// Trains a word2vec model. Single-worker runs are bit-reproducible for a given seed.
/// With more workers, updates race without synchronization and results are nondeterministic.
/// Throws ConfigError when the vocabulary is empty after min_count filtering.
EmbeddingModel train(const Corpus& corpus, const TrainingConfig& config,
                     TrainingStats* stats = nullptr);

/// Continues training on a new corpus. Terms meeting `config.min_count` in the new corpus are
/// appended with fresh vectors; counts of known terms accumulate. `config.dims` must match.
EmbeddingModel update_model(const EmbeddingModel& model, const Corpus& corpus,
                            const TrainingConfig& config, TrainingStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Persistence

/// Header `|V| dims`, then `term v1 ... v_dims` per line, values printed with %.6g.
void save_text(const EmbeddingModel& model, const std::filesystem::path& path);
/// Loads the text format. A first line with more than two fields is read as a headerless
/// (GloVe-style) file. The result has no output layer and synthetic descending counts.
EmbeddingModel load_text(const std::filesystem::path& path);

/// Compact binary format with both matrices, counts and config (see docs/formats.md).
void save_binary(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_binary(const std::filesystem::path& path);

/// Dispatches on the binary magic; anything else is read as text.
EmbeddingModel load_embedding_model(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Similarity

/// Throws DomainError for a zero vector or mismatched lengths.
template <typename Real>
double cosine(std::span<const Real> a, std::span<const Real> b);

/// Cosine queries over the unit-normalized input vectors of a dense model.
/// The model's vocabulary must outlive this object.
class DenseSimilarity final : public SimilarityProvider {
public:
    explicit DenseSimilarity(const EmbeddingModel& model);

    const Vocabulary& vocabulary() const override { return *vocab_; }
    std::vector<ScoredTerm> rank(std::span<const TermId> positives,
                                 std::span<const TermId> negatives, std::size_t topn,
                                 const std::unordered_set<TermId>& exclude) const override;
    std::vector<double> centroid_cosines(std::span<const TermId> group) const override;
    double similarity(TermId a, TermId b) const override;

private:
    const Vocabulary* vocab_;
    Matrix<float> unit_;
};

std::vector<ScoredTerm> most_similar(const EmbeddingModel& model,
                                     std::span<const std::string> positives,
                                     std::span<const std::string> negatives, std::size_t topn,
                                     std::span<const std::string> exclude = {});

} // namespace embedlab
