#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "embedlab/corpus.hpp"
#include "embedlab/similarity.hpp"

namespace embedlab {

/// Compressed sparse rows; column indices strictly increasing within a row.
template <typename Value>
struct SparseRows {
    std::vector<std::size_t> offsets{0};
    std::vector<TermId> columns;
    std::vector<Value> values;

    std::size_t rows() const noexcept { return offsets.size() - 1; }
    std::size_t nonzeros() const noexcept { return values.size(); }
    std::span<const TermId> row_columns(std::size_t r) const {
        return {columns.data() + offsets[r], offsets[r + 1] - offsets[r]};
    }
    std::span<const Value> row_values(std::size_t r) const {
        return {values.data() + offsets[r], offsets[r + 1] - offsets[r]};
    }
    /// Zero when the cell is not stored.
    Value at(std::size_t r, TermId c) const;

    friend bool operator==(const SparseRows&, const SparseRows&) = default;
};

/// Word x context co-occurrence counts with marginals. Words and contexts share the vocabulary.
struct CooccurrenceMatrix {
    SparseRows<std::uint64_t> counts;
    std::vector<std::uint64_t> row_sums;
    std::vector<std::uint64_t> column_sums;
    std::uint64_t total = 0;

    std::uint64_t count(TermId word, TermId context) const { return counts.at(word, context); }
};

/// For each position i and each j with 1 <= |i-j| <= window in the same sentence, counts
/// (w_i, w_j). OOV tokens occupy positions but are never counted. Shards are counted in
/// parallel when `workers` > 1 and merged.
CooccurrenceMatrix count_cooccurrences(const Corpus& corpus, const Vocabulary& vocab,
                                       unsigned window, unsigned workers = 1);

struct SparsePpmiModel {
    Vocabulary vocab;
    unsigned window = 0;
    SparseRows<double> weights;
};

/// PPMI(w,c) = max(0, log(#(w,c) |D| / (#(w) #(c)))); non-positive cells are not stored.
/// Throws DomainError when the matrix total is zero.
SparsePpmiModel to_ppmi(const CooccurrenceMatrix& counts, Vocabulary vocab, unsigned window);

/// Vocabulary + counting + weighting in one call.
SparsePpmiModel train_ppmi(const Corpus& corpus, std::uint64_t min_count, unsigned window,
                           unsigned workers = 1);

/// Text persistence:
///   `ppmi <|V|> <window>` | |V| lines `term count` | triplets `word context weight`
void save_ppmi(const SparsePpmiModel& model, const std::filesystem::path& path);
SparsePpmiModel load_ppmi(const std::filesystem::path& path);
/// True when the file starts with the PPMI header keyword.
bool is_ppmi_file(const std::filesystem::path& path);

/// Cosine over sparse PPMI rows. The model must outlive this object.
class PpmiSimilarity final : public SimilarityProvider {
public:
    explicit PpmiSimilarity(const SparsePpmiModel& model);

    const Vocabulary& vocabulary() const override { return model_->vocab; }
    std::vector<ScoredTerm> rank(std::span<const TermId> positives,
                                 std::span<const TermId> negatives, std::size_t topn,
                                 const std::unordered_set<TermId>& exclude) const override;
    std::vector<double> centroid_cosines(std::span<const TermId> group) const override;
    double similarity(TermId a, TermId b) const override;

private:
    double row_dot_dense(std::size_t r, std::span<const double> dense) const;

    const SparsePpmiModel* model_;
    std::vector<double> norms_;
};

std::vector<ScoredTerm> ppmi_most_similar(const SparsePpmiModel& model,
                                          std::span<const std::string> positives,
                                          std::span<const std::string> negatives, std::size_t topn,
                                          std::span<const std::string> exclude = {});

} // namespace embedlab
