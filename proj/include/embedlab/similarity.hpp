#pragma once

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "embedlab/corpus.hpp"

namespace embedlab {

struct ScoredTerm {
    TermId id = 0;
    std::string term;
    double similarity = 0.0;
};

/// Similarity primitive shared by dense and sparse models. Evaluators only see this interface.
class SimilarityProvider {
public:
    virtual ~SimilarityProvider() = default;

    virtual const Vocabulary& vocabulary() const = 0;

    /// Ranks every vocabulary row by cosine against
    /// sum(unit(positives)) - sum(unit(negatives)), highest first, ties by vocabulary order.
    /// Excluded ids never appear.
    virtual std::vector<ScoredTerm> rank(std::span<const TermId> positives,
                                         std::span<const TermId> negatives, std::size_t topn,
                                         const std::unordered_set<TermId>& exclude) const = 0;

    /// Cosine of each member against the mean of the members' unit vectors.
    virtual std::vector<double> centroid_cosines(std::span<const TermId> group) const = 0;

    /// Cosine between two rows; 0 when either row is zero.
    virtual double similarity(TermId a, TermId b) const = 0;
};

/// Term-level query. Query terms never appear in the result.
/// Throws LookupError naming the first OOV query term.
std::vector<ScoredTerm> most_similar(const SimilarityProvider& provider,
                                     std::span<const std::string> positives,
                                     std::span<const std::string> negatives, std::size_t topn,
                                     std::span<const std::string> exclude = {});

namespace detail {
/// Keeps the best `topn` of (similarity, id) by similarity desc, id asc.
std::vector<ScoredTerm> top_terms(std::vector<std::pair<double, TermId>> scored, std::size_t topn,
                                  const Vocabulary& vocab);
}

} // namespace embedlab
