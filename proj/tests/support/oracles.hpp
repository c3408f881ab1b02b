#pragma once

// Independent reference implementations used to check the library. None of these call into
// the code under test beyond plain data types.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "embedlab/corpus.hpp"
#include "embedlab/datasets.hpp"
#include "embedlab/embeddings.hpp"
#include "embedlab/random.hpp"

namespace oracle {

using Sentences = std::vector<std::vector<std::string>>;
using DenseMatrix = std::vector<std::vector<double>>;

/// Term counts via a std::map tally.
std::map<std::string, std::uint64_t> tally(const Sentences& sentences);

/// Dense PPMI over the given term order: every ordered token pair within `window`
/// positions in the same sentence, OOV tokens keep their positions.
DenseMatrix dense_ppmi(const Sentences& sentences, const std::vector<std::string>& terms, unsigned window);

/// Minimal sum(count * code length) over all binary prefix codes, by exhaustive search over
/// merge orders (memoized on the sorted multiset of weights). Feasible for <= 8 symbols.
std::uint64_t optimal_code_cost(std::vector<std::uint64_t> counts);

/// count^power / sum.
std::vector<double> noise_distribution(const std::vector<std::uint64_t>& counts, double power);

/// Intruder as the term with the smallest summed cosine to the other three.
/// `tie` is set when the two smallest sums differ by less than `tie_eps`.
struct PairwisePick {
    std::size_t index = 0;
    bool tie = false;
};
PairwisePick pairwise_intruder(const std::array<std::vector<double>, 4>& vectors, double tie_eps = 1e-9);

double cosine(const std::vector<double>& a, const std::vector<double>& b);

/// Model whose term "r<role>_g<group>" is (e_group + f_role)/sqrt(2) in an orthonormal basis
/// rotated by a seeded random orthogonal matrix. Offsets between roles are exact.
embedlab::EmbeddingModel exact_offset_model(std::size_t groups, std::size_t roles, std::uint64_t seed);
std::string offset_term(std::size_t role, std::size_t group);

/// Model with the given rows; counts descend with row order.
embedlab::EmbeddingModel model_from_rows(const std::vector<std::string>& terms,
                                         const std::vector<std::vector<double>>& rows);

/// Two topical clusters plus shared filler words. Sentences draw 70% of tokens from one
/// cluster and the rest from filler. Terms are "a0".."a{k-1}", "b0".., "f0"...
struct PlantedCorpus {
    embedlab::Corpus corpus;
    std::vector<std::string> cluster_a;
    std::vector<std::string> cluster_b;
};
PlantedCorpus planted_corpus(std::size_t cluster_size, std::size_t filler, std::size_t tokens, std::uint64_t seed);

/// Three terms from one cluster, one from the other, in random order.
std::vector<embedlab::IntrusionQuestion> cross_cluster_questions(const PlantedCorpus& planted, std::size_t n,
                                                                 std::uint64_t seed);

/// Random sentences over a small alphabet of terms "t0".."t{vocab-1}" with Zipf-ish weights.
Sentences random_sentences(embedlab::Rng& rng, std::size_t vocab, std::size_t sentences, std::size_t max_len);

embedlab::Corpus to_corpus(const Sentences& sentences);

/// Central finite differences of the single-step loss against the applied update.
/// Builds a random 10-dim double model (|V| in 5..12, rows uniform in [-0.5, 0.5)), a random
/// center and 1..4 context words, and returns ||g_fd - g|| / max(||g_fd|| + ||g||, 1e-300)
/// over every input and output parameter. The analytic gradient is read off a step with lr = 1;
/// the loss at perturbed parameters comes from steps with lr = 0 and the same noise draws.
double gradient_relative_error(const embedlab::StepMode& mode, std::uint64_t seed, double h = 1e-5);

} // namespace oracle
