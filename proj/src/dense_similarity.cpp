#include <algorithm>
#include <cmath>

#include "embedlab/embeddings.hpp"
#include "embedlab/error.hpp"

namespace embedlab {

namespace detail {

std::vector<ScoredTerm> top_terms(std::vector<std::pair<double, TermId>> scored, std::size_t topn,
                                  const Vocabulary& vocab) {
    const auto better = [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    };
    topn = std::min(topn, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(topn), scored.end(), better);
    std::vector<ScoredTerm> out;
    out.reserve(topn);
    for (std::size_t i = 0; i < topn; ++i)
        out.push_back({scored[i].second, vocab.term(scored[i].second), scored[i].first});
    return out;
}

} // namespace detail

std::vector<ScoredTerm> most_similar(const SimilarityProvider& provider,
                                     std::span<const std::string> positives,
                                     std::span<const std::string> negatives, std::size_t topn,
                                     std::span<const std::string> exclude) {
    const auto& vocab = provider.vocabulary();
    std::vector<TermId> pos;
    std::vector<TermId> neg;
    for (const auto& t : positives) pos.push_back(vocab.at(t));
    for (const auto& t : negatives) neg.push_back(vocab.at(t));
    std::unordered_set<TermId> excluded(pos.begin(), pos.end());
    excluded.insert(neg.begin(), neg.end());
    for (const auto& t : exclude)
        if (auto id = vocab.find(t)) excluded.insert(*id);
    if (topn == 0) return {};
    return provider.rank(pos, neg, topn, excluded);
}

template <typename Real>
double cosine(std::span<const Real> a, std::span<const Real> b) {
    if (a.size() != b.size()) throw DomainError("cosine of vectors with different lengths");
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += static_cast<double>(a[i]) * static_cast<double>(b[i]);
        aa += static_cast<double>(a[i]) * static_cast<double>(a[i]);
        bb += static_cast<double>(b[i]) * static_cast<double>(b[i]);
    }
    if (aa == 0.0 || bb == 0.0) throw DomainError("cosine of a zero vector");
    return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

template double cosine<float>(std::span<const float>, std::span<const float>);
template double cosine<double>(std::span<const double>, std::span<const double>);

namespace {

double dot(std::span<const float> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

} // namespace

DenseSimilarity::DenseSimilarity(const EmbeddingModel& model)
    : vocab_(&model.vocab), unit_(model.size(), model.dims()) {
    for (std::size_t r = 0; r < model.size(); ++r) {
        const auto src = model.input_vectors.row(r);
        double s = 0.0;
        for (float x : src) s += static_cast<double>(x) * x;
        if (s == 0.0) continue;
        const double inv = 1.0 / std::sqrt(s);
        auto dst = unit_.row(r);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<float>(src[i] * inv);
    }
}

std::vector<ScoredTerm> DenseSimilarity::rank(std::span<const TermId> positives,
                                              std::span<const TermId> negatives, std::size_t topn,
                                              const std::unordered_set<TermId>& exclude) const {
    if (topn == 0) return {};
    std::vector<double> query(unit_.cols(), 0.0);
    for (TermId id : positives) {
        const auto u = unit_.row(id);
        for (std::size_t i = 0; i < query.size(); ++i) query[i] += u[i];
    }
    for (TermId id : negatives) {
        const auto u = unit_.row(id);
        for (std::size_t i = 0; i < query.size(); ++i) query[i] -= u[i];
    }
    const double qn = norm(query);
    std::vector<std::pair<double, TermId>> scored;
    scored.reserve(unit_.rows());
    for (std::size_t r = 0; r < unit_.rows(); ++r) {
        const auto id = static_cast<TermId>(r);
        if (exclude.contains(id)) continue;
        scored.emplace_back(qn > 0.0 ? dot(unit_.row(r), query) / qn : 0.0, id);
    }
    return detail::top_terms(std::move(scored), topn, *vocab_);
}

std::vector<double> DenseSimilarity::centroid_cosines(std::span<const TermId> group) const {
    std::vector<double> mean(unit_.cols(), 0.0);
    for (TermId id : group) {
        const auto u = unit_.row(id);
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += u[i];
    }
    for (double& m : mean) m /= static_cast<double>(group.size());
    const double mn = norm(mean);
    std::vector<double> out;
    out.reserve(group.size());
    for (TermId id : group) out.push_back(mn > 0.0 ? dot(unit_.row(id), mean) / mn : 0.0);
    return out;
}

double DenseSimilarity::similarity(TermId a, TermId b) const {
    const auto ua = unit_.row(a);
    const auto ub = unit_.row(b);
    double s = 0.0;
    for (std::size_t i = 0; i < ua.size(); ++i) s += static_cast<double>(ua[i]) * ub[i];
    return s;
}

std::vector<ScoredTerm> most_similar(const EmbeddingModel& model,
                                     std::span<const std::string> positives,
                                     std::span<const std::string> negatives, std::size_t topn,
                                     std::span<const std::string> exclude) {
    const DenseSimilarity index(model);
    return most_similar(static_cast<const SimilarityProvider&>(index), positives, negatives, topn, exclude);
}

} // namespace embedlab
