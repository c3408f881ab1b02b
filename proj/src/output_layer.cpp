#include <algorithm>
#include <cmath>
#include <numeric>

#include "embedlab/embeddings.hpp"
#include "embedlab/error.hpp"

namespace embedlab {

HuffmanTree build_huffman(std::span<const std::uint64_t> counts) {
    const std::size_t n = counts.size();
    if (n < 2) throw ConfigError("hierarchical softmax needs at least two vocabulary terms");

    // Leaves 0..n-1 keep their term ids; internal nodes are n..2n-2, root last.
    std::vector<std::size_t> leaves(n);
    std::iota(leaves.begin(), leaves.end(), std::size_t{0});
    std::stable_sort(leaves.begin(), leaves.end(),
                     [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });

    std::vector<std::uint64_t> weight(2 * n - 1, 0);
    std::vector<std::size_t> parent(2 * n - 1, 0);
    std::vector<std::uint8_t> bit(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) weight[i] = counts[i];

    // Two-queue construction: leaves ascending, internal nodes are created in
    // non-decreasing weight order, so the smallest item is always at a queue front.
    std::size_t leaf_pos = 0;
    std::size_t node_pos = n;
    auto pop_min = [&](std::size_t next_node) {
        const bool leaf_left = leaf_pos < n;
        const bool node_left = node_pos < next_node;
        if (leaf_left && (!node_left || weight[leaves[leaf_pos]] < weight[node_pos]))
            return leaves[leaf_pos++];
        return node_pos++;
    };
    for (std::size_t k = n; k < 2 * n - 1; ++k) {
        const std::size_t a = pop_min(k);
        const std::size_t b = pop_min(k);
        weight[k] = weight[a] + weight[b];
        parent[a] = parent[b] = k;
        bit[a] = 0;
        bit[b] = 1;
    }

    const std::size_t root = 2 * n - 2;
    HuffmanTree tree;
    tree.node_count = n - 1;
    tree.codes.resize(n);
    tree.paths.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        auto& code = tree.codes[t];
        auto& path = tree.paths[t];
        for (std::size_t node = t; node != root; node = parent[node]) {
            code.push_back(bit[node]);
            path.push_back(static_cast<std::uint32_t>(parent[node] - n));
        }
        std::reverse(code.begin(), code.end());
        std::reverse(path.begin(), path.end());
    }
    return tree;
}

HuffmanTree build_huffman(const Vocabulary& vocab) {
    std::vector<std::uint64_t> counts;
    counts.reserve(vocab.size());
    for (const auto& e : vocab.entries()) counts.push_back(e.count);
    return build_huffman(counts);
}

UnigramTable::UnigramTable(const Vocabulary& vocab, double power) : power_(power) {
    if (vocab.empty()) throw ConfigError("noise distribution needs a non-empty vocabulary");
    if (!std::isfinite(power)) throw ConfigError("unigram power must be finite");
    cdf_.reserve(vocab.size());
    double total = 0.0;
    for (const auto& e : vocab.entries()) {
        total += std::pow(static_cast<double>(e.count), power);
        cdf_.push_back(total);
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw ConfigError("noise distribution has no probability mass");
    for (auto& c : cdf_) c /= total;
    cdf_.back() = 1.0;
}

double UnigramTable::probability(TermId id) const {
    if (id >= cdf_.size()) throw DomainError("term index out of range");
    return id == 0 ? cdf_[0] : cdf_[id] - cdf_[id - 1];
}

TermId UnigramTable::sample(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = static_cast<std::size_t>(it - cdf_.begin());
    return static_cast<TermId>(std::min(idx, cdf_.size() - 1));
}

UnigramTable build_unigram_table(const Vocabulary& vocab, double power) {
    return UnigramTable(vocab, power);
}

TrainingTables TrainingTables::build(const Vocabulary& vocab, double unigram_power) {
    TrainingTables t;
    if (!vocab.empty()) t.noise.emplace(vocab, unigram_power);
    if (vocab.size() >= 2) t.tree = build_huffman(vocab);
    return t;
}

} // namespace embedlab
