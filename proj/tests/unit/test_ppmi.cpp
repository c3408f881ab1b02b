#include <doctest.h>

#include <cmath>

#include "embedlab/error.hpp"
#include "embedlab/ppmi.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace embedlab;

TEST_CASE("co-occurrence counts on a hand-checked sentence") {
    // a b a c, window 1: (a,b) (b,a) (b,a) (a,b) (a,c) (c,a)
    const auto corpus = oracle::to_corpus({{"a", "b", "a", "c"}});
    const auto vocab = build_vocab(corpus, 1);
    const auto m = count_cooccurrences(corpus, vocab, 1);
    const auto a = vocab.at("a"), b = vocab.at("b"), c = vocab.at("c");
    CHECK(m.counts.at(a, b) == 2);
    CHECK(m.counts.at(b, a) == 2);
    CHECK(m.counts.at(a, c) == 1);
    CHECK(m.counts.at(c, b) == 0);
    CHECK(m.counts.at(a, a) == 0);
    CHECK(m.total == 6);
    CHECK(m.row_sums[a] == 3);
    CHECK(m.column_sums[a] == 3);
}

TEST_CASE("out-of-vocabulary tokens keep their positions") {
    // rare sits between x and y, so with window 1 x and y never meet
    const auto corpus = oracle::to_corpus({{"x", "rare", "y"}, {"x", "y"}, {"x", "y"}});
    const auto vocab = build_vocab(corpus, 2);
    REQUIRE_FALSE(vocab.contains("rare"));
    const auto m = count_cooccurrences(corpus, vocab, 1);
    CHECK(m.counts.at(vocab.at("x"), vocab.at("y")) == 2);
}

TEST_CASE("sparse PPMI equals the dense oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sentences = oracle::random_sentences(rng, 30, 40, 10);
        const unsigned window = 1 + static_cast<unsigned>(rng.below(3));
        const auto model = train_ppmi(oracle::to_corpus(sentences), 1, window);
        std::vector<std::string> terms;
        for (const auto& e : model.vocab.entries()) terms.push_back(e.term);
        const auto dense = oracle::dense_ppmi(sentences, terms, window);
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (std::size_t j = 0; j < terms.size(); ++j)
                REQUIRE(std::abs(model.weights.at(i, static_cast<TermId>(j)) - dense[i][j]) < 1e-9);
    }
}

TEST_CASE("parallel counting matches serial counting") {
    Rng rng(78);
    const auto corpus = oracle::to_corpus(oracle::random_sentences(rng, 50, 300, 12));
    const auto vocab = build_vocab(corpus, 1);
    const auto serial = count_cooccurrences(corpus, vocab, 2, 1);
    const auto parallel = count_cooccurrences(corpus, vocab, 2, 4);
    CHECK(serial.counts == parallel.counts);
    CHECK(serial.total == parallel.total);
}

TEST_CASE("PPMI domain errors") {
    const auto corpus = oracle::to_corpus({{"solo"}});
    const auto vocab = build_vocab(corpus, 1);
    CHECK_THROWS_AS(count_cooccurrences(corpus, vocab, 0), DomainError);
    CHECK_THROWS_AS(to_ppmi(count_cooccurrences(corpus, vocab, 2), vocab, 2), DomainError);
}

TEST_CASE("PPMI persistence round trip") {
    TempDir dir;
    Rng rng(79);
    const auto model = train_ppmi(oracle::to_corpus(oracle::random_sentences(rng, 20, 60, 8)), 1, 2);
    save_ppmi(model, dir / "m.ppmi");
    CHECK(is_ppmi_file(dir / "m.ppmi"));
    const auto back = load_ppmi(dir / "m.ppmi");
    CHECK(back.vocab == model.vocab);
    CHECK(back.window == 2);
    CHECK(back.weights == model.weights);
    save_ppmi(back, dir / "n.ppmi");
    CHECK(slurp(dir / "m.ppmi") == slurp(dir / "n.ppmi"));

    spit(dir / "bad.ppmi", "ppmi 2 1\na 3\nb 2\na zz 1.0\n");
    try {
        load_ppmi(dir / "bad.ppmi");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.line() == 4);
    }
    spit(dir / "plain.txt", "1 2\na 1 2\n");
    CHECK_FALSE(is_ppmi_file(dir / "plain.txt"));
}

TEST_CASE("sparse similarity agrees with dense cosine") {
    Rng rng(80);
    const auto sentences = oracle::random_sentences(rng, 15, 80, 8);
    const auto model = train_ppmi(oracle::to_corpus(sentences), 1, 2);
    std::vector<std::string> terms;
    for (const auto& e : model.vocab.entries()) terms.push_back(e.term);
    const auto dense = oracle::dense_ppmi(sentences, terms, 2);
    const PpmiSimilarity sim(model);
    for (TermId i = 0; i < terms.size(); ++i)
        for (TermId j = 0; j < terms.size(); ++j) {
            double norm_i = 0, norm_j = 0;
            for (double x : dense[i]) norm_i += x * x;
            for (double x : dense[j]) norm_j += x * x;
            if (norm_i == 0 || norm_j == 0) continue;
            CHECK(sim.similarity(i, j) == doctest::Approx(oracle::cosine(dense[i], dense[j])).epsilon(1e-9));
        }
    const std::vector<std::string> q = {terms[0]};
    const auto hits = ppmi_most_similar(model, q, {}, 3);
    CHECK(hits.size() == 3);
    for (const auto& h : hits) CHECK(h.term != terms[0]);
}
