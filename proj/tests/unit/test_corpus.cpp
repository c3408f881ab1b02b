#include <doctest.h>

#include "embedlab/corpus.hpp"
#include "embedlab/error.hpp"
#include "embedlab/random.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace embedlab;

TEST_CASE("sentences split on . ? ! and drop empty pieces") {
    const auto s = split_sentences("Winter is coming. Is it?  Yes!!  ");
    REQUIRE(s.size() == 3);
    CHECK(s[0] == "Winter is coming");
    CHECK(s[1] == "Is it");
    CHECK(s[2] == "Yes");
    CHECK(split_sentences("").empty());
    CHECK(split_sentences(" ... ").empty());
}

TEST_CASE("tokenizer strips punctuation and typographic quotes") {
    const auto t = tokenize("\xE2\x80\x9CWell,\xE2\x80\x9D said Ned; \"the north\xE2\x80\x94remembers\"");
    const std::vector<std::string> expected = {"Well", "said", "Ned", "the", "north", "remembers"};
    CHECK(t == expected);
}

TEST_CASE("underscore survives so phrase tokens stay whole") {
    CHECK(tokenize("King_s_Landing (again)") == std::vector<std::string>{"King_s_Landing", "again"});
}

TEST_CASE("apostrophe acts as a separator") {
    CHECK(tokenize("Ned's sword") == std::vector<std::string>{"Ned", "s", "sword"});
}

TEST_CASE("unicode whitespace separates tokens") {
    // U+00A0 no-break space, U+2003 em space
    CHECK(tokenize("Jon\xC2\xA0Snow\xE2\x80\x83Stark") == std::vector<std::string>{"Jon", "Snow", "Stark"});
}

TEST_CASE("case folding covers ASCII and Latin-1 and leaves other letters alone") {
    CHECK(fold_case("JÖRMUNGAND") == "jörmungand");
    CHECK(fold_case("Ñandú") == "ñandú");
    CHECK(fold_case("ΣΑ") == "ΣΑ");
    PreprocessOptions o;
    o.lowercase = true;
    CHECK(tokenize("Ned STARK", o) == std::vector<std::string>{"ned", "stark"});
}

TEST_CASE("invalid UTF-8 is rejected with its byte offset") {
    const std::string bad = std::string("abc") + '\xC3' + '(';
    try {
        split_sentences(bad);
        FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
        CHECK(e.byte_offset() == 3);
    }
    CHECK_THROWS_AS(validate_utf8("\xED\xA0\x80"), DecodeError);  // surrogate
    CHECK_THROWS_AS(validate_utf8("\xC0\xAF"), DecodeError);      // overlong
    CHECK_NOTHROW(validate_utf8("Daenerys \xE2\x80\x94 Khaleesi"));
}

TEST_CASE("corpus file round trip is byte identical") {
    TempDir dir;
    spit(dir / "raw.txt", "The Lannisters send their regards. A girl has no name!\nValar morghulis?");
    const auto corpus = load_corpus(dir / "raw.txt");
    CHECK(corpus.sentences.size() == 3);
    CHECK(corpus.token_count == 12);
    write_corpus_file(corpus, dir / "a.txt");
    const auto back = read_corpus_file(dir / "a.txt");
    CHECK(back.sentences == corpus.sentences);
    write_corpus_file(back, dir / "b.txt");
    CHECK(slurp(dir / "a.txt") == slurp(dir / "b.txt"));
    CHECK_THROWS_AS(load_corpus(dir / "missing.txt"), IoError);
}

TEST_CASE("vocabulary counts agree with a map tally and are ordered") {
    Rng rng(11);
    const auto sentences = oracle::random_sentences(rng, 40, 200, 15);
    const auto corpus = oracle::to_corpus(sentences);
    const auto expected = oracle::tally(sentences);
    const auto vocab = build_vocab(corpus, 3);
    std::size_t kept = 0;
    for (const auto& [term, count] : expected) {
        if (count >= 3) {
            ++kept;
            REQUIRE(vocab.contains(term));
            CHECK(vocab.count(vocab.at(term)) == count);
        } else {
            CHECK_FALSE(vocab.contains(term));
        }
    }
    CHECK(vocab.size() == kept);
    for (std::size_t i = 1; i < vocab.size(); ++i) {
        const auto& a = vocab.entries()[i - 1];
        const auto& b = vocab.entries()[i];
        CHECK((a.count > b.count || (a.count == b.count && a.term < b.term)));
    }
    CHECK_THROWS_AS(build_vocab(corpus, 0), DomainError);
    CHECK_THROWS_AS(vocab.at("no-such-term"), LookupError);
}

TEST_CASE("subsampling keep probability") {
    CHECK(subsample_keep_prob(1, 1000, 1e-3) == 1.0);
    const double f = 0.1, t = 1e-3;
    CHECK(subsample_keep_prob(100, 1000, t) == doctest::Approx((std::sqrt(f / t) + 1) * t / f));
    CHECK_THROWS_AS(subsample_keep_prob(0, 10, 1e-3), DomainError);
}

TEST_CASE("phrase detection merges strong collocations, second pass at a lower threshold") {
    std::vector<std::vector<std::string>> s;
    for (int i = 0; i < 30; ++i) s.push_back({"w" + std::to_string(i), "kings", "landing", "v" + std::to_string(i)});
    for (int i = 0; i < 30; ++i) s.push_back({"kings", "x" + std::to_string(i)});
    for (int i = 0; i < 200; ++i)
        s.push_back({"f" + std::to_string(i), "g" + std::to_string(i), "h" + std::to_string(i), "k" + std::to_string(i),
                     "m" + std::to_string(i)});
    const auto corpus = oracle::to_corpus(s);
    REQUIRE(corpus.token_count == 1180);
    // (30 - 5) * 1180 / (60 * 30) = 16.4
    CHECK(phrase_score(30, 60, 30, 1180, 5.0) == doctest::Approx(16.388888));

    PhraseConfig cfg;
    cfg.passes = 1;
    const auto once = detect_phrases(corpus, cfg);
    CHECK(once.sentences[0] == std::vector<std::string>{"w0", "kings_landing", "v0"});
    CHECK(once.sentences[30] == s[30]);

    cfg.threshold = 20.0;
    CHECK(detect_phrases(corpus, cfg).sentences[0] == s[0]);
    cfg.passes = 2;  // second pass runs at 10
    CHECK(detect_phrases(corpus, cfg).sentences[0] == std::vector<std::string>{"w0", "kings_landing", "v0"});

    PhraseConfig bad;
    bad.passes = 0;
    CHECK_THROWS_AS(detect_phrases(corpus, bad), ConfigError);
}
