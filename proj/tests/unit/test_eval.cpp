#include <doctest.h>

#include <json.hpp>

#include "embedlab/error.hpp"
#include "embedlab/eval.hpp"
#include "embedlab/ppmi.hpp"
#include "oracles.hpp"

using namespace embedlab;

namespace {

std::vector<AnalogyQuestion> offset_questions(std::size_t groups, std::size_t roles) {
    std::vector<AnalogyQuestion> qs;
    for (std::size_t r1 = 0; r1 < roles; ++r1)
        for (std::size_t r2 = 0; r2 < roles; ++r2)
            for (std::size_t g1 = 0; g1 < groups; ++g1)
                for (std::size_t g2 = 0; g2 < groups; ++g2)
                    if (r1 != r2 && g1 != g2)
                        qs.push_back({oracle::offset_term(r1, g1), oracle::offset_term(r2, g1),
                                      oracle::offset_term(r1, g2), oracle::offset_term(r2, g2),
                                      "r" + std::to_string(r1) + "-r" + std::to_string(r2)});
    return qs;
}

IntrusionQuestion iq(std::array<std::string, 4> terms, std::string outlier, int difficulty = 1,
                     std::string section = "s") {
    return {std::move(terms), std::move(outlier), std::move(section), difficulty};
}

} // namespace

TEST_CASE("OFFSET solves every question of an exact-offset model") {
    const auto model = oracle::exact_offset_model(5, 3, 1);
    const DenseSimilarity sim(model);
    const auto report = eval_analogies(sim, offset_questions(5, 3), AnalogyMethod::Offset, {}, "exact");
    CHECK(report.total().accuracy() == 1.0);
    CHECK(report.total().attempted == 5 * 4 * 3 * 2);
    CHECK(report.by_section().size() == 6);
    CHECK(report.method == AnalogyMethod::Offset);
}

TEST_CASE("ONLY-B returns the nearest neighbor of b outside the question") {
    const auto model = oracle::model_from_rows({"a", "a*", "b", "near-b", "far"},
                                               {{1, 0, 0}, {0.9, 0.1, 0}, {0, 1, 0}, {0.1, 1, 0.05}, {0, 0, 1}});
    const DenseSimilarity sim(model);
    const AnalogyQuestion q{"a", "a*", "b", "far", "s"};
    CHECK(solve_analogy(sim, q, AnalogyMethod::OnlyB) == "near-b");
    CHECK(solve_analogy(sim, {"far", "a", "b", "x", "s"}, AnalogyMethod::OnlyB) == "near-b");
    // the answer never repeats a question term
    CHECK(solve_analogy(sim, {"a", "near-b", "b", "x", "s"}, AnalogyMethod::OnlyB) != "near-b");
}

TEST_CASE("IGNORE-A adds a* and b without subtracting a") {
    const auto model = oracle::model_from_rows({"a", "a*", "b", "x", "y"},
                                               {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0.7, 0.7}, {-1, 0.5, 0.5}});
    const DenseSimilarity sim(model);
    const AnalogyQuestion q{"a", "a*", "b", "y", "s"};
    CHECK(solve_analogy(sim, q, AnalogyMethod::IgnoreA) == "x");
    CHECK(solve_analogy(sim, q, AnalogyMethod::Offset) == "y");
}

TEST_CASE("OOV questions are skipped and case folding is optional") {
    const auto model = oracle::exact_offset_model(3, 2, 2);
    const DenseSimilarity sim(model);
    auto qs = offset_questions(3, 2);
    qs.push_back({"unknown", "r0_g0", "r1_g1", "r0_g1", "extra"});
    const auto report = eval_analogies(sim, qs, AnalogyMethod::Offset);
    CHECK(report.oov_skipped() == 1);
    CHECK(report.total().attempted == qs.size() - 1);
    CHECK(report.total().accuracy() == 1.0);

    std::vector<AnalogyQuestion> upper = {{"R0_G0", "R1_G0", "R0_G1", "R1_G1", "s"}};
    CHECK(eval_analogies(sim, upper, AnalogyMethod::Offset).oov_skipped() == 1);
    EvalOptions fold;
    fold.fold_case = true;
    const auto folded = eval_analogies(sim, upper, AnalogyMethod::Offset, fold);
    CHECK(folded.oov_skipped() == 0);
    CHECK(folded.total().correct == 1);
}

TEST_CASE("find_intruder agrees with the pairwise oracle") {
    Rng rng(41);
    int compared = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::array<std::vector<double>, 4> v;
        for (auto& row : v) {
            row.resize(3);
            for (auto& x : row) x = rng.uniform() * 2 - 1;
        }
        const std::vector<std::string> terms = {"w", "x", "y", "z"};
        const auto model = oracle::model_from_rows(terms, {v[0], v[1], v[2], v[3]});
        const auto expected = oracle::pairwise_intruder(v, 1e-6);
        if (expected.tie) continue;
        ++compared;
        const auto got = find_intruder(DenseSimilarity(model), terms);
        REQUIRE(got);
        CHECK(got->index == expected.index);
    }
    CHECK(compared > 400);
}

TEST_CASE("identical vectors give ties, earliest position, degenerate flag") {
    const auto model = oracle::model_from_rows({"a", "b", "c", "d"}, {{1, 1}, {1, 1}, {1, 1}, {1, 1}});
    const DenseSimilarity sim(model);
    const std::vector<std::string> terms = {"a", "b", "c", "d"};
    const auto pick = find_intruder(sim, terms);
    REQUIRE(pick);
    CHECK(pick->index == 0);
    CHECK(pick->tie);
    const auto report = eval_intrusion(sim, {iq({"a", "b", "c", "d"}, "d"), iq({"d", "c", "b", "a"}, "d")});
    CHECK(report.degenerate());
    CHECK(report.tie_count() == 2);
    CHECK(report.random_baseline() == 0.25);
}

TEST_CASE("intrusion report groups by section and difficulty") {
    const std::vector<std::string> terms = {"a0", "a1", "a2", "b0", "b1", "zz"};
    const auto model = oracle::model_from_rows(
        terms, {{1, 0.1}, {1, 0}, {1, -0.1}, {0, 1}, {0.1, 1}, {-1, -1}});
    const DenseSimilarity sim(model);
    const std::vector<IntrusionQuestion> qs = {
        iq({"a0", "a1", "b0", "a2"}, "b0", 1, "x"),
        iq({"b0", "a1", "a2", "a0"}, "b0", 2, "x"),
        iq({"a0", "a1", "a2", "b1"}, "a0", 2, "y"),  // gold is wrong on purpose
        iq({"a0", "a1", "a2", "missing"}, "missing", 3, "y"),
    };
    const auto r = eval_intrusion(sim, qs, {}, "m");
    CHECK(r.total().attempted == 3);
    CHECK(r.total().correct == 2);
    CHECK(r.oov_skipped() == 1);
    const auto sections = r.by_section();
    REQUIRE(sections.size() == 2);
    CHECK(sections[0].first == "x");
    CHECK(sections[0].second.accuracy() == 1.0);
    CHECK(sections[1].second.accuracy() == 0.0);
    const auto by = r.by_difficulty();
    CHECK(by.at(2).accuracy() == 0.5);
    CHECK_FALSE(by.at(3).accuracy().has_value());
}

TEST_CASE("frequency bins use inclusive edges") {
    CHECK(frequency_bin(0) == 1);
    CHECK(frequency_bin(20) == 1);
    CHECK(frequency_bin(20.5) == 2);
    CHECK(frequency_bin(50) == 2);
    CHECK(frequency_bin(51) == 3);
    CHECK(frequency_bin(100) == 3);
    CHECK(frequency_bin(101) == 4);
    CHECK(frequency_bin(500) == 4);
    CHECK(frequency_bin(501) == 5);
    CHECK(frequency_bin(1000) == 5);
    CHECK(frequency_bin(1001) == 6);
}

TEST_CASE("frequency analysis tables") {
    const auto model = oracle::model_from_rows({"a", "b", "c", "d"}, {{1, 0}, {1, 0.1}, {1, -0.1}, {0, 1}});
    const DenseSimilarity sim(model);
    const auto report = eval_intrusion(sim, {iq({"a", "b", "c", "d"}, "d"), iq({"a", "b", "d", "c"}, "c")});
    const auto vocab = Vocabulary::from_counts({{"a", 2000}, {"b", 600}, {"c", 30}, {"d", 10}}, 1);
    const auto fa = frequency_analysis(report, vocab);
    // averages: (2000+600+30+10)/4 = 660 -> bin 5 for both questions
    CHECK(fa.average[4].questions == 2);
    CHECK(fa.average[4].correct == 1);
    CHECK(fa.gold[0].questions == 1);   // d: 10
    CHECK(fa.gold[1].questions == 1);   // c: 30
    CHECK(fa.predicted[0].questions == 2);
    CHECK(fa.missing_terms.empty());
    const auto analogy = eval_analogies(sim, {}, AnalogyMethod::Offset);
    CHECK_THROWS_AS(frequency_analysis(analogy, vocab), UsageError);
    CHECK(frequency_table(fa).find("predicted outlier") != std::string::npos);
}

TEST_CASE("report formats") {
    const auto model = oracle::model_from_rows({"a", "b", "c", "d"}, {{1, 0}, {1, 0.1}, {1, -0.1}, {0, 1}});
    const DenseSimilarity sim(model);
    const auto r = eval_intrusion(sim, {iq({"a", "b", "c", "d"}, "d", 4), iq({"a", "b", "zz", "d"}, "d", 1)}, {}, "toy");

    const auto csv = emit_report(r, ReportFormat::Csv);
    CHECK(csv.rfind("section,difficulty,terms,gold,predicted,correct,skipped\n", 0) == 0);
    CHECK(csv.find("s,4,a b c d,d,d,1,0\n") != std::string::npos);
    CHECK(csv.find("s,1,a b zz d,d,,0,1\n") != std::string::npos);

    const auto jsonl = emit_report(r, ReportFormat::JsonLines);
    CHECK(parse_report_jsonl(jsonl) == r);
    CHECK_THROWS_AS(parse_report_jsonl("{\"section\":1}\n"), FormatError);

    const auto table = emit_report(r, ReportFormat::Table);
    CHECK(table.find("Number of tasks") != std::string::npos);
    CHECK(table.find("100.00") != std::string::npos);
    CHECK(table.find("random baseline: 25.00") != std::string::npos);

    const auto summary = nlohmann::json::parse(summary_json(r));
    CHECK(summary["total"]["accuracy"] == 1.0);
    CHECK(summary["total"]["skipped"] == 1);
    CHECK(summary["difficulty"]["4"]["correct"] == 1);

    CHECK(parse_report_format("jsonl") == ReportFormat::JsonLines);
    CHECK_THROWS_AS(parse_report_format("xml"), UsageError);
    CHECK(parse_analogy_method("3cosadd") == AnalogyMethod::Offset);
    CHECK_THROWS_AS(parse_analogy_method("cosmul"), UsageError);
}

TEST_CASE("comparison table has a row per model and a column per group") {
    const auto model = oracle::exact_offset_model(3, 2, 3);
    const DenseSimilarity sim(model);
    const auto qs = offset_questions(3, 2);
    const std::vector<EvalReport> reports = {
        eval_analogies(sim, qs, AnalogyMethod::Offset, {}, "exact"),
        eval_analogies(sim, qs, AnalogyMethod::OnlyB, {}, "exact"),
    };
    const auto table = comparison_table(reports, Grouping::Section);
    CHECK(table.find("Task Section") != std::string::npos);
    CHECK(table.find("r0-r1") != std::string::npos);
    CHECK(table.find("exact [only-b]") != std::string::npos);
    CHECK(table.find("Total") != std::string::npos);
    std::size_t lines = 0;
    for (char c : table) lines += c == '\n';
    CHECK(lines == 4);
}

TEST_CASE("evaluators work over PPMI models") {
    const auto planted = oracle::planted_corpus(10, 4, 20000, 5);
    const auto model = train_ppmi(planted.corpus, 1, 3);
    const auto qs = oracle::cross_cluster_questions(planted, 100, 6);
    const auto report = eval_intrusion(PpmiSimilarity(model), qs);
    CHECK(report.total().accuracy().value() > 0.9);
}
