// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is non-zero when any
// criterion fails. Criteria 10-14 need the ASOIF text and datasets; point
// EMBEDLAB_ASOIF_CORPUS, EMBEDLAB_ASOIF_ANALOGIES and EMBEDLAB_ASOIF_INTRUSION at them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "embedlab/corpus.hpp"
#include "embedlab/datasets.hpp"
#include "embedlab/embeddings.hpp"
#include "embedlab/eval.hpp"
#include "embedlab/gridsearch.hpp"
#include "embedlab/ppmi.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace embedlab;

namespace {

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind;
    std::string detail;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)}; }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir() {
    auto dir = fs::temp_directory_path() / ("embedlab-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

// ---------------------------------------------------------------------------

Outcome ppmi_oracle() {
    double worst = 0.0;
    std::size_t max_vocab = 0;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        Rng rng(mix_seed(101, trial));
        const auto sentences = oracle::random_sentences(rng, 10 + rng.below(50), 20 + rng.below(60), 12);
        const unsigned window = 1 + static_cast<unsigned>(rng.below(3));
        const std::uint64_t min_count = 1 + rng.below(3);
        const auto corpus = oracle::to_corpus(sentences);
        const auto vocab = build_vocab(corpus, min_count);
        if (vocab.size() > 50 || vocab.size() < 2) continue;
        const auto model = train_ppmi(corpus, min_count, window);
        std::vector<std::string> terms;
        for (const auto& e : model.vocab.entries()) terms.push_back(e.term);
        max_vocab = std::max(max_vocab, terms.size());
        const auto dense = oracle::dense_ppmi(sentences, terms, window);
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (std::size_t j = 0; j < terms.size(); ++j)
                worst = std::max(worst, std::abs(model.weights.at(i, static_cast<TermId>(j)) - dense[i][j]));
        for (double v : model.weights.values)
            if (!(v > 0.0)) return verdict(false, "non-positive weight stored");
    }
    return verdict(worst <= 1e-9, fmt("50 corpora, max |V| %.0f, max |sparse - dense| = %.3g (<= 1e-9)",
                                      static_cast<double>(max_vocab), worst));
}

Outcome gradient_checks() {
    const StepMode modes[] = {
        {Algorithm::SkipGram, Loss::NegativeSampling, 5},
        {Algorithm::SkipGram, Loss::HierarchicalSoftmax, 0},
        {Algorithm::Cbow, Loss::NegativeSampling, 5},
        {Algorithm::Cbow, Loss::HierarchicalSoftmax, 0},
    };
    double worst = 0.0;
    for (const auto& mode : modes)
        for (std::uint64_t c = 0; c < 20; ++c)
            worst = std::max(worst, oracle::gradient_relative_error(mode, mix_seed(202, c)));
    return verdict(worst <= 1e-5, fmt("4 modes x 20 cases, 10 dims, max relative error %.3g (<= 1e-5)", worst));
}

Outcome noise_distribution() {
    Rng rng(303);
    std::vector<VocabEntry> entries;
    std::uint64_t count = 5000;
    for (int i = 0; i < 20; ++i) {
        count -= rng.below(count / 4 + 1);
        entries.push_back({"w" + std::to_string(i), std::max<std::uint64_t>(count, 1)});
    }
    const auto vocab = Vocabulary::from_ordered(entries, 1);
    const auto table = build_unigram_table(vocab, 0.75);
    std::vector<std::uint64_t> counts;
    for (const auto& e : entries) counts.push_back(e.count);
    const auto expected = oracle::noise_distribution(counts, 0.75);
    std::vector<std::uint64_t> hits(20, 0);
    Rng draws(304);
    const std::size_t n = 1'000'000;
    for (std::size_t i = 0; i < n; ++i) ++hits[table.sample(draws)];
    double worst = 0.0;
    for (std::size_t i = 0; i < 20; ++i)
        worst = std::max(worst, std::abs(static_cast<double>(hits[i]) / static_cast<double>(n) - expected[i]));
    return verdict(worst <= 0.01, fmt("10^6 draws, |V| = 20, max |freq - count^0.75/Z| = %.4f (<= 0.01)", worst));
}

Outcome huffman_optimality() {
    Rng rng(404);
    std::size_t bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        std::vector<std::uint64_t> counts(n);
        for (auto& c : counts) c = 1 + rng.below(100);
        std::sort(counts.rbegin(), counts.rend());
        const auto tree = build_huffman(counts);
        std::uint64_t cost = 0;
        for (std::size_t i = 0; i < n; ++i) cost += counts[i] * tree.codes[i].size();
        bool prefix_free = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && tree.codes[i].size() <= tree.codes[j].size() &&
                    std::equal(tree.codes[i].begin(), tree.codes[i].end(), tree.codes[j].begin()))
                    prefix_free = false;
        bool paths_ok = tree.node_count == n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            paths_ok = paths_ok && tree.paths[i].size() == tree.codes[i].size() && !tree.codes[i].empty();
            for (auto node : tree.paths[i]) paths_ok = paths_ok && node < tree.node_count;
        }
        if (cost != oracle::optimal_code_cost(counts) || !prefix_free || !paths_ok) ++bad;
    }
    return verdict(bad == 0, fmt("100 vocabularies of size 2..8, %.0f non-optimal or malformed trees", bad));
}

Outcome analogy_oracle() {
    const std::size_t groups = 6, roles = 4;
    const auto model = oracle::exact_offset_model(groups, roles, 505);
    const DenseSimilarity sim(model);
    std::vector<AnalogyQuestion> qs;
    for (std::size_t r1 = 0; r1 < roles; ++r1)
        for (std::size_t r2 = 0; r2 < roles; ++r2)
            for (std::size_t g1 = 0; g1 < groups; ++g1)
                for (std::size_t g2 = 0; g2 < groups; ++g2) {
                    if (r1 == r2 || g1 == g2) continue;
                    qs.push_back({oracle::offset_term(r1, g1), oracle::offset_term(r2, g1), oracle::offset_term(r1, g2),
                                  oracle::offset_term(r2, g2), "offsets"});
                }
    const auto acc = eval_analogies(sim, qs, AnalogyMethod::Offset).total().accuracy().value_or(0.0);

    // ONLY-B: the answer depends on b alone, up to the excluded terms.
    Rng rng(506);
    std::size_t checked = 0, violations = 0;
    const auto& vocab = model.vocab;
    for (const auto& q : qs) {
        AnalogyQuestion swapped = q;
        swapped.a = vocab.term(static_cast<TermId>(rng.below(vocab.size())));
        swapped.a_star = vocab.term(static_cast<TermId>(rng.below(vocab.size())));
        if (swapped.a == q.b || swapped.a_star == q.b) continue;
        const auto p = solve_analogy(sim, q, AnalogyMethod::OnlyB);
        const auto p2 = solve_analogy(sim, swapped, AnalogyMethod::OnlyB);
        if (!p || !p2) {
            ++violations;
            continue;
        }
        if (*p == swapped.a || *p == swapped.a_star || *p2 == q.a || *p2 == q.a_star) continue;
        ++checked;
        if (*p != *p2) ++violations;
    }
    return verdict(acc == 1.0 && violations == 0 && checked > 100,
                   fmt("OFFSET accuracy %.2f%% on %.0f questions; ONLY-B changed in %.0f of %.0f substitutions",
                       acc * 100, static_cast<double>(qs.size()), static_cast<double>(violations),
                       static_cast<double>(checked)));
}

Outcome intrusion_oracle() {
    Rng rng(606);
    std::size_t compared = 0, disagreements = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t dims = 2 + rng.below(4);
        std::array<std::vector<double>, 4> v;
        for (std::size_t i = 0; i < 4; ++i) {
            v[i].resize(dims);
            for (auto& x : v[i]) x = rng.uniform() * 2 - 1;
        }
        if (trial % 2 == 0) {
            // three near one direction, one elsewhere
            const std::size_t odd = rng.below(4);
            for (std::size_t i = 0; i < 4; ++i)
                if (i != odd)
                    for (std::size_t d = 0; d < dims; ++d) v[i][d] = v[(odd + 1) % 4][d] + 0.3 * (rng.uniform() - 0.5);
        }
        const std::vector<std::string> terms = {"q0", "q1", "q2", "q3"};
        const auto model = oracle::model_from_rows(terms, {v[0], v[1], v[2], v[3]});
        const DenseSimilarity sim(model);
        const auto expected = oracle::pairwise_intruder(v, 1e-6);
        if (expected.tie) continue;
        const auto got = find_intruder(sim, terms);
        ++compared;
        if (!got || got->index != expected.index) ++disagreements;
    }

    // random baseline
    const std::size_t n_terms = 400, dims = 50;
    std::vector<std::string> terms;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n_terms; ++i) {
        terms.push_back("x" + std::to_string(i));
        std::vector<double> row(dims);
        for (auto& x : row) x = rng.uniform() * 2 - 1;
        rows.push_back(std::move(row));
    }
    const auto model = oracle::model_from_rows(terms, rows);
    std::vector<IntrusionQuestion> qs;
    for (int q = 0; q < 10000; ++q) {
        IntrusionQuestion iq;
        std::vector<std::size_t> picked;
        while (picked.size() < 4) {
            const auto k = rng.below(n_terms);
            if (std::find(picked.begin(), picked.end(), k) == picked.end()) picked.push_back(k);
        }
        for (std::size_t i = 0; i < 4; ++i) iq.terms[i] = terms[picked[i]];
        iq.outlier = iq.terms[rng.below(4)];
        iq.section = "random";
        qs.push_back(iq);
    }
    const auto acc = eval_intrusion(DenseSimilarity(model), qs).total().accuracy().value_or(0.0);
    return verdict(disagreements == 0 && compared > 1000 && std::abs(acc - 0.25) <= 0.02,
                   fmt("%.0f of %.0f non-tie geometries disagree with the pairwise oracle; random accuracy %.4f "
                       "(0.25 +- 0.02)",
                       static_cast<double>(disagreements), static_cast<double>(compared), acc));
}

Outcome planted_clusters() {
    const auto planted = oracle::planted_corpus(30, 10, 100'000, 707);
    const auto questions = oracle::cross_cluster_questions(planted, 500, 708);
    TrainingConfig config;
    config.algorithm = Algorithm::SkipGram;
    config.loss = Loss::NegativeSampling;
    config.window = 5;
    config.dims = 50;
    config.epochs = 5;
    config.seed = 709;
    config.workers = 1;
    const auto model = train(planted.corpus, config);
    const auto sgns = eval_intrusion(DenseSimilarity(model), questions).total().accuracy().value_or(0.0);
    const auto ppmi_model = train_ppmi(planted.corpus, config.min_count, 5);
    const auto ppmi = eval_intrusion(PpmiSimilarity(ppmi_model), questions).total().accuracy().value_or(0.0);
    return verdict(sgns >= 0.90 && ppmi >= 0.85,
                   fmt("%.0f tokens, 500 questions: SGNS %.2f%% (>= 90), PPMI %.2f%% (>= 85)",
                       static_cast<double>(planted.corpus.token_count), sgns * 100, ppmi * 100));
}

Outcome dataset_arithmetic() {
    Rng rng(808);
    TaskDefinition defs;
    std::size_t expected_analogies = 0;
    for (int s = 0; s < 5; ++s) {
        AnalogySection sec;
        sec.name = "sec" + std::to_string(s);
        const std::size_t n = 2 + rng.below(9);
        for (std::size_t i = 0; i < n; ++i)
            sec.pairs.emplace_back("p" + std::to_string(s) + "_" + std::to_string(i) + "a",
                                   "p" + std::to_string(s) + "_" + std::to_string(i) + "b");
        expected_analogies += n * (n - 1);
        defs.analogy_sections.push_back(sec);
    }
    std::size_t triples = 0;
    for (int s = 0; s < 3; ++s) {
        IntrusionSection sec;
        sec.name = "group" + std::to_string(s);
        const std::size_t n = 1 + rng.below(4);
        for (std::size_t t = 0; t < n; ++t) {
            IntrusionTriple tr;
            for (std::size_t k = 0; k < 3; ++k) tr.related[k] = "r" + std::to_string(s) + std::to_string(t) + std::to_string(k);
            for (std::size_t d = 0; d < 4; ++d)
                for (std::size_t k = 0; k < 5; ++k)
                    tr.outliers[d].push_back("o" + std::to_string(s) + std::to_string(t) + std::to_string(d) + std::to_string(k));
            sec.triples.push_back(tr);
        }
        triples += n;
        defs.intrusion_sections.push_back(sec);
    }
    const auto analogies = generate_analogy_questions(defs);
    const auto intrusion = generate_intrusion_questions(defs);
    bool per_section = true;
    for (const auto& sec : defs.analogy_sections) {
        const auto n = sec.pairs.size();
        const auto got = std::count_if(analogies.begin(), analogies.end(), [&](const auto& q) { return q.section == sec.name; });
        per_section = per_section && static_cast<std::size_t>(got) == n * (n - 1);
    }
    std::array<std::size_t, 5> histogram{};
    for (const auto& q : intrusion) ++histogram[static_cast<std::size_t>(q.difficulty)];
    const bool uniform = histogram[0] == 0 && histogram[1] == 5 * triples && histogram[2] == 5 * triples &&
                         histogram[3] == 5 * triples && histogram[4] == 5 * triples;

    // byte-identical round trips
    std::vector<std::string> broken;
    const auto a_text = format_analogy_questions(analogies);
    if (format_analogy_questions(parse_analogy_questions(a_text)) != a_text) broken.push_back("analogy");
    const auto i_text = format_intrusion_questions(intrusion);
    if (format_intrusion_questions(parse_intrusion_questions(i_text)) != i_text) broken.push_back("intrusion");

    const auto dir = scratch_dir();
    const auto planted = oracle::planted_corpus(10, 5, 5000, 809);
    write_corpus_file(planted.corpus, dir / "c1.txt");
    write_corpus_file(read_corpus_file(dir / "c1.txt"), dir / "c2.txt");
    if (slurp(dir / "c1.txt") != slurp(dir / "c2.txt")) broken.push_back("corpus");

    TrainingConfig config;
    config.dims = 8;
    config.epochs = 1;
    config.min_count = 1;
    const auto model = train(planted.corpus, config);
    save_text(model, dir / "m1.txt");
    save_text(load_text(dir / "m1.txt"), dir / "m2.txt");
    if (slurp(dir / "m1.txt") != slurp(dir / "m2.txt")) broken.push_back("text-vectors");
    save_binary(model, dir / "m1.bin");
    save_binary(load_binary(dir / "m1.bin"), dir / "m2.bin");
    if (slurp(dir / "m1.bin") != slurp(dir / "m2.bin")) broken.push_back("binary-model");
    const auto pm = train_ppmi(planted.corpus, 1, 2);
    save_ppmi(pm, dir / "p1.ppmi");
    save_ppmi(load_ppmi(dir / "p1.ppmi"), dir / "p2.ppmi");
    if (slurp(dir / "p1.ppmi") != slurp(dir / "p2.ppmi")) broken.push_back("ppmi");

    const auto report = eval_intrusion(DenseSimilarity(model), oracle::cross_cluster_questions(planted, 40, 810));
    const auto jsonl = emit_report(report, ReportFormat::JsonLines);
    if (emit_report(parse_report_jsonl(jsonl), ReportFormat::JsonLines) != jsonl) broken.push_back("report-jsonl");

    GridRow row;
    row.config = config;
    row.id = config_id(config);
    row.intrusion_accuracy = 0.123456789012345;
    row.error = "quoted, \"text\"";
    row.train_seconds = 1.25;
    const auto csv = grid_csv_header() + "\n" + format_grid_row(row) + "\n";
    const auto reparsed = parse_grid_results(csv);
    if (reparsed.size() != 1 || grid_csv_header() + "\n" + format_grid_row(reparsed[0]) + "\n" != csv)
        broken.push_back("grid-csv");
    fs::remove_all(dir);

    std::string detail = std::to_string(analogies.size()) + " analogy questions (expected " +
                         std::to_string(expected_analogies) + "), " + std::to_string(intrusion.size()) +
                         " intrusion questions for " + std::to_string(triples) + " triples, difficulty histogram " +
                         std::to_string(histogram[1]) + "/" + std::to_string(histogram[2]) + "/" +
                         std::to_string(histogram[3]) + "/" + std::to_string(histogram[4]) + "; round trips: ";
    if (broken.empty()) detail += "all byte-identical";
    for (const auto& b : broken) detail += b + " differs ";
    return verdict(analogies.size() == expected_analogies && per_section && intrusion.size() == 20 * triples &&
                       uniform && broken.empty(),
                   detail);
}

Outcome determinism() {
    const auto planted = oracle::planted_corpus(20, 8, 20'000, 909);
    const auto dir = scratch_dir();
    std::vector<std::string> differing;
    for (auto algorithm : {Algorithm::SkipGram, Algorithm::Cbow})
        for (auto loss : {Loss::NegativeSampling, Loss::HierarchicalSoftmax}) {
            TrainingConfig config;
            config.algorithm = algorithm;
            config.loss = loss;
            config.dims = 20;
            config.epochs = 2;
            config.seed = 910;
            config.workers = 1;
            save_binary(train(planted.corpus, config), dir / "a.bin");
            save_binary(train(planted.corpus, config), dir / "b.bin");
            if (slurp(dir / "a.bin") != slurp(dir / "b.bin"))
                differing.push_back(std::string(to_string(algorithm)) + "/" + std::string(to_string(loss)));
        }
    fs::remove_all(dir);
    std::string detail = "4 modes trained twice, single worker: ";
    if (differing.empty()) detail += "identical model files";
    for (const auto& d : differing) detail += d + " differs ";
    return verdict(differing.empty(), detail);
}

// ---------------------------------------------------------------------------
// Data-dependent criteria

struct AsoifData {
    Corpus corpus;
    std::vector<AnalogyQuestion> analogies;
    std::vector<IntrusionQuestion> intrusion;
};

std::optional<AsoifData>& asoif() {
    static std::optional<AsoifData> data;
    static bool tried = false;
    if (!tried) {
        tried = true;
        const char* c = std::getenv("EMBEDLAB_ASOIF_CORPUS");
        const char* a = std::getenv("EMBEDLAB_ASOIF_ANALOGIES");
        const char* i = std::getenv("EMBEDLAB_ASOIF_INTRUSION");
        if (c && a && i && fs::exists(c) && fs::exists(a) && fs::exists(i)) {
            data.emplace();
            data->corpus = load_corpus(c);
            data->analogies = parse_analogy_file(a);
            data->intrusion = parse_intrusion_file(i);
        }
    }
    return data;
}

const char* kNoData = "ASOIF data not supplied (set EMBEDLAB_ASOIF_CORPUS, EMBEDLAB_ASOIF_ANALOGIES, "
                      "EMBEDLAB_ASOIF_INTRUSION)";

TrainingConfig asoif_config(const char* name) {
    auto c = preset(name);
    c.seed = 1;
    c.workers = std::max(1u, std::thread::hardware_concurrency());
    return c;
}

const EmbeddingModel& asoif_model(const char* name, double* seconds = nullptr) {
    static std::map<std::string, std::pair<EmbeddingModel, double>> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        const auto start = std::chrono::steady_clock::now();
        auto m = train(asoif()->corpus, asoif_config(name));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        it = cache.emplace(name, std::make_pair(std::move(m), secs)).first;
    }
    if (seconds) *seconds = it->second.second;
    return it->second.first;
}

Outcome asoif_intrusion_default() {
    if (!asoif()) return {Outcome::Skip, kNoData};
    const auto start = std::chrono::steady_clock::now();
    const auto& model = asoif_model("w2v-default");
    const auto acc = eval_intrusion(DenseSimilarity(model), asoif()->intrusion).total().accuracy().value_or(0.0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return verdict(std::abs(acc * 100 - 83.01) <= 5.0 && secs < 900,
                   fmt("w2v-default intrusion %.2f%% (83.01 +- 5), pipeline %.1fs (< 900)", acc * 100, secs));
}

Outcome asoif_analogies_hs() {
    if (!asoif()) return {Outcome::Skip, kNoData};
    const DenseSimilarity sim(asoif_model("w2v-ww12-i15-hs"));
    const auto acc = eval_analogies(sim, asoif()->analogies, AnalogyMethod::Offset).total().accuracy().value_or(0.0);
    const auto only_b = eval_analogies(sim, asoif()->analogies, AnalogyMethod::OnlyB).total().accuracy().value_or(0.0);
    return verdict(std::abs(acc * 100 - 33.57) <= 5.0 && std::abs(only_b * 100 - 25.81) <= 5.0,
                   fmt("w2v-ww12-i15-hs analogies %.2f%% (33.57 +- 5), ONLY-B %.2f%% (25.81 +- 5)", acc * 100,
                       only_b * 100));
}

Outcome asoif_difficulty_order() {
    if (!asoif()) return {Outcome::Skip, kNoData};
    const auto report = eval_intrusion(DenseSimilarity(asoif_model("w2v-default")), asoif()->intrusion);
    const auto by = report.by_difficulty();
    const double d1 = by.count(1) ? by.at(1).accuracy().value_or(0.0) : 0.0;
    const double d4 = by.count(4) ? by.at(4).accuracy().value_or(0.0) : 0.0;
    return verdict(d4 - d1 >= 0.10 && d4 >= 0.90,
                   fmt("level 4 %.2f%% (>= 90), level 1 %.2f%%, gap %.2f pp (>= 10)", d4 * 100, d1 * 100,
                       (d4 - d1) * 100));
}

Outcome asoif_frequency_trend() {
    if (!asoif()) return {Outcome::Skip, kNoData};
    const auto& model = asoif_model("w2v-ww12-i15-ns");
    const auto report = eval_intrusion(DenseSimilarity(model), asoif()->intrusion);
    const auto fa = frequency_analysis(report, build_vocab(asoif()->corpus, 1));
    auto mean_of = [&](std::size_t lo, std::size_t hi) {
        double s = 0;
        int n = 0;
        for (std::size_t b = lo; b <= hi; ++b)
            if (auto a = fa.predicted[b - 1].accuracy()) {
                s += *a;
                ++n;
            }
        return n ? s / n : 0.0;
    };
    const double high = mean_of(5, 6), low = mean_of(1, 3);
    return verdict(high - low >= 0.20,
                   fmt("predicted-outlier bins 5-6 %.2f%%, bins 1-3 %.2f%%, gap %.2f pp (>= 20)", high * 100,
                       low * 100, (high - low) * 100));
}

Outcome asoif_ppmi() {
    if (!asoif()) return {Outcome::Skip, kNoData};
    const auto model = train_ppmi(asoif()->corpus, 5, 5, std::max(1u, std::thread::hardware_concurrency()));
    const auto acc = eval_intrusion(PpmiSimilarity(model), asoif()->intrusion).total().accuracy().value_or(0.0);
    return verdict(std::abs(acc * 100 - 70.37) <= 6.0, fmt("PPMI (window 5) intrusion %.2f%% (70.37 +- 6)", acc * 100));
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"ppmi-oracle-equivalence", ppmi_oracle},
        {"gradient-checks", gradient_checks},
        {"noise-distribution", noise_distribution},
        {"huffman-optimality", huffman_optimality},
        {"analogy-evaluator-oracle", analogy_oracle},
        {"intrusion-evaluator-oracle", intrusion_oracle},
        {"planted-cluster-end-to-end", planted_clusters},
        {"dataset-arithmetic-round-trips", dataset_arithmetic},
        {"single-worker-determinism", determinism},
        {"asoif-intrusion-w2v-default", asoif_intrusion_default},
        {"asoif-analogies-w2v-ww12-i15-hs", asoif_analogies_hs},
        {"asoif-difficulty-ordering", asoif_difficulty_order},
        {"asoif-frequency-bin-trend", asoif_frequency_trend},
        {"asoif-ppmi-baseline", asoif_ppmi},
    };
    int failed = 0, passed = 0, skipped = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {Outcome::Fail, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char* tag = o.kind == Outcome::Pass ? "PASS" : o.kind == Outcome::Fail ? "FAIL" : "SKIP";
        std::printf("%s %2zu %-32s %s [%.1fs]\n", tag, i + 1, criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        (o.kind == Outcome::Pass ? passed : o.kind == Outcome::Fail ? failed : skipped)++;
    }
    std::printf("%d passed, %d failed, %d skipped\n", passed, failed, skipped);
    return failed ? 1 : 0;
}
