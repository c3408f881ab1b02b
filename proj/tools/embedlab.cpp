// embedlab command-line entry point.
//
// Exit codes: 0 success, 1 internal error, 2 usage or input error, 3 data error (OOV, format).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "embedlab/corpus.hpp"
#include "embedlab/datasets.hpp"
#include "embedlab/embeddings.hpp"
#include "embedlab/error.hpp"
#include "embedlab/eval.hpp"
#include "embedlab/gridsearch.hpp"
#include "embedlab/models.hpp"
#include "embedlab/ppmi.hpp"

namespace fs = std::filesystem;
using namespace embedlab;

namespace {

void require_file(const fs::path& p, const char* what) {
    if (!fs::is_regular_file(p)) throw IoError(p.string(), std::string(what) + " not found");
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError(out_path, "cannot write output");
    out << text;
}

// ---------------------------------------------------------------------------

struct PreprocessArgs {
    std::string input, out, phrases_out;
    bool lowercase = false;
    PhraseConfig phrases;
};

void cmd_preprocess(const PreprocessArgs& a) {
    require_file(a.input, "input file");
    PreprocessOptions options;
    options.lowercase = a.lowercase;
    const auto corpus = load_corpus(a.input, options);
    write_corpus_file(corpus, a.out);
    std::cerr << "wrote " << corpus.sentences.size() << " sentences, " << corpus.token_count << " tokens to "
              << a.out << '\n';
    if (!a.phrases_out.empty()) {
        a.phrases.validate();
        const auto phrased = detect_phrases(corpus, a.phrases);
        write_corpus_file(phrased, a.phrases_out);
        std::cerr << "wrote phrased corpus (" << phrased.token_count << " tokens) to " << a.phrases_out << '\n';
    }
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string corpus, out, preset, update_from, format;
    bool raw = false;
    bool lowercase = false;
    bool quiet = false;
    unsigned ppmi_window = 5;
    TrainingConfig config;
    // Options given explicitly override the preset.
    std::vector<std::function<void(TrainingConfig&)>> overrides;
    CLI::Option* seed_option = nullptr;
};

Corpus read_training_corpus(const std::string& path, bool raw, bool lowercase) {
    require_file(path, "corpus file");
    if (raw) {
        PreprocessOptions options;
        options.lowercase = lowercase;
        return load_corpus(path, options);
    }
    return read_corpus_file(path);
}

void cmd_train(TrainArgs& a) {
    const bool ppmi = a.preset == "ppmi";
    TrainingConfig config = (a.preset.empty() || ppmi) ? TrainingConfig{} : preset(a.preset);
    for (const auto& apply : a.overrides) apply(config);
    if (!a.format.empty() && a.format != "text" && a.format != "binary")
        throw UsageError("--format must be text or binary");
    const auto corpus = read_training_corpus(a.corpus, a.raw, a.lowercase);
    if (a.seed_option->count() == 0) {
        config.seed = std::random_device{}() | (static_cast<std::uint64_t>(std::random_device{}()) << 32);
        std::cerr << "seed: " << config.seed << '\n';
    }
    if (ppmi) {
        if (!a.update_from.empty()) throw UsageError("--update does not apply to the ppmi preset");
        const auto model = train_ppmi(corpus, config.min_count, a.ppmi_window, config.workers);
        save_ppmi(model, a.out);
        std::cerr << "ppmi: |V|=" << model.vocab.size() << " nonzeros=" << model.weights.nonzeros() << '\n';
        return;
    }
    config.validate();
    TrainingStats stats;
    EmbeddingModel model;
    if (!a.update_from.empty()) {
        require_file(a.update_from, "model file");
        auto base = load_embedding_model(a.update_from);
        model = update_model(base, corpus, config, &stats);
    } else {
        model = train(corpus, config, &stats);
    }
    const bool text = a.format == "text" ||
                      (a.format.empty() && (a.out.ends_with(".txt") || a.out.ends_with(".vec")));
    if (text) save_text(model, a.out);
    else save_binary(model, a.out);
    if (!a.quiet) {
        for (std::size_t e = 0; e < stats.epochs.size(); ++e)
            std::fprintf(stderr, "epoch %zu mean loss %.6f\n", e + 1, stats.epochs[e].mean_loss());
        std::fprintf(stderr, "trained %s: |V|=%zu dims=%zu in %.2fs\n", a.out.c_str(), model.size(), model.dims(),
                     stats.seconds);
    }
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string definitions, task, out;
};

void cmd_generate(const GenerateArgs& a) {
    require_file(a.definitions, "definitions file");
    const auto defs = load_task_definition(a.definitions);
    const auto task = parse_task(a.task);
    if (task == Task::Analogy) {
        const auto questions = generate_analogy_questions(defs);
        write_output(format_analogy_questions(questions), a.out);
        std::cerr << questions.size() << " analogy questions in " << section_count(questions) << " sections\n";
    } else {
        const auto questions = generate_intrusion_questions(defs);
        write_output(format_intrusion_questions(questions), a.out);
        std::cerr << questions.size() << " intrusion questions in " << section_count(questions) << " sections\n";
    }
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::vector<std::string> models;
    std::vector<std::string> methods{"offset"};
    std::string models_config, dataset, task, format = "table", group, out, freq_corpus;
    bool fold_case = false;
    bool frequency = false;
};

void cmd_eval(const EvalArgs& a) {
    std::vector<std::pair<std::string, fs::path>> models;
    if (!a.models_config.empty()) {
        require_file(a.models_config, "model list");
        models = load_model_list(a.models_config);
    }
    for (const auto& m : a.models) {
        const auto eq = m.find('=');
        if (eq == std::string::npos) models.emplace_back(fs::path(m).stem().string(), m);
        else models.emplace_back(m.substr(0, eq), m.substr(eq + 1));
    }
    if (models.empty()) throw UsageError("no models given (use --model or --models-config)");
    require_file(a.dataset, "dataset file");

    const auto task = parse_task(a.task);
    std::vector<AnalogyMethod> methods;
    for (const auto& m : a.methods) methods.push_back(parse_analogy_method(m));
    const bool json_summary = a.format == "json";
    const auto format = json_summary ? ReportFormat::Table : parse_report_format(a.format);
    if (!json_summary && format != ReportFormat::Table && models.size() * (task == Task::Analogy ? methods.size() : 1) > 1)
        throw UsageError("--format " + a.format + " takes a single model");
    if (a.frequency && task != Task::Intrusion) throw UsageError("--frequency applies to the intrusion task");
    if (!a.group.empty() && a.group != "section" && a.group != "difficulty")
        throw UsageError("--group must be section or difficulty");
    EvalOptions options;
    options.fold_case = a.fold_case;

    std::vector<AnalogyQuestion> analogies;
    std::vector<IntrusionQuestion> intrusion;
    if (task == Task::Analogy) analogies = parse_analogy_file(a.dataset);
    else intrusion = parse_intrusion_file(a.dataset);

    std::optional<Vocabulary> freq_vocab;
    if (!a.freq_corpus.empty()) {
        require_file(a.freq_corpus, "frequency corpus");
        freq_vocab = build_vocab(read_corpus_file(a.freq_corpus), 1);
    }

    std::vector<EvalReport> reports;
    std::vector<std::optional<FrequencyAnalysis>> frequencies;
    for (const auto& [name, path] : models) {
        require_file(path, "model file");
        const auto model = load_any_model(path);
        if (task == Task::Analogy) {
            for (auto method : methods) {
                reports.push_back(eval_analogies(model->similarity(), analogies, method, options, name));
                frequencies.emplace_back();
            }
        } else {
            reports.push_back(eval_intrusion(model->similarity(), intrusion, options, name));
            if (a.frequency)
                frequencies.push_back(frequency_analysis(reports.back(), freq_vocab ? *freq_vocab : model->vocabulary()));
            else
                frequencies.emplace_back();
        }
    }

    std::string text;
    if (json_summary) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < reports.size(); ++i)
            arr.push_back(nlohmann::ordered_json::parse(summary_json(reports[i], frequencies[i] ? &*frequencies[i] : nullptr)));
        text = (reports.size() == 1 ? arr[0] : arr).dump(2) + '\n';
    } else if (format != ReportFormat::Table) {
        text = emit_report(reports.front(), format);
    } else {
        const bool by_difficulty = a.group == "difficulty" || (a.group.empty() && task == Task::Intrusion);
        const bool by_section = a.group != "difficulty";
        if (by_section) text += comparison_table(reports, Grouping::Section);
        if (by_difficulty) text += (text.empty() ? "" : "\n") + comparison_table(reports, Grouping::Difficulty);
        for (const auto& r : reports) {
            const auto t = r.total();
            std::string label = r.model_id;
            if (r.method && *r.method != AnalogyMethod::Offset) label += " [" + std::string(to_string(*r.method)) + "]";
            text += "\n" + label + ": attempted " + std::to_string(t.attempted) + ", skipped (OOV) " +
                    std::to_string(t.skipped);
            if (r.degenerate()) text += ", degenerate: every answer was a tie";
        }
        text += '\n';
        if (task == Task::Intrusion) text += "random baseline: 25.00\n";
        for (std::size_t i = 0; i < reports.size(); ++i)
            if (frequencies[i]) text += "\n" + reports[i].model_id + " frequency bins\n" + frequency_table(*frequencies[i]);
    }
    write_output(text, a.out);
}

// ---------------------------------------------------------------------------

struct GridArgs {
    std::string corpus, spec, analogies, intrusion, out, summary, models_dir;
    unsigned sweep_workers = 1;
    std::size_t max_configs = 0;
    bool raw = false;
};

void cmd_grid(const GridArgs& a) {
    const auto corpus = read_training_corpus(a.corpus, a.raw, false);
    require_file(a.spec, "grid spec");
    const auto spec = load_grid_spec(a.spec);
    GridDatasets datasets;
    if (!a.analogies.empty()) {
        require_file(a.analogies, "analogy dataset");
        datasets.analogies = parse_analogy_file(a.analogies);
    }
    if (!a.intrusion.empty()) {
        require_file(a.intrusion, "intrusion dataset");
        datasets.intrusion = parse_intrusion_file(a.intrusion);
    }
    if (datasets.analogies.empty() && datasets.intrusion.empty())
        throw UsageError("grid needs --analogies and/or --intrusion");
    GridOptions options;
    options.sweep_workers = a.sweep_workers;
    options.max_configs = a.max_configs;
    if (!a.models_dir.empty()) options.model_dir = a.models_dir;
    std::size_t finished = 0;
    const auto total = spec.size();
    options.on_row = [&](const GridRow& row) {
        std::fprintf(stderr, "[%zu] %s %s\n", ++finished, row.id.c_str(), row.ok ? "ok" : row.error.c_str());
    };
    std::cerr << "grid: " << total << " configs\n";
    const auto rows = run_grid(corpus, datasets, spec, a.out, options);
    if (!a.summary.empty()) write_output(summarize_grid(rows) + '\n', a.summary);
    std::cerr << rows.size() << " rows in " << a.out << '\n';
}

// ---------------------------------------------------------------------------

struct NeighborsArgs {
    std::string model, term;
    std::size_t topn = 10;
};

void cmd_neighbors(const NeighborsArgs& a) {
    require_file(a.model, "model file");
    const auto model = load_any_model(a.model);
    const std::vector<std::string> positives{a.term};
    const auto hits = most_similar(model->similarity(), positives, {}, a.topn);
    for (const auto& h : hits) std::printf("%s\t%.6f\n", h.term.c_str(), h.similarity);
}

struct InfoArgs {
    std::string model;
};

void cmd_info(const InfoArgs& a) {
    require_file(a.model, "model file");
    const auto model = load_any_model(a.model);
    nlohmann::ordered_json j;
    j["path"] = a.model;
    j["kind"] = model->is_ppmi() ? "ppmi" : "dense";
    j["vocabulary"] = model->vocabulary().size();
    if (model->is_ppmi()) {
        j["window"] = model->ppmi().window;
        j["nonzeros"] = model->ppmi().weights.nonzeros();
    } else {
        j["dims"] = model->dense().dims();
        j["has_output_layer"] = model->dense().output_vectors.rows() > 0;
        j["config"] = nlohmann::ordered_json::parse(config_to_json(model->dense().config));
    }
    std::cout << j.dump(2) << '\n';
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const LookupError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
        dynamic_cast<const DecodeError*>(&e))
        return 3;
    if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const IoError*>(&e) ||
        dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e))
        return 2;
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"embedlab: train and evaluate word embeddings on small domain corpora"};
    app.require_subcommand(1);

    PreprocessArgs pre;
    auto* p = app.add_subcommand("preprocess", "Raw UTF-8 text to a sentence-per-line corpus");
    p->add_option("-i,--input", pre.input, "Raw text file")->required();
    p->add_option("-o,--out", pre.out, "Corpus output")->required();
    p->add_flag("--lowercase", pre.lowercase, "Fold case (ASCII and Latin-1)");
    p->add_option("--phrases", pre.phrases_out, "Also write a corpus with detected phrases merged");
    p->add_option("--phrase-threshold", pre.phrases.threshold, "Score threshold of the first pass")->capture_default_str();
    p->add_option("--phrase-passes", pre.phrases.passes, "Number of merging passes")->capture_default_str();
    p->add_option("--phrase-delta", pre.phrases.delta, "Discount on pair counts")->capture_default_str();

    TrainArgs tr;
    auto* t = app.add_subcommand("train", "Train a word2vec or PPMI model");
    t->add_option("-c,--corpus", tr.corpus, "Corpus file (sentence per line)")->required();
    t->add_option("-o,--out", tr.out, "Model output path")->required();
    t->add_flag("--raw", tr.raw, "Corpus is raw text; preprocess on the fly");
    t->add_flag("--lowercase", tr.lowercase, "With --raw: fold case");
    t->add_option("--preset", tr.preset, "w2v-default, w2v-ww12-i15-ns, w2v-ww12-i15-hs, w2v-CBOW or ppmi");
    t->add_option("--update", tr.update_from, "Continue training this model on the corpus");
    t->add_option("--format", tr.format, "text or binary (default by extension: .txt/.vec are text)");
    t->add_option("--ppmi-window", tr.ppmi_window, "Window for the ppmi preset")->capture_default_str();
    t->add_flag("-q,--quiet", tr.quiet);
    auto override_opt = [&](const char* name, auto member, const char* help) {
        using Value = std::remove_reference_t<decltype(tr.config.*member)>;
        auto holder = std::make_shared<Value>();
        auto* opt = t->add_option(name, *holder, help);
        tr.overrides.push_back([opt, holder, member](TrainingConfig& c) {
            if (opt->count()) c.*member = *holder;
        });
        return opt;
    };
    override_opt("--dims", &TrainingConfig::dims, "Vector dimensions");
    override_opt("--window", &TrainingConfig::window, "Maximum context half-width");
    override_opt("--negative", &TrainingConfig::negative, "Noise words per target");
    override_opt("--epochs", &TrainingConfig::epochs, "Passes over the corpus");
    override_opt("--alpha", &TrainingConfig::alpha0, "Initial learning rate");
    override_opt("--min-alpha", &TrainingConfig::alpha_min, "Final learning rate");
    override_opt("--sample", &TrainingConfig::subsample_t, "Subsampling threshold (0 disables)");
    override_opt("--min-count", &TrainingConfig::min_count, "Discard rarer terms");
    tr.seed_option = override_opt("--seed", &TrainingConfig::seed, "Random seed (default: entropy, printed)");
    override_opt("--workers", &TrainingConfig::workers, "Training threads")->envname("EMBEDLAB_WORKERS");
    override_opt("--cross-sentence", &TrainingConfig::cross_sentence_window, "Windows span sentence boundaries");
    override_opt("--fixed-window", &TrainingConfig::fixed_window, "Always use the full window");
    std::string algorithm, loss;
    t->add_option("--algorithm", algorithm, "sg or cbow");
    t->add_option("--loss", loss, "ns or hs");
    tr.overrides.push_back([&](TrainingConfig& c) {
        if (!algorithm.empty()) c.algorithm = parse_algorithm(algorithm);
        if (!loss.empty()) c.loss = parse_loss(loss);
    });

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Expand task definitions into a dataset");
    g->add_option("-d,--definitions", gen.definitions, "Task definition file")->required();
    g->add_option("-t,--task", gen.task, "analogies or intrusion")->required();
    g->add_option("-o,--out", gen.out, "Dataset output (default stdout)");

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Evaluate one or more models on a dataset");
    e->add_option("-m,--model", ev.models, "Model path or name=path (repeatable)");
    e->add_option("--models-config", ev.models_config, "File of 'name = path' lines");
    e->add_option("-d,--dataset", ev.dataset, "Dataset file")->required();
    e->add_option("-t,--task", ev.task, "analogy or intrusion")->required();
    e->add_option("--method", ev.methods, "offset, only-b or ignore-a (repeatable, analogy task)")->capture_default_str();
    e->add_option("-f,--format", ev.format, "table, csv, jsonl or json")->capture_default_str();
    e->add_option("--group", ev.group, "Table grouping: section or difficulty");
    e->add_flag("--fold-case", ev.fold_case, "Case-insensitive lookups and answers");
    e->add_flag("--frequency", ev.frequency, "Add the frequency-bin analysis (intrusion)");
    e->add_option("--freq-corpus", ev.freq_corpus, "Corpus supplying term counts for --frequency");
    e->add_option("-o,--out", ev.out, "Report output (default stdout)");

    GridArgs gr;
    auto* gs = app.add_subcommand("grid", "Hyperparameter sweep with a resumable results table");
    gs->add_option("-c,--corpus", gr.corpus, "Corpus file")->required();
    gs->add_option("-s,--spec", gr.spec, "Grid spec JSON")->required();
    gs->add_flag("--raw", gr.raw, "Corpus is raw text");
    gs->add_option("--analogies", gr.analogies, "Analogy dataset");
    gs->add_option("--intrusion", gr.intrusion, "Intrusion dataset");
    gs->add_option("-o,--out", gr.out, "Results CSV (appended, resumable)")->required();
    gs->add_option("--summary", gr.summary, "Write per-parameter summary JSON here");
    gs->add_option("--models-dir", gr.models_dir, "Keep trained models here");
    gs->add_option("--sweep-workers", gr.sweep_workers, "Configs trained concurrently")
        ->envname("EMBEDLAB_WORKERS")
        ->capture_default_str();
    gs->add_option("--max-configs", gr.max_configs, "Stop after this many new configs (0 = all)");

    NeighborsArgs nb;
    auto* n = app.add_subcommand("neighbors", "Nearest neighbors of a term");
    n->add_option("-m,--model", nb.model, "Model file")->required();
    n->add_option("term", nb.term, "Query term")->required();
    n->add_option("-n,--topn", nb.topn, "Number of neighbors")->capture_default_str();

    InfoArgs in;
    auto* i = app.add_subcommand("info", "Describe a model file");
    i->add_option("-m,--model", in.model, "Model file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*p) cmd_preprocess(pre);
        else if (*t) cmd_train(tr);
        else if (*g) cmd_generate(gen);
        else if (*e) cmd_eval(ev);
        else if (*gs) cmd_grid(gr);
        else if (*n) cmd_neighbors(nb);
        else if (*i) cmd_info(in);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return exit_code_for(err);
    }
    return 0;
}
