#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "embedlab/datasets.hpp"
#include "embedlab/error.hpp"
#include "embedlab/eval.hpp"
#include "embedlab/models.hpp"

namespace py = pybind11;
using namespace embedlab;

namespace {

using ModelPtr = std::unique_ptr<LoadedModel>;

std::vector<std::pair<std::string, double>> to_pairs(const std::vector<ScoredTerm>& hits) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.emplace_back(h.term, h.similarity);
    return out;
}

std::vector<std::pair<std::string, double>> neighbors(const LoadedModel& m, const std::vector<std::string>& positives,
                                                      const std::vector<std::string>& negatives, std::size_t topn) {
    if (m.is_ppmi()) return to_pairs(ppmi_most_similar(m.ppmi(), positives, negatives, topn));
    return to_pairs(most_similar(m.dense(), positives, negatives, topn));
}

void save_model(const LoadedModel& m, const std::filesystem::path& path, const std::string& format) {
    if (m.is_ppmi()) {
        save_ppmi(m.ppmi(), path);
        return;
    }
    const auto ext = path.extension().string();
    const bool text = format.empty() ? (ext == ".txt" || ext == ".vec") : format == "text";
    if (!format.empty() && format != "text" && format != "binary")
        throw UsageError("format must be text or binary: " + format);
    if (text) save_text(m.dense(), path);
    else save_binary(m.dense(), path);
}

Corpus corpus_from(const py::object& source, bool lowercase) {
    if (py::isinstance<py::str>(source) || py::hasattr(source, "__fspath__")) {
        PreprocessOptions opts;
        opts.lowercase = lowercase;
        return load_corpus(source.cast<std::filesystem::path>(), opts);
    }
    return Corpus::from_sentences(source.cast<std::vector<std::vector<std::string>>>());
}

EvalReport evaluate(const LoadedModel& m, const std::filesystem::path& dataset, const std::string& task,
                    const std::string& method, bool fold_case, const std::string& model_id) {
    EvalOptions opts;
    opts.fold_case = fold_case;
    if (parse_task(task) == Task::Analogy)
        return eval_analogies(m.similarity(), parse_analogy_file(dataset), parse_analogy_method(method), opts,
                              model_id);
    return eval_intrusion(m.similarity(), parse_intrusion_file(dataset), opts, model_id);
}

py::dict group_dict(const GroupStats& g) {
    py::dict d;
    d["attempted"] = g.attempted;
    d["correct"] = g.correct;
    d["skipped"] = g.skipped;
    d["accuracy"] = g.accuracy();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Word embedding training and evaluation for small domain corpora";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DecodeError>(m, "DecodeError", base);
    py::register_exception<IoError>(m, "IoError", base);
    auto format = py::register_exception<FormatError>(m, "FormatError", base);
    py::register_exception<SemanticError>(m, "SemanticError", format);
    py::register_exception<DefinitionError>(m, "DefinitionError", format);
    py::register_exception<DomainError>(m, "DomainError", base);
    py::register_exception<ConfigError>(m, "ConfigError", base);
    py::register_exception<LookupError>(m, "LookupError", base);
    py::register_exception<UsageError>(m, "UsageError", base);

    m.def("tokenize", [](const std::string& sentence, bool lowercase) {
        PreprocessOptions opts;
        opts.lowercase = lowercase;
        return tokenize(sentence, opts);
    }, py::arg("sentence"), py::arg("lowercase") = false);
    m.def("split_sentences", &split_sentences, py::arg("text"));

    py::class_<Corpus>(m, "Corpus")
        .def_static("from_sentences", [](std::vector<std::vector<std::string>> s) {
            return Corpus::from_sentences(std::move(s));
        })
        .def_readonly("sentences", &Corpus::sentences)
        .def_readonly("token_count", &Corpus::token_count)
        .def("__len__", [](const Corpus& c) { return c.sentences.size(); });
    m.def("load_corpus", [](const std::filesystem::path& path, bool lowercase) {
        PreprocessOptions opts;
        opts.lowercase = lowercase;
        return load_corpus(path, opts);
    }, py::arg("path"), py::arg("lowercase") = false, "Raw UTF-8 text to a tokenized corpus");
    m.def("read_corpus", &read_corpus_file, py::arg("path"), "Sentence-per-line corpus file");

    py::class_<TrainingConfig>(m, "TrainingConfig")
        .def(py::init<>())
        .def_readwrite("dims", &TrainingConfig::dims)
        .def_property("algorithm",
                      [](const TrainingConfig& c) { return std::string(to_string(c.algorithm)); },
                      [](TrainingConfig& c, const std::string& v) { c.algorithm = parse_algorithm(v); })
        .def_property("loss",
                      [](const TrainingConfig& c) { return std::string(to_string(c.loss)); },
                      [](TrainingConfig& c, const std::string& v) { c.loss = parse_loss(v); })
        .def_readwrite("negative", &TrainingConfig::negative)
        .def_readwrite("window", &TrainingConfig::window)
        .def_readwrite("epochs", &TrainingConfig::epochs)
        .def_readwrite("alpha", &TrainingConfig::alpha0)
        .def_readwrite("min_alpha", &TrainingConfig::alpha_min)
        .def_readwrite("sample", &TrainingConfig::subsample_t)
        .def_readwrite("min_count", &TrainingConfig::min_count)
        .def_readwrite("seed", &TrainingConfig::seed)
        .def_readwrite("workers", &TrainingConfig::workers)
        .def_readwrite("cross_sentence", &TrainingConfig::cross_sentence_window)
        .def_readwrite("fixed_window", &TrainingConfig::fixed_window)
        .def("validate", &TrainingConfig::validate)
        .def("to_json", &config_to_json)
        .def_static("from_json", &config_from_json)
        .def("__eq__", [](const TrainingConfig& a, const TrainingConfig& b) { return a == b; })
        .def("__repr__", [](const TrainingConfig& c) { return "TrainingConfig(" + config_to_json(c) + ")"; });
    m.def("preset", &preset, py::arg("name"));
    m.def("preset_names", &preset_names);

    py::class_<LoadedModel, ModelPtr>(m, "Model")
        .def_property_readonly("kind", [](const LoadedModel& lm) { return lm.is_ppmi() ? "ppmi" : "dense"; })
        .def_property_readonly("terms", [](const LoadedModel& lm) {
            std::vector<std::string> out;
            for (const auto& e : lm.vocabulary().entries()) out.push_back(e.term);
            return out;
        })
        .def("count", [](const LoadedModel& lm, const std::string& term) {
            const auto& v = lm.vocabulary();
            return v.count(v.at(term));
        })
        .def("__len__", [](const LoadedModel& lm) { return lm.vocabulary().size(); })
        .def("__contains__", [](const LoadedModel& lm, const std::string& t) { return lm.vocabulary().contains(t); })
        .def_property_readonly("dims", [](const LoadedModel& lm) -> std::optional<std::size_t> {
            if (lm.is_ppmi()) return std::nullopt;
            return lm.dense().dims();
        })
        .def_property_readonly("config", [](const LoadedModel& lm) -> std::optional<TrainingConfig> {
            if (lm.is_ppmi()) return std::nullopt;
            return lm.dense().config;
        })
        .def("vector", [](const LoadedModel& lm, const std::string& term) {
            if (lm.is_ppmi()) throw UsageError("PPMI models have no dense vectors");
            const auto v = lm.dense().vector(term);
            return py::array_t<float>(static_cast<py::ssize_t>(v.size()), v.data());
        })
        .def_property_readonly("vectors", [](const LoadedModel& lm) {
            if (lm.is_ppmi()) throw UsageError("PPMI models have no dense vectors");
            const auto& mat = lm.dense().input_vectors;
            return py::array_t<float>({static_cast<py::ssize_t>(mat.rows()), static_cast<py::ssize_t>(mat.cols())},
                                      mat.data().data());
        })
        .def("similarity", [](const LoadedModel& lm, const std::string& a, const std::string& b) {
            const auto& v = lm.vocabulary();
            return lm.similarity().similarity(v.at(a), v.at(b));
        })
        .def("most_similar", &neighbors, py::arg("positive"), py::arg("negative") = std::vector<std::string>{},
             py::arg("topn") = 10)
        .def("neighbors", [](const LoadedModel& lm, const std::string& term, std::size_t topn) {
            return neighbors(lm, {term}, {}, topn);
        }, py::arg("term"), py::arg("topn") = 10)
        .def("solve_analogy", [](const LoadedModel& lm, const std::string& a, const std::string& a_star,
                                 const std::string& b, const std::string& method) {
            return solve_analogy(lm.similarity(), AnalogyQuestion{a, a_star, b, {}, {}}, parse_analogy_method(method));
        }, py::arg("a"), py::arg("a_star"), py::arg("b"), py::arg("method") = "offset")
        .def("find_intruder", [](const LoadedModel& lm, const std::vector<std::string>& terms)
                                  -> std::optional<std::string> {
            const auto pick = find_intruder(lm.similarity(), terms);
            if (!pick) return std::nullopt;
            return terms.at(pick->index);
        }, py::arg("terms"))
        .def("save", &save_model, py::arg("path"), py::arg("format") = "");

    m.def("load_model", &load_any_model, py::arg("path"), "PPMI, binary or text vectors, detected from content");
    m.def("train", [](const py::object& source, const TrainingConfig& config, bool lowercase) {
        const auto corpus = corpus_from(source, lowercase);
        py::gil_scoped_release nogil;
        return std::make_unique<LoadedModel>(train(corpus, config));
    }, py::arg("corpus"), py::arg("config") = TrainingConfig{}, py::arg("lowercase") = false,
       "Train word2vec on a raw text path or a list of token lists");
    m.def("train_ppmi", [](const py::object& source, std::uint64_t min_count, unsigned window, bool lowercase) {
        const auto corpus = corpus_from(source, lowercase);
        py::gil_scoped_release nogil;
        return std::make_unique<LoadedModel>(train_ppmi(corpus, min_count, window));
    }, py::arg("corpus"), py::arg("min_count") = 5, py::arg("window") = 5, py::arg("lowercase") = false);

    m.def("generate_dataset", [](const std::string& definitions, const std::string& task) {
        const auto defs = parse_task_definition(definitions);
        if (parse_task(task) == Task::Analogy) return format_analogy_questions(generate_analogy_questions(defs));
        return format_intrusion_questions(generate_intrusion_questions(defs));
    }, py::arg("definitions"), py::arg("task"), "Task definition text to dataset file text");

    py::class_<QuestionRecord>(m, "QuestionRecord")
        .def_readonly("section", &QuestionRecord::section)
        .def_readonly("difficulty", &QuestionRecord::difficulty)
        .def_readonly("terms", &QuestionRecord::terms)
        .def_readonly("gold", &QuestionRecord::gold)
        .def_readonly("predicted", &QuestionRecord::predicted)
        .def_readonly("correct", &QuestionRecord::correct)
        .def_readonly("skipped", &QuestionRecord::skipped)
        .def_readonly("tie", &QuestionRecord::tie);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("model_id", &EvalReport::model_id)
        .def_readonly("records", &EvalReport::records)
        .def_property_readonly("accuracy", [](const EvalReport& r) { return r.total().accuracy(); })
        .def_property_readonly("total", [](const EvalReport& r) { return group_dict(r.total()); })
        .def_property_readonly("by_section", [](const EvalReport& r) {
            py::dict d;
            for (const auto& [name, g] : r.by_section()) d[py::str(name)] = group_dict(g);
            return d;
        })
        .def_property_readonly("by_difficulty", [](const EvalReport& r) {
            py::dict d;
            for (const auto& [level, g] : r.by_difficulty()) d[py::int_(level)] = group_dict(g);
            return d;
        })
        .def_property_readonly("degenerate", &EvalReport::degenerate)
        .def_property_readonly("random_baseline", &EvalReport::random_baseline)
        .def("summary_json", [](const EvalReport& r) { return summary_json(r); })
        .def("render", [](const EvalReport& r, const std::string& format) {
            return emit_report(r, parse_report_format(format));
        }, py::arg("format") = "table");

    m.def("evaluate", &evaluate, py::arg("model"), py::arg("dataset"), py::arg("task"),
          py::arg("method") = "offset", py::arg("fold_case") = false, py::arg("model_id") = "",
          "Evaluate a model on an analogy or intrusion dataset file");
    m.def("comparison_table", [](const std::vector<const EvalReport*>& reports, const std::string& group) {
        std::vector<EvalReport> copies;
        for (const auto* r : reports) copies.push_back(*r);
        if (group != "section" && group != "difficulty") throw UsageError("group must be section or difficulty");
        return comparison_table(copies, group == "section" ? Grouping::Section : Grouping::Difficulty);
    }, py::arg("reports"), py::arg("group") = "section");
}
