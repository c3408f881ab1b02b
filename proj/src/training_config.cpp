#include <cmath>

#include <json.hpp>

#include "embedlab/embeddings.hpp"
#include "embedlab/error.hpp"

namespace embedlab {

std::string_view to_string(Algorithm a) {
    return a == Algorithm::SkipGram ? "skip-gram" : "cbow";
}

std::string_view to_string(Loss l) {
    return l == Loss::NegativeSampling ? "negative-sampling" : "hierarchical-softmax";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "sg" || name == "skip-gram" || name == "skipgram") return Algorithm::SkipGram;
    if (name == "cbow") return Algorithm::Cbow;
    throw UsageError("unknown algorithm '" + std::string(name) + "' (expected sg or cbow)");
}

Loss parse_loss(std::string_view name) {
    if (name == "ns" || name == "negative-sampling") return Loss::NegativeSampling;
    if (name == "hs" || name == "hierarchical-softmax") return Loss::HierarchicalSoftmax;
    throw UsageError("unknown loss '" + std::string(name) + "' (expected ns or hs)");
}

void TrainingConfig::validate() const {
    if (dims < 1) throw ConfigError("dims must be >= 1");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(alpha_min > 0.0)) throw ConfigError("alpha_min must be > 0");
    if (!(alpha0 > alpha_min)) throw ConfigError("alpha0 must exceed alpha_min");
    if (loss == Loss::NegativeSampling && negative < 1)
        throw ConfigError("negative sampling needs at least one noise word");
    if (!(subsample_t >= 0.0 && subsample_t <= 1.0))
        throw ConfigError("subsample threshold must be in [0, 1]");
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (!std::isfinite(unigram_power)) throw ConfigError("unigram power must be finite");
}

namespace {

TrainingConfig tuned_skip_gram() {
    TrainingConfig c;
    c.algorithm = Algorithm::SkipGram;
    c.window = 12;
    c.epochs = 15;
    c.negative = 15;
    c.dims = 300;
    return c;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"w2v-default", "w2v-ww12-i15-ns", "w2v-ww12-i15-hs", "w2v-CBOW"};
}

TrainingConfig preset(std::string_view name) {
    if (name == "w2v-default") {
        TrainingConfig c;  // CBOW, window 5, 5 noise words, 5 epochs
        c.dims = 300;
        return c;
    }
    if (name == "w2v-ww12-i15-ns") return tuned_skip_gram();
    if (name == "w2v-ww12-i15-hs") {
        auto c = tuned_skip_gram();
        c.loss = Loss::HierarchicalSoftmax;
        return c;
    }
    if (name == "w2v-CBOW") {
        auto c = tuned_skip_gram();
        c.algorithm = Algorithm::Cbow;
        return c;
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("unknown preset '" + std::string(name) + "'; known presets: " + known);
}

std::string config_to_json(const TrainingConfig& c) {
    nlohmann::ordered_json j;
    j["dims"] = c.dims;
    j["algorithm"] = to_string(c.algorithm);
    j["loss"] = to_string(c.loss);
    j["negative"] = c.negative;
    j["window"] = c.window;
    j["epochs"] = c.epochs;
    j["alpha0"] = c.alpha0;
    j["alpha_min"] = c.alpha_min;
    j["subsample_t"] = c.subsample_t;
    j["min_count"] = c.min_count;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["cross_sentence_window"] = c.cross_sentence_window;
    j["fixed_window"] = c.fixed_window;
    j["unigram_power"] = c.unigram_power;
    return j.dump();
}

TrainingConfig config_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        TrainingConfig c;
        c.dims = j.value("dims", c.dims);
        c.algorithm = parse_algorithm(j.value("algorithm", std::string(to_string(c.algorithm))));
        c.loss = parse_loss(j.value("loss", std::string(to_string(c.loss))));
        c.negative = j.value("negative", c.negative);
        c.window = j.value("window", c.window);
        c.epochs = j.value("epochs", c.epochs);
        c.alpha0 = j.value("alpha0", c.alpha0);
        c.alpha_min = j.value("alpha_min", c.alpha_min);
        c.subsample_t = j.value("subsample_t", c.subsample_t);
        c.min_count = j.value("min_count", c.min_count);
        c.seed = j.value("seed", c.seed);
        c.workers = j.value("workers", c.workers);
        c.cross_sentence_window = j.value("cross_sentence_window", c.cross_sentence_window);
        c.fixed_window = j.value("fixed_window", c.fixed_window);
        c.unigram_power = j.value("unigram_power", c.unigram_power);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad training config JSON: ") + e.what());
    }
}

} // namespace embedlab
