#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "embedlab/embeddings.hpp"
#include "embedlab/ppmi.hpp"

namespace embedlab {

/// A model file of any supported kind together with its similarity view.
class LoadedModel {
public:
    explicit LoadedModel(EmbeddingModel model);
    explicit LoadedModel(SparsePpmiModel model);
    LoadedModel(LoadedModel&&) = delete;

    bool is_ppmi() const { return std::holds_alternative<SparsePpmiModel>(model_); }
    const EmbeddingModel& dense() const { return std::get<EmbeddingModel>(model_); }
    const SparsePpmiModel& ppmi() const { return std::get<SparsePpmiModel>(model_); }
    const SimilarityProvider& similarity() const { return *provider_; }
    const Vocabulary& vocabulary() const { return provider_->vocabulary(); }

private:
    std::variant<EmbeddingModel, SparsePpmiModel> model_;
    std::unique_ptr<SimilarityProvider> provider_;
};

/// PPMI text, binary embeddings or text/GloVe vectors, detected from content.
std::unique_ptr<LoadedModel> load_any_model(const std::filesystem::path& path);

/// `name = path` lines; `#` comments and blank lines ignored. Relative paths resolve against
/// `base_dir`. Throws FormatError with the line number.
std::vector<std::pair<std::string, std::filesystem::path>> parse_model_list(std::string_view text,
                                                                           const std::filesystem::path& base_dir = {});
std::vector<std::pair<std::string, std::filesystem::path>> load_model_list(const std::filesystem::path& path);

} // namespace embedlab
