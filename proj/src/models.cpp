#include "embedlab/models.hpp"

#include <fstream>
#include <sstream>

#include "embedlab/error.hpp"

namespace embedlab {

LoadedModel::LoadedModel(EmbeddingModel model) : model_(std::move(model)) {
    provider_ = std::make_unique<DenseSimilarity>(std::get<EmbeddingModel>(model_));
}

LoadedModel::LoadedModel(SparsePpmiModel model) : model_(std::move(model)) {
    provider_ = std::make_unique<PpmiSimilarity>(std::get<SparsePpmiModel>(model_));
}

std::unique_ptr<LoadedModel> load_any_model(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError(path.string(), "model file not found");
    if (is_ppmi_file(path)) return std::make_unique<LoadedModel>(load_ppmi(path));
    return std::make_unique<LoadedModel>(load_embedding_model(path));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<std::pair<std::string, std::filesystem::path>> parse_model_list(std::string_view text,
                                                                           const std::filesystem::path& base_dir) {
    std::vector<std::pair<std::string, std::filesystem::path>> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw FormatError("expected 'name = path'", line_no);
        const auto name = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (name.empty() || value.empty()) throw FormatError("expected 'name = path'", line_no);
        for (const auto& [existing, p] : out)
            if (existing == name) throw FormatError("duplicate model name '" + std::string(name) + "'", line_no);
        std::filesystem::path p{std::string(value)};
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        out.emplace_back(std::string(name), p);
    }
    return out;
}

std::vector<std::pair<std::string, std::filesystem::path>> load_model_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open model list");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_list(ss.str(), path.parent_path());
}

} // namespace embedlab
