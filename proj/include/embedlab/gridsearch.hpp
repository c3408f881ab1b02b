#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embedlab/corpus.hpp"
#include "embedlab/datasets.hpp"
#include "embedlab/embeddings.hpp"

namespace embedlab {

/// Value lists for the swept parameters; everything else comes from `base`.
struct GridSpec {
    std::vector<Algorithm> algorithms{Algorithm::SkipGram, Algorithm::Cbow};
    std::vector<std::size_t> dims{100, 200, 300};
    std::vector<unsigned> windows{1, 2, 3, 5, 7, 9, 11, 13, 15};
    std::vector<unsigned> negatives{5, 10, 15};
    TrainingConfig base;

    /// Throws ConfigError for an empty list.
    void validate() const;
    std::size_t size() const { return algorithms.size() * dims.size() * windows.size() * negatives.size(); }
};

/// JSON object with optional list keys "algorithm", "dims", "window", "negative" (missing keys keep
/// the defaults above); remaining keys are fixed overrides in the training-config JSON schema.
GridSpec parse_grid_spec(std::string_view json);
GridSpec load_grid_spec(const std::filesystem::path& path);

/// Cartesian product, nested algorithm > dims > window > negative in list order.
std::vector<TrainingConfig> expand_grid(const GridSpec& spec);

/// Sorted `key-value` assignments joined by '_', e.g.
/// `algorithm-sg_dims-100_epochs-5_loss-ns_negative-5_seed-1_window-5`. Safe as a file stem.
std::string config_id(const TrainingConfig& config);

struct GridDatasets {
    std::vector<AnalogyQuestion> analogies;
    std::vector<IntrusionQuestion> intrusion;
};

struct GridRow {
    std::string id;
    TrainingConfig config;
    bool ok = true;
    std::string error;
    std::optional<double> analogy_accuracy;
    std::optional<double> intrusion_accuracy;
    /// Intrusion accuracy for difficulty 1..4.
    std::array<std::optional<double>, 4> intrusion_by_difficulty;
    double train_seconds = 0.0;
};

struct GridOptions {
    /// Configs evaluated concurrently, each trained with a single worker.
    unsigned sweep_workers = 1;
    /// Stop after this many newly executed configs (0 = no limit).
    std::size_t max_configs = 0;
    /// Write model files named `<config id>.bin` here when set.
    std::optional<std::filesystem::path> model_dir;
    std::function<void(const GridRow&)> on_row;
};

/// Trains and evaluates every config not already present in `results_csv`, appending one row
/// per config as it finishes. A partial trailing line from an interrupted run is dropped.
/// Failing configs become rows with ok == false. Returns all rows of the file in grid order.
std::vector<GridRow> run_grid(const Corpus& corpus, const GridDatasets& datasets, const GridSpec& spec,
                              const std::filesystem::path& results_csv, const GridOptions& options = {});

std::string grid_csv_header();
std::string format_grid_row(const GridRow& row);
std::vector<GridRow> parse_grid_results(std::string_view csv);
std::vector<GridRow> load_grid_results(const std::filesystem::path& path);

/// Per parameter and value: row count and mean/min/max of each metric over successful rows.
std::string summarize_grid(const std::vector<GridRow>& rows);

} // namespace embedlab
