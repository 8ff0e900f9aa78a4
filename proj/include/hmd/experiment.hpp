#pragma once

#include "hmd/classifier.hpp"
#include "hmd/cost_model.hpp"
#include "hmd/dataset.hpp"
#include "hmd/feature_selection.hpp"
#include "hmd/metrics.hpp"
#include "hmd/model_io.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hmd {

// One document drives a whole run; every random choice is seeded from it.
struct ExperimentConfig {
    std::optional<std::filesystem::path> dataset_csv;  // otherwise the generator runs
    GeneratorConfig generator = default_generator_config();
    SplitProtocol split;
    std::size_t select_k = 4;
    int select_bins = kDefaultMiBins;
    ModelParams params;
    std::vector<ModelType> models{all_model_types().begin(), all_model_types().end()};
    CostTable cost_table = CostTable::default_table();
    std::filesystem::path output_dir = "report";
};

// Relative dataset paths resolve against base_dir. Missing sections keep their defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const ExperimentConfig& cfg);
ModelParams model_params_from_json(const nlohmann::json& models, ModelParams base = {});

// Replaces the generator and split seeds.
void override_seed(ExperimentConfig& cfg, std::uint64_t seed);

struct ModelResult {
    ModelType type;
    ConfusionMatrix cm;
    MetricValue accuracy, precision, recall, f1;
    double auc = 0.0;
    RocCurve roc;
    CostReport cost;
    ModelFile model_file;
};

struct ReportResult {
    SplitPair split;  // unscaled, projected onto the selected features
    SelectionResult selection;
    std::vector<std::string> raw_feature_names;
    std::vector<std::size_t> projected_indices;  // raw feature index per kept column
    ScalingParams scaling;
    std::vector<ModelResult> models;
};

// split -> select -> scale -> train -> evaluate on the held-out families -> cost.
// Failures are rethrown with the stage name prefixed.
ReportResult run_report(const ExperimentConfig& cfg);

// Writes metrics.csv, metrics.txt, roc/<model>.csv, cost.csv, cost.json, selection.csv,
// summary.json and models/<model>.json under dir.
void write_report(const ReportResult& r, const std::filesystem::path& dir);

std::string metrics_csv(const ReportResult& r);
std::string metrics_table(const ReportResult& r);
std::string selection_csv(const SelectionResult& s, const std::vector<std::string>& names);

Dataset load_dataset(const ExperimentConfig& cfg);

// Shortest decimal text that parses back to the same double.
std::string format_exact(double v);

}  // namespace hmd
