#pragma once

#include "hmd/classifier.hpp"
#include "hmd/cost_model.hpp"
#include "hmd/dataset.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace hmd {

inline constexpr int kModelFormatVersion = 1;

// Everything needed to classify raw counter vectors: schema, the training-set scaling and
// the fitted model.
struct ModelFile {
    int format_version = kModelFormatVersion;
    std::vector<std::string> feature_names;
    ScalingParams scaling;
    TrainedModel model;

    // Scales raw counters, then predicts.
    Prediction predict_raw(std::span<const double> raw) const;
};

nlohmann::json model_to_json(const TrainedModel& m);
TrainedModel model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelFile& f);
ModelFile model_file_from_json(const nlohmann::json& j);

void save_model(const ModelFile& f, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

// {seed, benign_count, benign: {mu, sigma[, zero_prob]}, families: {name: {count, mu, sigma[, zero_prob]}}
//  [, feature_names]}
nlohmann::json to_json(const GeneratorConfig& cfg);
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CostTable& t);
CostTable cost_table_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CostReport& r);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hmd
