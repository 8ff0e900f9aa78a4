#pragma once

#include "hmd/prediction.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hmd {

struct MlpParams {
    std::size_t hidden = 5;
    double learning_rate = 0.01;
    std::size_t max_epochs = 100;
    double target_rmse = 0.05;  // stop once an epoch's training RMSE falls below this
    std::uint64_t seed = 1;

    bool operator==(const MlpParams&) const = default;
};

// One hidden layer, tanh on both layers, a constant-1 bias unit feeding each layer.
//
// hidden_weights is row-major [hidden][inputs + 1]; the last column of each row is the
// bias weight. output_weights has hidden + 1 entries, the bias weight last.
struct MlpModel {
    std::size_t inputs = 4;
    std::size_t hidden = 5;
    std::vector<double> hidden_weights;
    std::vector<double> output_weights;
    MlpParams params;
    double final_rmse = 0.0;
    std::size_t epochs_run = 0;

    std::size_t feature_count() const { return inputs; }
    bool operator==(const MlpModel&) const = default;
};

// Gradient of the per-sample loss 0.5 * (output - target)^2, same layout as the weights.
struct MlpGradient {
    std::vector<double> hidden_weights;
    std::vector<double> output_weights;
};

// Weights drawn uniformly from [-0.5, 0.5] in hidden-then-output order.
MlpModel init_mlp(std::size_t inputs, const MlpParams& params);

// Raw network output in (-1, 1).
double mlp_forward(const MlpModel& m, std::span<const double> x);
double mlp_sample_loss(const MlpModel& m, std::span<const double> x, double target);
MlpGradient mlp_gradient(const MlpModel& m, std::span<const double> x, double target);

// Online backpropagation over shuffled epochs. Targets are -1 (benign) and +1 (malware).
MlpModel train_mlp(const Dataset& ds, const MlpParams& params = {});

// score = (output + 1) / 2, label 1 iff output >= 0.
Prediction mlp_predict(const MlpModel& m, std::span<const double> x);

double rmse(std::span<const double> predicted, std::span<const double> actual);

// Plain-text training file: first line is the topology ("4 5 1"), then one sample per
// line as whitespace-separated features followed by a 0/1 target.
struct MlpTextData {
    std::vector<std::size_t> topology;
    Dataset data;
};

MlpTextData read_mlp_text(const std::filesystem::path& path);
MlpTextData parse_mlp_text(const std::string& text);
std::string to_mlp_text(const Dataset& ds, std::size_t hidden = 5);

}  // namespace hmd
