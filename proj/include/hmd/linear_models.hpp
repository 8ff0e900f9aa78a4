#pragma once

#include "hmd/prediction.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hmd {

enum class LinearKind { svm, logistic };

// Shared linear scorer w.x + b.
struct LinearModel {
    LinearKind kind = LinearKind::logistic;
    std::vector<double> w;
    double b = 0.0;
    // Per-epoch training objective. For the SVM this is the best objective seen so far.
    std::vector<double> loss_history;

    std::size_t feature_count() const { return w.size(); }
    double margin(std::span<const double> x) const;
    bool operator==(const LinearModel&) const = default;
};

// 1 / (1 + e^-z), evaluated without overflow for large |z|.
double sigmoid(double z);

struct LogisticParams {
    double learning_rate = 0.1;
    std::size_t epochs = 200;
    std::uint64_t seed = 3;  // unused by the full-batch solver; kept so every trainer is seeded
};

// Full-batch gradient descent on mean binary cross-entropy, starting from w = 0, b = 0.
LinearModel train_logistic(const Dataset& ds, const LogisticParams& params = {});
// score = sigmoid(w.x + b), label 1 iff score >= 0.5.
Prediction logistic_predict(const LinearModel& m, std::span<const double> x);

struct SvmParams {
    double c = 1.0;
    double learning_rate = 0.01;
    std::size_t epochs = 200;
    std::uint64_t seed = 5;  // unused by the full-batch solver; kept so every trainer is seeded
};

// Soft-margin primal 0.5 |w|^2 + C sum max(0, 1 - y (w.x + b)), y in {-1, +1}.
double svm_objective(const LinearModel& m, const Dataset& ds, double c);
double hinge_loss(const LinearModel& m, const Dataset& ds);

// Full-batch subgradient descent with step learning_rate / t at epoch t. Returns the
// iterate with the lowest objective seen.
LinearModel train_svm(const Dataset& ds, const SvmParams& params = {});
// label 1 iff w.x + b >= 0; score = sigmoid(w.x + b).
Prediction svm_predict(const LinearModel& m, std::span<const double> x);

// Margin width as 1 / |w|. The conventional distance between the two supporting
// hyperplanes is 2 / |w|; this reports the half-width. Returns +inf for w = 0.
double hyperplane_width(std::span<const double> w);

}  // namespace hmd
