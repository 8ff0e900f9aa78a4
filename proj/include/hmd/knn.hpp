#pragma once

#include "hmd/prediction.hpp"

#include <span>
#include <vector>

namespace hmd {

enum class DistanceMetric { euclidean, manhattan };

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double manhattan_distance(std::span<const double> a, std::span<const double> b);

struct KnnParams {
    std::size_t k = 5;
    DistanceMetric metric = DistanceMetric::euclidean;
};

// Lazy learner: the "fit" keeps the training points.
struct KnnModel {
    std::vector<std::vector<double>> points;
    std::vector<Label> labels;
    std::size_t k = 5;
    DistanceMetric metric = DistanceMetric::euclidean;

    std::size_t feature_count() const { return points.empty() ? 0 : points.front().size(); }
    bool operator==(const KnnModel&) const = default;
};

// k must be odd and no larger than the training set.
KnnModel train_knn(const Dataset& ds, const KnnParams& params = {});

// Majority over the k nearest points; distance ties go to the lower training index.
// score = malware neighbours / k.
Prediction knn_predict(const KnnModel& m, std::span<const double> x);

}  // namespace hmd
