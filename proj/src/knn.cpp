#include "hmd/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hmd {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError(a.size(), b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double manhattan_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError(a.size(), b.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum;
}

KnnModel train_knn(const Dataset& ds, const KnnParams& params) {
    if (ds.empty()) throw EmptyDatasetError("knn: empty training set");
    if (params.k == 0 || params.k % 2 == 0) throw ConfigError("knn: k must be a positive odd number");
    if (params.k > ds.size()) throw ConfigError("knn: k exceeds the training set size");
    KnnModel m;
    m.k = params.k;
    m.metric = params.metric;
    m.points.reserve(ds.size());
    m.labels.reserve(ds.size());
    for (const auto& s : ds.samples()) {
        m.points.push_back(s.features);
        m.labels.push_back(s.label);
    }
    return m;
}

Prediction knn_predict(const KnnModel& m, std::span<const double> x) {
    if (m.points.empty()) throw InvalidArgument("knn: model has no training points");
    check_dimension(m.feature_count(), x.size());

    struct Candidate {
        double dist;
        std::size_t index;
        bool operator<(const Candidate& o) const {
            return dist < o.dist || (dist == o.dist && index < o.index);
        }
    };
    std::vector<Candidate> cands(m.points.size());
    for (std::size_t i = 0; i < m.points.size(); ++i) {
        double d = m.metric == DistanceMetric::euclidean ? euclidean_distance(m.points[i], x)
                                                         : manhattan_distance(m.points[i], x);
        cands[i] = {d, i};
    }
    const std::size_t k = std::min(m.k, cands.size());
    std::nth_element(cands.begin(), cands.begin() + static_cast<long>(k - 1), cands.end());

    std::size_t malware = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (m.labels[cands[i].index] == Label::malware) ++malware;
    double score = static_cast<double>(malware) / static_cast<double>(k);
    return {2 * malware > k ? Label::malware : Label::benign, score};
}

}  // namespace hmd
