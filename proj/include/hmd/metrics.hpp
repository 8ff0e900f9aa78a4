#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hmd {

// Positive class is malware (1).
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

// A metric whose denominator may vanish; degenerate values are reported as 0.
struct MetricValue {
    double value = 0.0;
    bool degenerate = false;
};

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual);

MetricValue accuracy(const ConfusionMatrix& cm);
MetricValue precision(const ConfusionMatrix& cm);
MetricValue recall(const ConfusionMatrix& cm);
MetricValue f1(const ConfusionMatrix& cm);
// Harmonic mean of a precision/recall pair.
MetricValue f1(double precision, double recall);
// FP / (FP + TN)
MetricValue false_positive_rate(const ConfusionMatrix& cm);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;

    bool operator==(const RocPoint&) const = default;
};

// points[i] is the operating point of "predict 1 iff score >= thresholds[i]". The first
// threshold is +inf, giving (0, 0); the last is the lowest score, giving (1, 1).
struct RocCurve {
    std::vector<RocPoint> points;
    std::vector<double> thresholds;
};

RocCurve roc_curve(std::span<const double> scores, std::span<const int> actual);
// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

// threshold,fpr,tpr rows in descending threshold order.
std::string roc_to_csv(const RocCurve& curve);

}  // namespace hmd
