#include "hmd/metrics.hpp"

#include "hmd/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace hmd {

namespace {

MetricValue ratio(std::size_t num, std::size_t den) {
    if (den == 0) return {0.0, true};
    return {static_cast<double>(num) / static_cast<double>(den), false};
}

void check_binary(int v) {
    if (v != 0 && v != 1) throw InvalidArgument("labels must be 0 or 1");
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size()) throw InvalidArgument("confusion: length mismatch");
    if (predicted.empty()) throw InvalidArgument("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        check_binary(predicted[i]);
        check_binary(actual[i]);
        if (actual[i] == 1) {
            ++(predicted[i] == 1 ? cm.tp : cm.fn);
        } else {
            ++(predicted[i] == 1 ? cm.fp : cm.tn);
        }
    }
    return cm;
}

MetricValue accuracy(const ConfusionMatrix& cm) { return ratio(cm.tp + cm.tn, cm.total()); }
MetricValue precision(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fp); }
MetricValue recall(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
MetricValue false_positive_rate(const ConfusionMatrix& cm) { return ratio(cm.fp, cm.fp + cm.tn); }

MetricValue f1(double p, double r) {
    if (p + r == 0.0) return {0.0, true};
    return {2.0 * p * r / (p + r), false};
}

// Count form 2tp / (2tp + fp + fn): one rounding, so it is exact to the last bit.
MetricValue f1(const ConfusionMatrix& cm) {
    auto out = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
    out.degenerate = out.degenerate || precision(cm).degenerate || recall(cm).degenerate;
    return out;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const int> actual) {
    if (scores.size() != actual.size()) throw InvalidArgument("roc_curve: length mismatch");
    std::size_t pos = 0, neg = 0;
    for (int a : actual) {
        check_binary(a);
        (a == 1 ? pos : neg) += 1;
    }
    if (pos == 0 || neg == 0) throw InvalidArgument("roc_curve: both classes are required");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve c;
    c.thresholds.push_back(std::numeric_limits<double>::infinity());
    c.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        double t = scores[order[i]];
        // Every sample with score >= t flips to positive at this threshold.
        while (i < order.size() && scores[order[i]] == t) {
            (actual[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        c.thresholds.push_back(t);
        c.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return c;
}

double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return area;
}

std::string roc_to_csv(const RocCurve& curve) {
    std::ostringstream out;
    out.precision(17);
    out << "threshold,fpr,tpr\n";
    for (std::size_t i = 0; i < curve.points.size(); ++i)
        out << curve.thresholds[i] << ',' << curve.points[i].fpr << ',' << curve.points[i].tpr << '\n';
    return out.str();
}

}  // namespace hmd
