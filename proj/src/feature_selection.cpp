#include "hmd/feature_selection.hpp"

#include "hmd/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace hmd {

double entropy(std::span<const int> x) {
    if (x.empty()) throw InvalidArgument("entropy of an empty sequence");
    std::map<int, std::size_t> counts;
    for (int v : x) ++counts[v];
    const double n = static_cast<double>(x.size());
    double h = 0.0;
    for (const auto& [v, c] : counts) {
        double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double mutual_information(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size())
        throw InvalidArgument("mutual_information: sequences differ in length");
    if (x.empty()) throw InvalidArgument("mutual_information: empty input");

    std::map<int, std::size_t> cx, cy;
    std::map<std::pair<int, int>, std::size_t> cxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ++cx[x[i]];
        ++cy[y[i]];
        ++cxy[{x[i], y[i]}];
    }
    const double n = static_cast<double>(x.size());
    double mi = 0.0;
    for (const auto& [cell, c] : cxy) {
        double pxy = static_cast<double>(c) / n;
        double px = static_cast<double>(cx[cell.first]) / n;
        double py = static_cast<double>(cy[cell.second]) / n;
        mi += pxy * std::log2(pxy / (px * py));
    }
    // Rounding can leave a tiny negative residue for independent variables.
    return std::max(0.0, mi);
}

std::vector<int> discretize(std::span<const double> values, int bins) {
    if (bins < 1) throw InvalidArgument("discretize: bins must be >= 1");
    if (values.empty()) throw InvalidArgument("discretize: empty input");

    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<int> out(n, 0);
    int current = 0;
    for (std::size_t r = 0; r < n; ++r) {
        bool tie_with_prev = r > 0 && values[order[r]] == values[order[r - 1]];
        if (!tie_with_prev)
            current = static_cast<int>((r * static_cast<std::size_t>(bins)) / n);
        out[order[r]] = current;
    }
    return out;
}

std::vector<std::size_t> top_k(std::span<const double> scores, std::size_t k) {
    if (k > scores.size())
        throw InvalidArgument("k = " + std::to_string(k) + " exceeds the feature count " +
                              std::to_string(scores.size()));
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    order.resize(k);
    return order;
}

SelectionResult select_k_best(const Dataset& ds, std::size_t k, int bins) {
    if (k == 0) throw InvalidArgument("select_k_best: k must be positive");
    if (k > ds.feature_count())
        throw InvalidArgument("k = " + std::to_string(k) + " exceeds the feature count " +
                              std::to_string(ds.feature_count()));
    if (ds.empty()) throw EmptyDatasetError("select_k_best: empty dataset");

    auto labels = ds.labels();
    SelectionResult result;
    std::vector<double> scores;
    for (std::size_t j = 0; j < ds.feature_count(); ++j) {
        auto col = ds.column(j);
        auto binned = discretize(col, bins);
        double s = mutual_information(binned, labels);
        scores.push_back(s);
        result.all_scores.push_back({j, s});
    }
    result.kept_indices = top_k(scores, k);
    return result;
}

}  // namespace hmd
