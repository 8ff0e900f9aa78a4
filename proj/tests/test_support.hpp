#pragma once

// Shared fixtures and independent reference implementations for the test binaries.

#include "hmd/dataset.hpp"
#include "hmd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hmd::testing {

inline std::vector<std::string> names_for(std::size_t d) {
    if (d == 4) return default_feature_names();
    std::vector<std::string> n;
    for (std::size_t i = 0; i < d; ++i) n.push_back("f" + std::to_string(i));
    return n;
}

inline Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
    std::vector<HpcSample> s;
    for (std::size_t i = 0; i < rows.size(); ++i) s.push_back({rows[i], label_from_int(labels[i]), std::nullopt});
    return Dataset(names_for(rows.empty() ? 4 : rows.front().size()), std::move(s));
}

// Two Gaussian clusters centred at -sep and +sep on every axis.
inline Dataset separable_clusters(std::size_t per_class, std::size_t d, double sep, double spread,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spread);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<double> x(d);
            for (auto& v : x) v = (c == 1 ? sep : -sep) + noise(rng);
            rows.push_back(x);
            labels.push_back(c);
        }
    }
    return make_dataset(rows, labels);
}

inline Dataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed, int value_range = 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> iv(0, value_range);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(d);
        for (auto& v : x) v = value_range > 0 ? iv(rng) : u(rng);
        rows.push_back(x);
        labels.push_back(static_cast<int>(rng() & 1U));
    }
    return make_dataset(rows, labels);
}

// ---- rational arithmetic ---------------------------------------------------

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

inline Rational reduce(std::int64_t n, std::int64_t d) {
    auto g = std::gcd(n, d);
    if (g == 0) return {0, 1};
    return {n / g, d / g};
}
inline Rational operator+(Rational a, Rational b) { return reduce(a.num * b.den + b.num * a.den, a.den * b.den); }
inline Rational operator*(Rational a, Rational b) { return reduce(a.num * b.num, a.den * b.den); }
inline Rational operator/(Rational a, Rational b) { return reduce(a.num * b.den, a.den * b.num); }
// Correctly rounded: both parts are far below 2^53.
inline double to_double(Rational r) { return static_cast<double>(r.num) / static_cast<double>(r.den); }

struct RationalMetrics {
    double accuracy, precision, recall, f1;
};

inline RationalMetrics rational_metrics(const ConfusionMatrix& cm) {
    auto frac = [](std::size_t n, std::size_t d) {
        return d == 0 ? Rational{0, 1} : reduce(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    };
    Rational acc = frac(cm.tp + cm.tn, cm.total());
    Rational p = frac(cm.tp, cm.tp + cm.fp);
    Rational r = frac(cm.tp, cm.tp + cm.fn);
    Rational s = p + r;
    Rational f = s.num == 0 ? Rational{0, 1} : (Rational{2, 1} * p * r) / s;
    return {to_double(acc), to_double(p), to_double(r), to_double(f)};
}

// P(score+ > score-) + 0.5 P(tie) over every positive/negative pair.
inline double mann_whitney_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

// Sorts every training point by (distance, index) and votes over the first k.
inline std::pair<int, double> knn_full_sort(const std::vector<std::vector<double>>& train,
                                            const std::vector<int>& labels, const std::vector<double>& q,
                                            std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t i = 0; i < train.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) s += (train[i][j] - q[j]) * (train[i][j] - q[j]);
        d.emplace_back(std::sqrt(s), i);
    }
    std::sort(d.begin(), d.end());
    std::size_t mal = 0;
    for (std::size_t i = 0; i < k; ++i) mal += labels[d[i].second] == 1;
    return {2 * mal > k ? 1 : 0, static_cast<double>(mal) / static_cast<double>(k)};
}

inline double entropy2(double a, double b) {
    double n = a + b, h = 0.0;
    for (double c : {a, b})
        if (c > 0) h -= c / n * std::log2(c / n);
    return h;
}

// ---- filesystem ------------------------------------------------------------

inline std::filesystem::path temp_dir(const std::string& name) {
    const char* base = std::getenv("HMD_TEST_TMP");
    std::filesystem::path p = base ? std::filesystem::path(base) : std::filesystem::temp_directory_path() / "hmd";
    p /= name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hmd::testing
