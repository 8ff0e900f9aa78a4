#pragma once

#include "hmd/dataset.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hmd {

struct FeatureScore {
    std::size_t feature_index = 0;
    double score = 0.0;  // bits
};

struct SelectionResult {
    std::vector<std::size_t> kept_indices;  // highest score first
    std::vector<FeatureScore> all_scores;   // feature index order
};

// Plug-in estimate of I(X;Y) = sum p(x,y) log2(p(x,y) / (p(x) p(y))) over the empirical
// joint distribution. Empty cells contribute nothing.
double mutual_information(std::span<const int> x, std::span<const int> y);

// Plug-in Shannon entropy in bits.
double entropy(std::span<const int> x);

// Equal-frequency binning on ranks. Identical values always share a bin: a run of ties
// takes the bin of its first (lowest-rank) member.
std::vector<int> discretize(std::span<const double> values, int bins);

// Top-k indices by descending score; equal scores keep the lower index first.
std::vector<std::size_t> top_k(std::span<const double> scores, std::size_t k);

inline constexpr int kDefaultMiBins = 16;

SelectionResult select_k_best(const Dataset& ds, std::size_t k, int bins = kDefaultMiBins);

}  // namespace hmd
