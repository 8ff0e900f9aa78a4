#pragma once

#include "hmd/prediction.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hmd {

// Flat node storage; node 0 is the root. Internal nodes send x[feature] <= threshold
// to `left`, everything else to `right`.
struct TreeNode {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::array<std::size_t, 2> class_counts{};  // {benign, malware} of training rows reaching the node
    Label label = Label::benign;

    bool operator==(const TreeNode&) const = default;
};

struct TreeParams {
    std::size_t max_depth = 20;
    std::size_t min_leaf = 2;
};

struct TreeModel {
    std::size_t features = 0;
    std::vector<TreeNode> nodes;

    std::size_t feature_count() const { return features; }
    // Number of internal nodes on the longest root-to-leaf path.
    std::size_t depth() const;
    std::size_t internal_count() const;
    bool operator==(const TreeModel&) const = default;
};

// Information gain of a binary split divided by the split's own entropy (bits).
// counts are {benign, malware}; both sides must be non-empty.
double gain_ratio(const std::array<std::size_t, 2>& left, const std::array<std::size_t, 2>& right);
// The split x[feature] <= threshold over the whole dataset.
double gain_ratio(const Dataset& ds, std::size_t feature, double threshold);

// Greedy gain-ratio induction over midpoint thresholds, no pruning. A split is only
// considered when both children keep at least min_leaf rows. Leaf majority ties go benign.
TreeModel train_tree(const Dataset& ds, const TreeParams& params = {});

// Index of the leaf that x lands in.
std::size_t tree_leaf(const TreeModel& m, std::span<const double> x);
// score = malware share of the leaf's training rows.
Prediction tree_predict(const TreeModel& m, std::span<const double> x);

// One line per node: "if <name> <= <t> then", children indented, right branch prefixed by
// "else ".
std::string explain_tree(const TreeModel& m, const std::vector<std::string>& feature_names);

struct BaggingParams {
    std::size_t trees = 25;
    TreeParams tree;
    std::uint64_t seed = 11;
    bool bootstrap = true;  // false trains every tree on the full set (diagnostic)
};

struct BaggedModel {
    std::vector<TreeModel> trees;
    std::uint64_t seed = 0;
    bool bootstrap = true;

    std::size_t feature_count() const { return trees.empty() ? 0 : trees.front().features; }
    bool operator==(const BaggedModel&) const = default;
};

// Seed of the i-th tree's bootstrap draw, derived from the master seed only.
std::uint64_t bootstrap_seed(std::uint64_t master, std::size_t tree_index);
// Row indices of one bootstrap resample of size n (with replacement).
std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed);

BaggedModel train_bagged(const Dataset& ds, const BaggingParams& params = {});

// Plurality over the trees, ties benign; score = malware votes / T.
Prediction bagged_predict(const BaggedModel& m, std::span<const double> x);

}  // namespace hmd
