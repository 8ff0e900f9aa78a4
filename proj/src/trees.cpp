#include "hmd/trees.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace hmd {

namespace {

using Counts = std::array<std::size_t, 2>;

double h2(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double class_entropy(const Counts& c) {
    std::size_t n = c[0] + c[1];
    return n == 0 ? 0.0 : h2(static_cast<double>(c[1]) / static_cast<double>(n));
}

Label majority(const Counts& c) { return c[1] > c[0] ? Label::malware : Label::benign; }

struct Builder {
    const Dataset& ds;
    const TreeParams& params;
    TreeModel model;

    std::size_t build(std::vector<std::size_t>& rows, std::size_t depth) {
        Counts counts{};
        for (auto r : rows) ++counts[static_cast<std::size_t>(to_int(ds[r].label))];

        std::size_t id = model.nodes.size();
        model.nodes.push_back(TreeNode{});
        model.nodes[id].class_counts = counts;
        model.nodes[id].label = majority(counts);

        bool pure = counts[0] == 0 || counts[1] == 0;
        if (pure || depth >= params.max_depth || rows.size() < 2 * params.min_leaf) return id;

        struct Best {
            bool found = false;
            double ratio = -1.0;
            std::size_t feature = 0;
            double threshold = 0.0;
        } best;

        std::vector<std::size_t> sorted = rows;
        for (std::size_t f = 0; f < ds.feature_count(); ++f) {
            std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return ds[a].features[f] < ds[b].features[f];
            });
            Counts left{};
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                ++left[static_cast<std::size_t>(to_int(ds[sorted[i]].label))];
                double v = ds[sorted[i]].features[f];
                double next = ds[sorted[i + 1]].features[f];
                if (!(v < next)) continue;
                std::size_t n_left = i + 1;
                std::size_t n_right = sorted.size() - n_left;
                if (n_left < params.min_leaf || n_right < params.min_leaf) continue;
                Counts right{counts[0] - left[0], counts[1] - left[1]};
                double ratio = gain_ratio(left, right);
                if (!best.found || ratio > best.ratio) {
                    double mid = v + (next - v) / 2.0;
                    // Midpoint of adjacent doubles can round up onto `next`.
                    if (!(mid < next)) mid = v;
                    best = {true, ratio, f, mid};
                }
            }
        }
        if (!best.found) return id;

        std::vector<std::size_t> left_rows, right_rows;
        for (auto r : rows)
            (ds[r].features[best.feature] <= best.threshold ? left_rows : right_rows).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        std::size_t l = build(left_rows, depth + 1);
        std::size_t r = build(right_rows, depth + 1);
        auto& node = model.nodes[id];
        node.leaf = false;
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return id;
    }
};

std::string format_number(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

void explain_node(const TreeModel& m, const std::vector<std::string>& names, std::size_t id,
                  std::size_t indent, const std::string& prefix, std::ostringstream& out) {
    const auto& n = m.nodes[id];
    std::string pad(indent * 2, ' ');
    if (n.leaf) {
        out << pad << prefix << "class " << to_int(n.label) << " (benign=" << n.class_counts[0]
            << ", malware=" << n.class_counts[1] << ")\n";
        return;
    }
    out << pad << prefix << "if " << names.at(n.feature) << " <= " << format_number(n.threshold)
        << " then\n";
    explain_node(m, names, n.left, indent + 1, "", out);
    explain_node(m, names, n.right, indent, "else ", out);
}

}  // namespace

std::size_t TreeModel::depth() const {
    if (nodes.empty()) return 0;
    std::function<std::size_t(std::size_t)> rec = [&](std::size_t id) -> std::size_t {
        const auto& n = nodes[id];
        if (n.leaf) return 0;
        return 1 + std::max(rec(n.left), rec(n.right));
    };
    return rec(0);
}

std::size_t TreeModel::internal_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return !n.leaf; }));
}

double gain_ratio(const Counts& left, const Counts& right) {
    std::size_t nl = left[0] + left[1];
    std::size_t nr = right[0] + right[1];
    if (nl == 0 || nr == 0) throw InvalidArgument("gain_ratio: split leaves an empty partition");
    double n = static_cast<double>(nl + nr);
    Counts parent{left[0] + right[0], left[1] + right[1]};
    double gain = class_entropy(parent) - (static_cast<double>(nl) / n) * class_entropy(left) -
                  (static_cast<double>(nr) / n) * class_entropy(right);
    double split_info = h2(static_cast<double>(nl) / n);
    return std::max(0.0, gain) / split_info;
}

double gain_ratio(const Dataset& ds, std::size_t feature, double threshold) {
    if (feature >= ds.feature_count()) throw InvalidArgument("gain_ratio: feature out of range");
    Counts left{}, right{};
    for (const auto& s : ds.samples())
        ++(s.features[feature] <= threshold ? left : right)[static_cast<std::size_t>(to_int(s.label))];
    return gain_ratio(left, right);
}

TreeModel train_tree(const Dataset& ds, const TreeParams& params) {
    if (ds.empty()) throw EmptyDatasetError("tree: empty training set");
    if (params.min_leaf == 0) throw ConfigError("tree: min_leaf must be at least 1");
    Builder b{ds, params, {}};
    b.model.features = ds.feature_count();
    std::vector<std::size_t> rows(ds.size());
    std::iota(rows.begin(), rows.end(), 0);
    b.build(rows, 0);
    return std::move(b.model);
}

std::size_t tree_leaf(const TreeModel& m, std::span<const double> x) {
    if (m.nodes.empty()) throw InvalidArgument("tree: model has no nodes");
    check_dimension(m.features, x.size());
    std::size_t id = 0;
    while (!m.nodes[id].leaf) {
        const auto& n = m.nodes[id];
        id = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return id;
}

Prediction tree_predict(const TreeModel& m, std::span<const double> x) {
    const auto& leaf = m.nodes[tree_leaf(m, x)];
    double total = static_cast<double>(leaf.class_counts[0] + leaf.class_counts[1]);
    return {leaf.label, static_cast<double>(leaf.class_counts[1]) / total};
}

std::string explain_tree(const TreeModel& m, const std::vector<std::string>& feature_names) {
    if (feature_names.size() != m.features) throw DimensionError(m.features, feature_names.size());
    std::ostringstream out;
    if (!m.nodes.empty()) explain_node(m, feature_names, 0, 0, "", out);
    return out.str();
}

std::uint64_t bootstrap_seed(std::uint64_t master, std::size_t tree_index) {
    // splitmix64 step over (master, index)
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(tree_index) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = pick(rng);
    return rows;
}

BaggedModel train_bagged(const Dataset& ds, const BaggingParams& params) {
    if (params.trees < 1) throw ConfigError("bagging: need at least one tree");
    if (ds.empty()) throw EmptyDatasetError("bagging: empty training set");
    if (params.tree.min_leaf == 0) throw ConfigError("tree: min_leaf must be at least 1");

    BaggedModel m;
    m.seed = params.seed;
    m.bootstrap = params.bootstrap;
    m.trees.resize(params.trees);

    // Trees are independent given their derived seeds, so the schedule cannot change the result.
    auto train_one = [&](std::size_t t) {
        if (!params.bootstrap) {
            m.trees[t] = train_tree(ds, params.tree);
            return;
        }
        auto rows = bootstrap_rows(ds.size(), bootstrap_seed(params.seed, t));
        m.trees[t] = train_tree(ds.subset(rows), params.tree);
    };
    std::size_t workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    workers = std::min<std::size_t>(workers, params.trees);
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < params.trees; t += workers) train_one(t);
        });
    pool.clear();
    return m;
}

Prediction bagged_predict(const BaggedModel& m, std::span<const double> x) {
    if (m.trees.empty()) throw InvalidArgument("bagging: model has no trees");
    std::size_t votes = 0;
    for (const auto& t : m.trees)
        if (tree_predict(t, x).label == Label::malware) ++votes;
    const std::size_t total = m.trees.size();
    return {2 * votes > total ? Label::malware : Label::benign,
            static_cast<double>(votes) / static_cast<double>(total)};
}

}  // namespace hmd
