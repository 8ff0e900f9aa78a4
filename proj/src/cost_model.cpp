#include "hmd/cost_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace hmd {

namespace {

using P = Primitive;

OpCounts tree_ops(const TreeModel& t) {
    OpCounts c;
    c[P::compare] = t.depth();
    c[P::memory_word] = 2 * t.internal_count();  // feature id + threshold; leaves are wired constants
    return c;
}

std::uint64_t ceil_log2(std::uint64_t v) { return v <= 1 ? 0 : std::bit_width(v - 1); }

// Sigmoid as exp, one add and one divide.
void add_sigmoid(OpCounts& c) {
    c[P::exp_eval] += 1;
    c[P::add] += 1;
    c[P::divide] += 1;
}

}  // namespace

std::string_view to_string(Primitive p) {
    switch (p) {
        case P::compare: return "compare";
        case P::add: return "add";
        case P::multiply: return "multiply";
        case P::divide: return "divide";
        case P::exp_eval: return "exp_eval";
        case P::tanh_eval: return "tanh_eval";
        case P::memory_word: return "memory_word";
    }
    return "unknown";
}

CostTable CostTable::default_table() {
    CostTable t;
    t.clock_period_ns = 25.0;
    //                      cycles bram dsp   ff   lut
    t[P::compare] = {1, 0, 0, 8, 16};
    t[P::add] = {1, 0, 0, 32, 40};
    t[P::multiply] = {3, 0, 3, 48, 24};
    t[P::divide] = {13, 0, 0, 180, 260};
    t[P::exp_eval] = {16, 0, 7, 310, 520};
    t[P::tanh_eval] = {18, 0, 8, 360, 610};
    t[P::memory_word] = {1, 1, 0, 0, 0};
    return t;
}

CostTable CostTable::unit() {
    CostTable t;
    t.clock_period_ns = 1.0;
    for (auto& c : t.costs) c = {1, 1, 1, 1, 1};
    return t;
}

void validate(const CostTable& t) {
    if (!(t.clock_period_ns > 0.0) || !std::isfinite(t.clock_period_ns))
        throw ConfigError("cost table: clock_period_ns must be positive");
}

OpCounts& OpCounts::operator+=(const OpCounts& o) {
    for (std::size_t i = 0; i < n.size(); ++i) n[i] += o.n[i];
    return *this;
}

std::uint64_t OpCounts::total() const {
    std::uint64_t s = 0;
    for (auto v : n) s += v;
    return s;
}

OpCounts operator+(OpCounts a, const OpCounts& b) { return a += b; }

OpBreakdown count_primitives(const TrainedModel& model) {
    OpBreakdown out;
    auto& core = out.core;
    auto& agg = out.aggregation;
    switch (model.type()) {
        case ModelType::knn: {
            const auto& m = model.as<KnnModel>();
            if (m.points.empty()) throw InvalidArgument("cost: knn model has no training points");
            const std::uint64_t n = m.points.size(), d = m.feature_count(), k = m.k;
            // Squared distances keep the ordering, so no square root is needed.
            if (m.metric == DistanceMetric::euclidean) {
                core[P::add] = n * (2 * d - 1);
                core[P::multiply] = n * d;
            } else {
                core[P::add] = n * (2 * d - 1);
                core[P::compare] = n * d;  // absolute value
            }
            core[P::compare] += n * k;  // insertion into the k-best list
            core[P::memory_word] = n * (d + 1);
            agg[P::add] = k;
            agg[P::divide] = 1;
            agg[P::compare] = 1;
            break;
        }
        case ModelType::mlp: {
            const auto& m = model.as<MlpModel>();
            const std::uint64_t in = m.inputs, h = m.hidden;
            if (m.hidden_weights.empty()) throw InvalidArgument("cost: mlp model has no weights");
            core[P::multiply] = h * in + h;
            core[P::add] = h * in + h;  // includes one bias add per neuron
            core[P::tanh_eval] = h + 1;
            core[P::memory_word] = h * (in + 1) + (h + 1);
            agg[P::compare] = 1;  // sign of the output
            break;
        }
        case ModelType::decision_tree: {
            const auto& m = model.as<TreeModel>();
            if (m.nodes.empty()) throw InvalidArgument("cost: tree has no nodes");
            core = tree_ops(m);
            break;
        }
        case ModelType::bagged_trees: {
            const auto& m = model.as<BaggedModel>();
            if (m.trees.empty()) throw InvalidArgument("cost: ensemble has no trees");
            for (const auto& t : m.trees) core += tree_ops(t);
            agg[P::add] = m.trees.size();
            agg[P::compare] = 1;
            agg[P::divide] = 1;
            break;
        }
        case ModelType::svm:
        case ModelType::logistic_regression: {
            const auto& m = model.as<LinearModel>();
            if (m.w.empty()) throw InvalidArgument("cost: linear model has no weights");
            const std::uint64_t d = m.w.size();
            core[P::multiply] = d;
            core[P::add] = d;  // d - 1 sums plus the bias
            core[P::memory_word] = d + 1;
            add_sigmoid(agg);
            agg[P::compare] = 1;
            break;
        }
        case ModelType::oner:
        case ModelType::many_rules_oner: {
            const auto& m = model.as<RuleListModel>();
            if (m.intervals.empty()) throw InvalidArgument("cost: rule list is empty");
            core[P::compare] = m.base_cases.size() + ceil_log2(m.intervals.size());
            core[P::memory_word] = 2 * (m.base_cases.size() + m.intervals.size());
            break;
        }
    }
    return out;
}

CostReport cost_of(const OpCounts& ops, const CostTable& t) {
    validate(t);
    CostReport r;
    for (std::size_t i = 0; i < kPrimitiveCount; ++i) {
        const auto n = ops.n[i];
        const auto& c = t.costs[i];
        r.latency_cycles += n * c.cycles;
        r.bram += n * c.bram;
        r.dsp += n * c.dsp;
        r.ff += n * c.ff;
        r.lut += n * c.lut;
    }
    r.latency_ns = static_cast<double>(r.latency_cycles) * t.clock_period_ns;
    r.interval_cycles = r.latency_cycles + 1;
    r.rme = r.bram + r.dsp + r.ff + r.lut;
    return r;
}

CostReport estimate_cost(const TrainedModel& m, const CostTable& t) {
    return cost_of(count_primitives(m).total(), t);
}

std::vector<NamedCost> rank_models(std::vector<NamedCost> reports) {
    std::stable_sort(reports.begin(), reports.end(), [](const NamedCost& a, const NamedCost& b) {
        if (a.second.rme != b.second.rme) return a.second.rme > b.second.rme;
        if (a.second.latency_cycles != b.second.latency_cycles)
            return a.second.latency_cycles > b.second.latency_cycles;
        return a.first < b.first;
    });
    return reports;
}

std::string cost_csv(const std::vector<NamedCost>& reports) {
    std::ostringstream out;
    out.precision(17);
    out << "model,latency_cycles,latency_ns,interval,bram,dsp,ff,lut,rme\n";
    for (const auto& [name, r] : reports)
        out << name << ',' << r.latency_cycles << ',' << r.latency_ns << ',' << r.interval_cycles << ','
            << r.bram << ',' << r.dsp << ',' << r.ff << ',' << r.lut << ',' << r.rme << '\n';
    return out.str();
}

}  // namespace hmd
