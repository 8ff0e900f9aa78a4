#include "hmd/classifier.hpp"
#include "hmd/cost_model.hpp"
#include "hmd/error.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace hmd;
using namespace hmd::testing;

namespace {

TrainedModel fixed_mlp() { return TrainedModel(ModelType::mlp, init_mlp(4, {.hidden = 5, .seed = 3})); }

TrainedModel bag_of(const std::vector<TreeModel>& trees) {
    return TrainedModel(ModelType::bagged_trees, BaggedModel{trees, 0, true});
}

}  // namespace

TEST(Cost, SingleLeafTreeIsFree) {
    auto ds = make_dataset({{1}, {2}}, {1, 1});
    TrainedModel m(ModelType::decision_tree, train_tree(ds));
    auto r = estimate_cost(m, CostTable::default_table());
    EXPECT_EQ(r.latency_cycles, 0u);
    EXPECT_EQ(r.rme, 0u);
    EXPECT_EQ(r.interval_cycles, 1u);
}

TEST(Cost, MlpHandCountUnderUnitTable) {
    // Hidden layer: 5 neurons x (4 multiplies + 3 adds + 1 bias add + 1 tanh).
    // Output: 5 multiplies + 4 adds + 1 bias add + 1 tanh. Weights: 5x5 + 6 words. Sign: 1 compare.
    const std::uint64_t multiplies = 5 * 4 + 5, adds = 5 * (3 + 1) + (4 + 1), tanh = 5 + 1;
    const std::uint64_t words = 5 * 5 + 6, compares = 1;
    const std::uint64_t total = multiplies + adds + tanh + words + compares;
    auto r = estimate_cost(fixed_mlp(), CostTable::unit());
    EXPECT_EQ(total, 88u);
    EXPECT_EQ(r.latency_cycles, total);
    EXPECT_EQ(r.bram, total);
    EXPECT_EQ(r.rme, 4 * total);
    auto ops = count_primitives(fixed_mlp()).total();
    EXPECT_EQ(ops[Primitive::multiply], multiplies);
    EXPECT_EQ(ops[Primitive::add], adds);
    EXPECT_EQ(ops[Primitive::tanh_eval], tanh);
}

TEST(Cost, LinearSvmCalibration) {
    TrainedModel m(ModelType::svm, LinearModel{LinearKind::svm, {1, 2, 3, 4}, 0.5, {}});
    auto r = estimate_cost(m, CostTable::default_table());
    EXPECT_EQ(r.latency_cycles, 52u);
    EXPECT_EQ(r.latency_ns, 1300.0);
}

TEST(Cost, DoublingEnsembleDoublesTreeCost) {
    auto ds = random_dataset(120, 4, 3);
    auto bag = train_bagged(ds, {.trees = 5});
    auto doubled = bag.trees;
    doubled.insert(doubled.end(), bag.trees.begin(), bag.trees.end());
    auto t = CostTable::default_table();
    auto a = cost_of(count_primitives(bag_of(bag.trees)).core, t);
    auto b = cost_of(count_primitives(bag_of(doubled)).core, t);
    EXPECT_EQ(b.latency_cycles, 2 * a.latency_cycles);
    EXPECT_EQ(b.bram, 2 * a.bram);
    EXPECT_EQ(b.rme, 2 * a.rme);
    EXPECT_GE(estimate_cost(bag_of(doubled), t).rme, estimate_cost(bag_of(bag.trees), t).rme);
}

TEST(Cost, LatencyNsIsCyclesTimesClock) {
    auto ds = random_dataset(80, 4, 4);
    CostTable t = CostTable::default_table();
    t.clock_period_ns = 3.7;
    for (auto type : all_model_types()) {
        auto r = estimate_cost(train_model(type, ds), t);
        EXPECT_EQ(r.latency_ns, static_cast<double>(r.latency_cycles) * 3.7);
        EXPECT_EQ(r.interval_cycles, r.latency_cycles + 1);
        EXPECT_EQ(r.rme, r.bram + r.dsp + r.ff + r.lut);
    }
}

TEST(Cost, MoreRulesNeverCheaper) {
    RuleListModel m;
    m.features = 1;
    m.intervals.push_back({0, -1, 1, Label::benign, 1, 1.0});
    TrainedModel one(ModelType::many_rules_oner, m);
    auto base = estimate_cost(one, CostTable::default_table()).rme;
    for (int i = 0; i < 5; ++i) {
        m.intervals.push_back({0, 0, 1, Label::malware, 1, 1.0});
        auto next = estimate_cost(TrainedModel(ModelType::many_rules_oner, m), CostTable::default_table()).rme;
        EXPECT_GE(next, base);
        base = next;
    }
}

TEST(Cost, PureFunctionOfStructure) {
    auto ds = random_dataset(80, 4, 5);
    auto a = train_model(ModelType::decision_tree, ds);
    auto b = train_model(ModelType::decision_tree, ds);
    EXPECT_EQ(estimate_cost(a, CostTable::default_table()), estimate_cost(b, CostTable::default_table()));
}

TEST(Cost, InvalidClockRejected) {
    CostTable t = CostTable::unit();
    t.clock_period_ns = 0.0;
    EXPECT_THROW(estimate_cost(fixed_mlp(), t), ConfigError);
}

TEST(Rank, SingleEntry) {
    std::vector<NamedCost> one{{"a", CostReport{}}};
    EXPECT_EQ(rank_models(one), one);
}

TEST(Rank, TiesBrokenByLatencyThenName) {
    CostReport fast{.latency_cycles = 3, .rme = 10}, slow{.latency_cycles = 9, .rme = 10};
    std::vector<NamedCost> in{{"b", fast}, {"z", slow}, {"a", fast}, {"big", CostReport{.rme = 50}}};
    auto out = rank_models(in);
    std::vector<std::string> names;
    for (const auto& [n, r] : out) names.push_back(n);
    EXPECT_EQ(names, (std::vector<std::string>{"big", "z", "a", "b"}));
}

TEST(Rank, MatchesSortOracle) {
    auto ds = random_dataset(100, 4, 6);
    std::vector<NamedCost> in;
    for (auto type : all_model_types())
        in.emplace_back(std::string(to_string(type)), estimate_cost(train_model(type, ds), CostTable::default_table()));
    auto want = in;
    std::sort(want.begin(), want.end(), [](const NamedCost& a, const NamedCost& b) {
        return std::tuple(-static_cast<double>(a.second.rme), -static_cast<double>(a.second.latency_cycles), a.first) <
               std::tuple(-static_cast<double>(b.second.rme), -static_cast<double>(b.second.latency_cycles), b.first);
    });
    EXPECT_EQ(rank_models(in), want);
}

TEST(Rank, CsvHeader) {
    auto csv = cost_csv({{"svm", CostReport{}}});
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,latency_cycles,latency_ns,interval,bram,dsp,ff,lut,rme");
}
