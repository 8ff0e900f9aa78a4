#include "hmd/error.hpp"
#include "hmd/feature_selection.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace hmd;
using namespace hmd::testing;

TEST(MutualInformation, FairBitWithItself) {
    std::vector<int> x{0, 1, 0, 1, 1, 0, 1, 0};
    EXPECT_DOUBLE_EQ(mutual_information(x, x), 1.0);
}

TEST(MutualInformation, ConstantTargetGivesZero) {
    std::vector<int> x{0, 1, 2, 0, 1, 2}, y(6, 1);
    EXPECT_EQ(mutual_information(x, y), 0.0);
}

TEST(MutualInformation, TermByTermJointCounts) {
    std::vector<int> x, y;
    auto add = [&](int a, int b, int n) {
        for (int i = 0; i < n; ++i) {
            x.push_back(a);
            y.push_back(b);
        }
    };
    add(0, 0, 4);
    add(0, 1, 1);
    add(1, 0, 1);
    add(1, 1, 4);
    double want = 0.0;
    for (auto [c, px, py] : {std::tuple{4.0, 0.5, 0.5}, {1.0, 0.5, 0.5}, {1.0, 0.5, 0.5}, {4.0, 0.5, 0.5}}) {
        double pxy = c / 10.0;
        want += pxy * std::log2(pxy / (px * py));
    }
    EXPECT_NEAR(mutual_information(x, y), want, 1e-12);
}

TEST(MutualInformation, Symmetric) {
    std::mt19937_64 rng(2);
    std::vector<int> x(100), y(100);
    for (auto& v : x) v = static_cast<int>(rng() % 5);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = (x[i] + static_cast<int>(rng() % 2)) % 3;
    EXPECT_NEAR(mutual_information(x, y), mutual_information(y, x), 1e-12);
    EXPECT_GE(mutual_information(x, y), 0.0);
}

TEST(MutualInformation, BadInput) {
    std::vector<int> a{1, 2}, b{1};
    EXPECT_THROW(mutual_information(a, b), InvalidArgument);
    EXPECT_THROW(mutual_information(std::vector<int>{}, std::vector<int>{}), InvalidArgument);
}

TEST(Entropy, FairCoin) {
    std::vector<int> x{0, 1, 0, 1};
    EXPECT_DOUBLE_EQ(entropy(x), 1.0);
}

TEST(Discretize, Examples) {
    std::vector<double> a{1, 2, 3, 4}, c{5, 5, 5, 5};
    EXPECT_EQ(discretize(a, 2), (std::vector<int>{0, 0, 1, 1}));
    EXPECT_EQ(discretize(a, 1), (std::vector<int>{0, 0, 0, 0}));
    auto ties = discretize(c, 2);
    EXPECT_TRUE(std::all_of(ties.begin(), ties.end(), [&](int b) { return b == ties[0]; }));
}

TEST(Discretize, TiesNeverSeparated) {
    std::vector<double> v{3, 1, 3, 3, 2, 9, 3, 1};
    auto b = discretize(v, 4);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[i] == v[j]) EXPECT_EQ(b[i], b[j]);
            if (v[i] < v[j]) EXPECT_LE(b[i], b[j]);
        }
}

TEST(TopK, Examples) {
    std::vector<double> s{0.5, 0.1, 0.9, 0.3, 0.7};
    EXPECT_EQ(top_k(s, 4), (std::vector<std::size_t>{2, 4, 0, 3}));
    EXPECT_EQ(top_k(s, 5), (std::vector<std::size_t>{2, 4, 0, 3, 1}));
}

TEST(SelectKBest, LabelCopyRanksFirst) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 100);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int i = 0; i < 400; ++i) {
        int l = static_cast<int>(rng() & 1U);
        x.push_back({static_cast<double>(l), u(rng), u(rng), u(rng)});
        y.push_back(l);
    }
    auto r = select_k_best(make_dataset(x, y), 2);
    EXPECT_EQ(r.kept_indices.front(), 0u);
    EXPECT_EQ(r.all_scores.size(), 4u);
    EXPECT_NEAR(r.all_scores[0].score, entropy(y), 1e-12);
}

TEST(SelectKBest, RejectsBadK) {
    auto ds = random_dataset(20, 4, 1);
    EXPECT_THROW(select_k_best(ds, 0), InvalidArgument);
    EXPECT_THROW(select_k_best(ds, 5), InvalidArgument);
}
