#include "hmd/error.hpp"
#include "hmd/metrics.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace hmd;
using namespace hmd::testing;

TEST(Confusion, PerfectPredictions) {
    std::vector<int> y{1, 1, 1, 1, 1, 0, 0, 0};
    auto cm = confusion(y, y);
    EXPECT_EQ(cm, (ConfusionMatrix{5, 0, 3, 0}));
}

TEST(Confusion, InvertedPredictions) {
    std::vector<int> y{1, 0, 1, 0}, p{0, 1, 0, 1};
    auto cm = confusion(p, y);
    EXPECT_EQ(cm.tp, 0u);
    EXPECT_EQ(cm.tn, 0u);
    EXPECT_EQ(cm.fp, 2u);
    EXPECT_EQ(cm.fn, 2u);
}

TEST(Confusion, MatchesTallyOracle) {
    std::mt19937_64 rng(9);
    std::vector<int> p(200), a(200);
    for (auto& v : p) v = static_cast<int>(rng() & 1U);
    for (auto& v : a) v = static_cast<int>(rng() & 1U);
    ConfusionMatrix want;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] && a[i]) ++want.tp;
        if (p[i] && !a[i]) ++want.fp;
        if (!p[i] && !a[i]) ++want.tn;
        if (!p[i] && a[i]) ++want.fn;
    }
    EXPECT_EQ(confusion(p, a), want);
}

TEST(Confusion, RejectsBadInput) {
    std::vector<int> a{1, 0}, b{1};
    EXPECT_THROW(confusion(a, b), InvalidArgument);
    EXPECT_THROW(confusion(std::vector<int>{}, std::vector<int>{}), InvalidArgument);
    std::vector<int> c{2, 0};
    EXPECT_THROW(confusion(c, a), InvalidArgument);
}

TEST(Metrics, HandEvaluatedMatrix) {
    ConfusionMatrix cm{3, 1, 5, 1};
    EXPECT_DOUBLE_EQ(accuracy(cm).value, 0.8);
    EXPECT_DOUBLE_EQ(precision(cm).value, 0.75);
    EXPECT_DOUBLE_EQ(recall(cm).value, 0.75);
    EXPECT_DOUBLE_EQ(f1(cm).value, 0.75);
}

TEST(Metrics, PerfectClassifier) {
    ConfusionMatrix cm{10, 0, 7, 0};
    for (auto m : {accuracy(cm), precision(cm), recall(cm), f1(cm)}) {
        EXPECT_EQ(m.value, 1.0);
        EXPECT_FALSE(m.degenerate);
    }
}

TEST(Metrics, ZeroDenominatorsAreFlagged) {
    ConfusionMatrix cm{0, 0, 4, 0};
    EXPECT_TRUE(precision(cm).degenerate);
    EXPECT_EQ(precision(cm).value, 0.0);
    EXPECT_TRUE(recall(cm).degenerate);
    EXPECT_TRUE(f1(cm).degenerate);
    EXPECT_FALSE(accuracy(cm).degenerate);
    EXPECT_TRUE(accuracy(ConfusionMatrix{}).degenerate);
}

TEST(Metrics, F1FromReportedPrecisionRecall) {
    EXPECT_NEAR(f1(0.917, 0.912).value, 0.9145, 0.0005);
}

TEST(Metrics, ExactAgainstRationalOracle) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> u(0, 50);
    for (int i = 0; i < 500; ++i) {
        ConfusionMatrix cm{u(rng), u(rng), u(rng), u(rng)};
        auto want = rational_metrics(cm);
        EXPECT_EQ(accuracy(cm).value, want.accuracy);
        EXPECT_EQ(precision(cm).value, want.precision);
        EXPECT_EQ(recall(cm).value, want.recall);
        EXPECT_EQ(f1(cm).value, want.f1);
    }
}

TEST(Roc, PerfectSeparatorPassesThroughTopLeft) {
    std::vector<double> s{0.9, 0.8, 0.2, 0.1};
    std::vector<int> y{1, 1, 0, 0};
    auto c = roc_curve(s, y);
    EXPECT_NE(std::find(c.points.begin(), c.points.end(), RocPoint{0.0, 1.0}), c.points.end());
    EXPECT_EQ(auc(c), 1.0);
}

TEST(Roc, TiedScoresGiveDiagonal) {
    std::vector<double> s(6, 0.4);
    std::vector<int> y{1, 0, 1, 0, 1, 0};
    auto c = roc_curve(s, y);
    ASSERT_EQ(c.points.size(), 2u);
    EXPECT_EQ(c.points.front(), (RocPoint{0, 0}));
    EXPECT_EQ(c.points.back(), (RocPoint{1, 1}));
    EXPECT_DOUBLE_EQ(auc(c), 0.5);
}

TEST(Roc, PointsMatchThresholdSweep) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> grid(0, 9);
    std::vector<double> s(50);
    std::vector<int> y(50);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = grid(rng) / 10.0;
        y[i] = static_cast<int>(rng() & 1U);
    }
    auto c = roc_curve(s, y);
    ASSERT_EQ(c.points.size(), c.thresholds.size());
    double pos = std::count(y.begin(), y.end(), 1), neg = y.size() - pos;
    for (std::size_t t = 0; t < c.thresholds.size(); ++t) {
        double tp = 0, fp = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] >= c.thresholds[t]) (y[i] ? tp : fp) += 1;
        }
        EXPECT_EQ(c.points[t].tpr, tp / pos);
        EXPECT_EQ(c.points[t].fpr, fp / neg);
    }
    EXPECT_EQ(c.points.back(), (RocPoint{1, 1}));
}

TEST(Roc, AucMatchesMannWhitney) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> grid(0, 20);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> s(50);
        std::vector<int> y(50);
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i] = grid(rng) / 20.0;
            y[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(rng() & 1U);
        }
        EXPECT_NEAR(auc(roc_curve(s, y)), mann_whitney_auc(s, y), 1e-9);
    }
}

TEST(Roc, NoSkillScoresNearHalf) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> s(20000);
    std::vector<int> y(20000);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = u(rng);
        y[i] = static_cast<int>(rng() & 1U);
    }
    EXPECT_NEAR(auc(roc_curve(s, y)), 0.5, 0.05);
}

TEST(Roc, AucInvariantUnderMonotoneTransform) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> s(100), t(100);
    std::vector<int> y(100);
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = u(rng);
        t[i] = std::exp(3.0 * s[i]) + 2.0;
        y[i] = static_cast<int>(rng() & 1U);
    }
    EXPECT_NEAR(auc(roc_curve(s, y)), auc(roc_curve(t, y)), 1e-12);
}

TEST(Roc, SingleClassIsRejected) {
    std::vector<double> s{0.1, 0.2};
    std::vector<int> y{1, 1};
    EXPECT_THROW(roc_curve(s, y), InvalidArgument);
}

TEST(Roc, CsvHeader) {
    std::vector<double> s{0.9, 0.1};
    std::vector<int> y{1, 0};
    auto csv = roc_to_csv(roc_curve(s, y));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "threshold,fpr,tpr");
}
