#include "hmd/dataset.hpp"
#include "hmd/error.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace hmd;
using namespace hmd::testing;

namespace {

const std::string kHeader = "node-loads,dTLB-stores,branch-instructions,cyclesct,label,family\n";

std::size_t parse_error_line(const std::string& text) {
    try {
        parse_csv_text(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

Dataset small_benchmark(std::size_t per_family = 20, std::size_t benign = 50) {
    return generate_synthetic(with_counts(default_generator_config(), per_family, benign));
}

}  // namespace

TEST(Csv, SingleMalwareRow) {
    auto ds = parse_csv_text(kHeader + "10,20,30,40,1,trojan\n");
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds[0].features, (std::vector<double>{10, 20, 30, 40}));
    EXPECT_EQ(ds[0].label, Label::malware);
    EXPECT_EQ(ds[0].family, Family::trojan);
}

TEST(Csv, ErrorsCiteTheLine) {
    EXPECT_EQ(parse_error_line(kHeader + "1,2,3,4,0,none\n1,2,3,4,2,none\n"), 3u);
    EXPECT_EQ(parse_error_line(kHeader + "1,2,3,0,none\n"), 2u);
    EXPECT_EQ(parse_error_line(kHeader + "1,x,3,4,0,none\n"), 2u);
    EXPECT_EQ(parse_error_line(kHeader + "1,-2,3,4,0,none\n"), 2u);
    EXPECT_EQ(parse_error_line(kHeader + "1,2,3,4,1,gremlin\n"), 2u);
    EXPECT_EQ(parse_error_line(kHeader + "1,2,3,4,0,worm\n"), 2u);
}

TEST(Csv, EmptyInputs) {
    EXPECT_THROW(parse_csv_text(""), EmptyDatasetError);
    EXPECT_THROW(parse_csv_text(kHeader), EmptyDatasetError);
}

TEST(Csv, WithoutFamilyColumn) {
    auto ds = parse_csv_text("a,b,label\n1,2,0\n3,4,1\n");
    EXPECT_EQ(ds.feature_names(), (std::vector<std::string>{"a", "b"}));
    EXPECT_FALSE(ds[1].family.has_value());
}

TEST(Csv, RoundTrip) {
    auto ds = small_benchmark(3, 5);
    EXPECT_EQ(parse_csv_text(to_csv(ds)).samples(), ds.samples());
    auto text = to_csv(ds);
    EXPECT_EQ(to_csv(parse_csv_text(text)), text);
}

TEST(Csv, FileRoundTrip) {
    auto dir = temp_dir("dataset_csv");
    auto ds = small_benchmark(2, 4);
    write_csv(ds, dir / "d.csv");
    EXPECT_EQ(parse_csv(dir / "d.csv").samples(), ds.samples());
    EXPECT_THROW(parse_csv(dir / "missing.csv"), DataError);
}

TEST(Dataset, RejectsInconsistentSamples) {
    auto names = default_feature_names();
    EXPECT_THROW(Dataset(names, {{{1, 2, 3}, Label::benign, std::nullopt}}), DataError);
    EXPECT_THROW(Dataset(names, {{{1, 2, 3, std::nan("")}, Label::benign, std::nullopt}}), DataError);
    EXPECT_THROW(Dataset(names, {{{1, 2, 3, 4}, Label::benign, Family::worm}}), DataError);
}

TEST(Dataset, SelectAndSubset) {
    auto ds = make_dataset({{1, 2, 3, 4}, {5, 6, 7, 8}}, {0, 1});
    std::vector<std::size_t> cols{3, 0};
    auto s = ds.select_features(cols);
    EXPECT_EQ(s.feature_names(), (std::vector<std::string>{"cyclesct", "node-loads"}));
    EXPECT_EQ(s[1].features, (std::vector<double>{8, 5}));
    std::vector<std::size_t> rows{1, 1};
    EXPECT_EQ(ds.subset(rows).count(Label::malware), 2u);
}

TEST(Split, DefaultProtocolIsDisjoint) {
    auto ds = small_benchmark();
    auto sp = zero_day_split(ds, {});
    EXPECT_EQ(sp.train_families.size(), 5u);
    EXPECT_EQ(sp.test_families.size(), 4u);
    for (auto f : sp.train_families) EXPECT_FALSE(sp.test_families.contains(f));
    for (const auto& s : sp.train.samples())
        if (s.family) EXPECT_TRUE(s.family == Family::none || sp.train_families.contains(*s.family));
    for (const auto& s : sp.test.samples())
        if (s.family && s.label == Label::malware) EXPECT_TRUE(sp.test_families.contains(*s.family));
    EXPECT_EQ(sp.train.count(Label::malware), 5u * 20);
    EXPECT_EQ(sp.test.count(Label::malware), 4u * 20);
    EXPECT_EQ(sp.train.count(Label::benign), 40u);
    EXPECT_EQ(sp.test.count(Label::benign), 10u);
}

TEST(Split, DeterministicPerSeed) {
    auto ds = small_benchmark();
    auto a = zero_day_split(ds, {});
    auto b = zero_day_split(ds, {});
    EXPECT_EQ(a.train, b.train);
    SplitProtocol other;
    other.seed = 99;
    EXPECT_NE(zero_day_split(ds, other).train, a.train);
}

TEST(Split, SharedFamilyIsProtocolError) {
    SplitProtocol p;
    p.train_families.insert(Family::trojan);
    EXPECT_THROW(zero_day_split(small_benchmark(), p), ProtocolError);
}

TEST(Split, MissingFamilyNamed) {
    auto cfg = with_counts(default_generator_config(), 10, 20);
    cfg.families.erase(Family::ransomware);
    auto ds = generate_synthetic(cfg);
    try {
        zero_day_split(ds, {});
        FAIL() << "expected MissingFamilyError";
    } catch (const MissingFamilyError& e) {
        EXPECT_EQ(e.family(), "ransomware");
        EXPECT_NE(std::string(e.what()).find("ransomware"), std::string::npos);
    }
}

TEST(Split, BadRatio) {
    SplitProtocol p;
    p.benign_ratio = 1.0;
    EXPECT_THROW(zero_day_split(small_benchmark(), p), ConfigError);
}

TEST(Generator, Deterministic) {
    auto cfg = with_counts(default_generator_config(), 30, 40);
    EXPECT_EQ(generate_synthetic(cfg), generate_synthetic(cfg));
}

TEST(Generator, ZeroCounts) {
    EXPECT_TRUE(generate_synthetic(with_counts(default_generator_config(), 0, 0)).empty());
}

TEST(Generator, Counts) {
    auto cfg = with_counts(default_generator_config(), 100, 900);
    cfg.seed = 42;
    auto ds = generate_synthetic(cfg);
    EXPECT_EQ(ds.size(), 1800u);
    EXPECT_EQ(ds.count(Label::malware), 900u);
    EXPECT_EQ(ds.provenance(), Provenance::synthetic);
}

TEST(Generator, DefaultSizes) {
    auto ds = generate_synthetic(default_generator_config());
    EXPECT_EQ(ds.size(), 7200u);
    for (const auto& s : ds.samples())
        for (double v : s.features) EXPECT_TRUE(v >= 0 && v == std::round(v));
}

TEST(Scaling, Endpoints) {
    auto ds = make_dataset({{0, 7}, {5, 7}, {10, 7}}, {0, 1, 0});
    auto p = fit_scaling(ds);
    auto s = apply_scaling(ds, p);
    EXPECT_EQ(s.column(0), (std::vector<double>{0, 0.5, 1}));
    EXPECT_EQ(s.column(1), (std::vector<double>{0, 0, 0}));
    std::vector<double> above{20, 7};
    EXPECT_GT(apply_scaling(above, p)[0], 1.0);
}

TEST(Scaling, EmptyRejected) {
    EXPECT_THROW(fit_scaling(Dataset{}), EmptyDatasetError);
}
