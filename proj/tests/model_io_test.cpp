#include "hmd/error.hpp"
#include "hmd/model_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace hmd;
using namespace hmd::testing;

class RoundTrip : public ::testing::TestWithParam<ModelType> {};

TEST_P(RoundTrip, FilePreservesPredictionsBitExactly) {
    auto raw = random_dataset(80, 4, 1, 1000);
    auto scaling = fit_scaling(raw);
    auto model = train_model(GetParam(), apply_scaling(raw, scaling));
    ModelFile mf{kModelFormatVersion, raw.feature_names(), scaling, model};
    auto path = temp_dir("model_io") / (std::string(to_string(GetParam())) + ".json");
    save_model(mf, path);
    auto back = load_model(path);
    EXPECT_EQ(back.model, model);
    EXPECT_EQ(back.scaling, scaling);
    EXPECT_EQ(back.feature_names, raw.feature_names());
    auto probes = random_dataset(50, 4, 2, 1200);
    for (const auto& s : probes.samples()) {
        auto a = mf.predict_raw(s.features), b = back.predict_raw(s.features);
        EXPECT_EQ(a.label, b.label);
        EXPECT_EQ(a.score, b.score);
    }
}

INSTANTIATE_TEST_SUITE_P(All, RoundTrip, ::testing::ValuesIn(all_model_types()),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(ModelJson, InfinityStoredAsString) {
    auto ds = make_dataset({{1}, {2}, {3}, {4}}, {0, 0, 1, 1});
    auto j = model_to_json(train_model(ModelType::many_rules_oner, ds));
    EXPECT_NE(j.dump().find("\"inf\""), std::string::npos);
    EXPECT_EQ(model_from_json(j), train_model(ModelType::many_rules_oner, ds));
}

TEST(ModelJson, MalformedIsDataError) {
    EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"type":"svm"})")), DataError);
    EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"type":"forest"})")), DataError);
    EXPECT_THROW(model_file_from_json(nlohmann::json::parse(R"([1,2])")), DataError);
}

TEST(GeneratorJson, RoundTrip) {
    auto cfg = with_counts(default_generator_config(), 7, 9);
    cfg.seed = 123;
    auto back = generator_config_from_json(to_json(cfg));
    EXPECT_EQ(generate_synthetic(back), generate_synthetic(cfg));
}

TEST(CostTableJson, PartialOverlay) {
    auto t = cost_table_from_json(nlohmann::json::parse(R"({"clock_period_ns": 10, "costs": {"multiply": {"cycles": 5}}})"));
    EXPECT_EQ(t.clock_period_ns, 10.0);
    EXPECT_EQ(t[Primitive::multiply].cycles, 5u);
    EXPECT_EQ(t[Primitive::multiply].dsp, CostTable::default_table()[Primitive::multiply].dsp);
    EXPECT_EQ(cost_table_from_json(to_json(CostTable::unit())), CostTable::unit());
    EXPECT_THROW(cost_table_from_json(nlohmann::json::parse(R"({"costs": {"add": {"cycles": -1}}})")), ConfigError);
}

TEST(JsonFile, InvalidJsonIsConfigError) {
    auto dir = temp_dir("json_file");
    write_text_file(dir / "bad.json", "{not json");
    EXPECT_THROW(read_json_file(dir / "bad.json"), ConfigError);
    EXPECT_THROW(read_json_file(dir / "absent.json"), DataError);
}
