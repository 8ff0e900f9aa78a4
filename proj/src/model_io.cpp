#include "hmd/model_io.hpp"

#include "hmd/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <type_traits>

namespace hmd {

using nlohmann::json;

namespace {

// JSON has no infinities; they travel as the strings "inf" / "-inf".
json num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double get_num(const json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw DataError("expected a number, got '" + s + "'");
    }
    if (!j.is_number()) throw DataError("expected a number");
    return j.get<double>();
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
    return j.at(key);
}

template <typename T>
T get(const json& j, const char* key) {
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!field(j, key).is_number_unsigned())
            throw DataError(std::string("field '") + key + "' must be a non-negative integer");
    }
    try {
        return field(j, key).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return get<T>(j, key);
}

json label_json(Label l) { return to_int(l); }
Label get_label(const json& j) { return label_from_int(j.get<int>()); }

json tree_json(const TreeModel& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
        json jn{{"counts", {n.class_counts[0], n.class_counts[1]}}, {"label", label_json(n.label)}};
        if (!n.leaf) {
            jn["feature"] = n.feature;
            jn["threshold"] = n.threshold;
            jn["left"] = n.left;
            jn["right"] = n.right;
        }
        nodes.push_back(std::move(jn));
    }
    return {{"features", t.features}, {"nodes", std::move(nodes)}};
}

TreeModel tree_from(const json& j) {
    TreeModel t;
    t.features = get<std::size_t>(j, "features");
    for (const auto& jn : field(j, "nodes")) {
        TreeNode n;
        auto counts = get<std::vector<std::size_t>>(jn, "counts");
        if (counts.size() != 2) throw DataError("tree node counts must have two entries");
        n.class_counts = {counts[0], counts[1]};
        n.label = get_label(field(jn, "label"));
        n.leaf = !jn.contains("feature");
        if (!n.leaf) {
            n.feature = get<std::size_t>(jn, "feature");
            n.threshold = get_num(field(jn, "threshold"));
            n.left = get<std::size_t>(jn, "left");
            n.right = get<std::size_t>(jn, "right");
        }
        t.nodes.push_back(n);
    }
    for (const auto& n : t.nodes)
        if (!n.leaf && (n.left >= t.nodes.size() || n.right >= t.nodes.size() || n.feature >= t.features))
            throw DataError("tree node references are out of range");
    if (t.nodes.empty()) throw DataError("tree has no nodes");
    return t;
}

json dist_json(const CounterDistribution& d) {
    json j{{"mu", d.mu}, {"sigma", d.sigma}};
    if (!d.zero_prob.empty()) j["zero_prob"] = d.zero_prob;
    return j;
}

CounterDistribution dist_from(const json& j) {
    return {get<std::vector<double>>(j, "mu"), get<std::vector<double>>(j, "sigma"),
            get_or<std::vector<double>>(j, "zero_prob", {})};
}

}  // namespace

json model_to_json(const TrainedModel& model) {
    json p;
    switch (model.type()) {
        case ModelType::knn: {
            const auto& m = model.as<KnnModel>();
            std::vector<int> labels;
            for (auto l : m.labels) labels.push_back(to_int(l));
            p = {{"k", m.k},
                 {"metric", m.metric == DistanceMetric::euclidean ? "euclidean" : "manhattan"},
                 {"points", m.points},
                 {"labels", labels}};
            break;
        }
        case ModelType::mlp: {
            const auto& m = model.as<MlpModel>();
            p = {{"inputs", m.inputs},
                 {"hidden", m.hidden},
                 {"hidden_weights", m.hidden_weights},
                 {"output_weights", m.output_weights},
                 {"learning_rate", m.params.learning_rate},
                 {"max_epochs", m.params.max_epochs},
                 {"target_rmse", m.params.target_rmse},
                 {"seed", m.params.seed},
                 {"final_rmse", m.final_rmse},
                 {"epochs_run", m.epochs_run}};
            break;
        }
        case ModelType::decision_tree: p = tree_json(model.as<TreeModel>()); break;
        case ModelType::bagged_trees: {
            const auto& m = model.as<BaggedModel>();
            json trees = json::array();
            for (const auto& t : m.trees) trees.push_back(tree_json(t));
            p = {{"seed", m.seed}, {"bootstrap", m.bootstrap}, {"trees", std::move(trees)}};
            break;
        }
        case ModelType::svm:
        case ModelType::logistic_regression: {
            const auto& m = model.as<LinearModel>();
            p = {{"w", m.w}, {"b", m.b}, {"loss_history", m.loss_history}};
            break;
        }
        case ModelType::oner:
        case ModelType::many_rules_oner: {
            const auto& m = model.as<RuleListModel>();
            json base = json::array(), intervals = json::array();
            for (const auto& bc : m.base_cases)
                base.push_back({{"value", num(bc.value)}, {"label", label_json(bc.label)}, {"support", bc.support}});
            for (const auto& r : m.intervals)
                intervals.push_back({{"lower", num(r.lower)},
                                     {"upper", num(r.upper)},
                                     {"label", label_json(r.label)},
                                     {"support", r.support},
                                     {"purity", r.purity}});
            p = {{"features", m.features},
                 {"feature", m.feature},
                 {"base_cases", std::move(base)},
                 {"intervals", std::move(intervals)},
                 {"default_label", label_json(m.default_label)},
                 {"feature_accuracy", m.feature_accuracy}};
            break;
        }
    }
    return {{"model_type", std::string(to_string(model.type()))}, {"params", std::move(p)}};
}

TrainedModel model_from_json(const json& j) {
    auto name = get<std::string>(j, "model_type");
    auto type = model_type_from_string(name);
    if (!type) throw DataError("unknown model type '" + name + "'");
    const json& p = field(j, "params");
    try {
        switch (*type) {
            case ModelType::knn: {
                KnnModel m;
                m.k = get<std::size_t>(p, "k");
                auto metric = get<std::string>(p, "metric");
                if (metric != "euclidean" && metric != "manhattan") throw DataError("unknown metric '" + metric + "'");
                m.metric = metric == "euclidean" ? DistanceMetric::euclidean : DistanceMetric::manhattan;
                m.points = get<std::vector<std::vector<double>>>(p, "points");
                for (int l : get<std::vector<int>>(p, "labels")) m.labels.push_back(label_from_int(l));
                if (m.points.size() != m.labels.size() || m.points.empty())
                    throw DataError("knn points and labels disagree");
                for (const auto& pt : m.points)
                    if (pt.size() != m.points.front().size()) throw DataError("knn points differ in length");
                return {*type, std::move(m)};
            }
            case ModelType::mlp: {
                MlpModel m;
                m.inputs = get<std::size_t>(p, "inputs");
                m.hidden = get<std::size_t>(p, "hidden");
                m.hidden_weights = get<std::vector<double>>(p, "hidden_weights");
                m.output_weights = get<std::vector<double>>(p, "output_weights");
                m.params.hidden = m.hidden;
                m.params.learning_rate = get<double>(p, "learning_rate");
                m.params.max_epochs = get<std::size_t>(p, "max_epochs");
                m.params.target_rmse = get<double>(p, "target_rmse");
                m.params.seed = get<std::uint64_t>(p, "seed");
                m.final_rmse = get<double>(p, "final_rmse");
                m.epochs_run = get<std::size_t>(p, "epochs_run");
                if (m.hidden_weights.size() != m.hidden * (m.inputs + 1) || m.output_weights.size() != m.hidden + 1)
                    throw DataError("mlp weight arrays do not match the topology");
                return {*type, std::move(m)};
            }
            case ModelType::decision_tree: return {*type, tree_from(p)};
            case ModelType::bagged_trees: {
                BaggedModel m;
                m.seed = get<std::uint64_t>(p, "seed");
                m.bootstrap = get<bool>(p, "bootstrap");
                for (const auto& t : field(p, "trees")) m.trees.push_back(tree_from(t));
                if (m.trees.empty()) throw DataError("ensemble has no trees");
                return {*type, std::move(m)};
            }
            case ModelType::svm:
            case ModelType::logistic_regression: {
                LinearModel m;
                m.kind = *type == ModelType::svm ? LinearKind::svm : LinearKind::logistic;
                m.w = get<std::vector<double>>(p, "w");
                m.b = get<double>(p, "b");
                m.loss_history = get<std::vector<double>>(p, "loss_history");
                return {*type, std::move(m)};
            }
            case ModelType::oner:
            case ModelType::many_rules_oner: {
                RuleListModel m;
                m.kind = *type == ModelType::oner ? RuleKind::classic : RuleKind::many;
                m.features = get<std::size_t>(p, "features");
                m.feature = get<std::size_t>(p, "feature");
                for (const auto& bc : field(p, "base_cases"))
                    m.base_cases.push_back({get_num(field(bc, "value")), get_label(field(bc, "label")),
                                            get<std::size_t>(bc, "support")});
                for (const auto& r : field(p, "intervals"))
                    m.intervals.push_back({m.feature, get_num(field(r, "lower")), get_num(field(r, "upper")),
                                           get_label(field(r, "label")), get<std::size_t>(r, "support"),
                                           get<double>(r, "purity")});
                m.default_label = get_label(field(p, "default_label"));
                m.feature_accuracy = get<std::vector<double>>(p, "feature_accuracy");
                if (m.intervals.empty() || m.feature >= m.features) throw DataError("malformed rule list");
                return {*type, std::move(m)};
            }
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model parameters: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("malformed model parameters: ") + e.what());
    }
    throw DataError("unknown model type");
}

Prediction ModelFile::predict_raw(std::span<const double> raw) const {
    check_dimension(feature_names.size(), raw.size());
    return predict(model, apply_scaling(raw, scaling));
}

json to_json(const ModelFile& f) {
    json j = model_to_json(f.model);
    j["format_version"] = f.format_version;
    j["feature_names"] = f.feature_names;
    j["scaling"] = {{"min", f.scaling.min}, {"max", f.scaling.max}};
    return j;
}

ModelFile model_file_from_json(const json& j) {
    int version = get<int>(j, "format_version");
    if (version != kModelFormatVersion)
        throw DataError("unsupported model format version " + std::to_string(version));
    auto names = get<std::vector<std::string>>(j, "feature_names");
    const json& s = field(j, "scaling");
    ScalingParams scaling{get<std::vector<double>>(s, "min"), get<std::vector<double>>(s, "max")};
    TrainedModel model = model_from_json(j);
    if (scaling.min.size() != names.size() || scaling.max.size() != names.size() ||
        model.feature_count() != names.size())
        throw DataError("model file feature count is inconsistent");
    return ModelFile{version, std::move(names), std::move(scaling), std::move(model)};
}

void save_model(const ModelFile& f, const std::filesystem::path& path) {
    write_text_file(path, to_json(f).dump(2) + "\n");
}

ModelFile load_model(const std::filesystem::path& path) { return model_file_from_json(read_json_file(path)); }

json to_json(const GeneratorConfig& cfg) {
    json fams = json::object();
    for (const auto& [f, spec] : cfg.families) {
        json d = dist_json(spec.dist);
        d["count"] = spec.count;
        fams[std::string(to_string(f))] = std::move(d);
    }
    return {{"seed", cfg.seed},
            {"benign_count", cfg.benign_count},
            {"benign", dist_json(cfg.benign)},
            {"families", std::move(fams)},
            {"feature_names", cfg.feature_names}};
}

GeneratorConfig generator_config_from_json(const json& j) {
    GeneratorConfig cfg;
    try {
        cfg.seed = get<std::uint64_t>(j, "seed");
        cfg.benign_count = get<std::size_t>(j, "benign_count");
        cfg.benign = dist_from(field(j, "benign"));
        cfg.feature_names = get_or<std::vector<std::string>>(j, "feature_names", default_feature_names());
        for (const auto& [name, spec] : field(j, "families").items()) {
            auto fam = family_from_string(name);
            if (!fam || *fam == Family::none) throw ConfigError("unknown malware family '" + name + "'");
            cfg.families[*fam] = FamilySpec{get<std::size_t>(spec, "count"), dist_from(spec)};
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const DataError& e) {
        throw ConfigError(std::string("generator config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

json to_json(const CostTable& t) {
    json costs = json::object();
    for (std::size_t i = 0; i < kPrimitiveCount; ++i) {
        const auto& c = t.costs[i];
        costs[std::string(to_string(static_cast<Primitive>(i)))] = {
            {"cycles", c.cycles}, {"bram", c.bram}, {"dsp", c.dsp}, {"ff", c.ff}, {"lut", c.lut}};
    }
    return {{"clock_period_ns", t.clock_period_ns}, {"costs", std::move(costs)}};
}

CostTable cost_table_from_json(const json& j) {
    CostTable t = CostTable::default_table();
    try {
        t.clock_period_ns = get_or<double>(j, "clock_period_ns", t.clock_period_ns);
        if (j.contains("costs")) {
            for (const auto& [name, c] : j.at("costs").items()) {
                std::size_t i = 0;
                while (i < kPrimitiveCount && to_string(static_cast<Primitive>(i)) != name) ++i;
                if (i == kPrimitiveCount) throw ConfigError("unknown primitive '" + name + "'");
                auto& e = t.costs[i];
                e.cycles = get_or<std::uint64_t>(c, "cycles", e.cycles);
                e.bram = get_or<std::uint64_t>(c, "bram", e.bram);
                e.dsp = get_or<std::uint64_t>(c, "dsp", e.dsp);
                e.ff = get_or<std::uint64_t>(c, "ff", e.ff);
                e.lut = get_or<std::uint64_t>(c, "lut", e.lut);
            }
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const DataError& e) {
        throw ConfigError(std::string("cost table: ") + e.what());
    }
    validate(t);
    return t;
}

json to_json(const CostReport& r) {
    return {{"latency_cycles", r.latency_cycles}, {"latency_ns", r.latency_ns}, {"interval_cycles", r.interval_cycles},
            {"bram", r.bram}, {"dsp", r.dsp}, {"ff", r.ff}, {"lut", r.lut}, {"rme", r.rme}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace hmd
