#include "hmd/experiment.hpp"

#include "hmd/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace hmd {

using nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (!j.is_object() || !j.contains(key)) return;
    const auto& v = j.at(key);
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_unsigned()) throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    }
    try {
        out = v.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("'") + key + "': " + e.what());
    }
}

std::set<Family> families_from(const json& j, const char* key) {
    std::set<Family> out;
    for (const auto& name : j.at(key)) {
        if (!name.is_string()) throw ConfigError(std::string("'") + key + "' must list family names");
        auto f = family_from_string(name.get<std::string>());
        if (!f || *f == Family::none) throw ConfigError("unknown malware family '" + name.get<std::string>() + "'");
        out.insert(*f);
    }
    return out;
}

json family_names(const std::set<Family>& fams) {
    json out = json::array();
    for (auto f : fams) out.push_back(std::string(to_string(f)));
    return out;
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DataError& e) {
        throw DataError(std::string("[") + name + "] " + e.what());
    } catch (const std::exception& e) {
        throw Error(std::string("[") + name + "] " + e.what());
    }
}

std::string fixed4(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.4f", v);
    return buf.data();
}

}  // namespace

std::string format_exact(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

ModelParams model_params_from_json(const json& m, ModelParams p) {
    if (!m.is_object()) throw ConfigError("'models' must be an object");
    if (m.contains("knn")) {
        const auto& j = m.at("knn");
        read_opt(j, "k", p.knn.k);
        std::string metric = p.knn.metric == DistanceMetric::euclidean ? "euclidean" : "manhattan";
        read_opt(j, "metric", metric);
        if (metric == "euclidean") p.knn.metric = DistanceMetric::euclidean;
        else if (metric == "manhattan") p.knn.metric = DistanceMetric::manhattan;
        else throw ConfigError("unknown knn metric '" + metric + "'");
    }
    if (m.contains("mlp")) {
        const auto& j = m.at("mlp");
        read_opt(j, "hidden", p.mlp.hidden);
        read_opt(j, "learning_rate", p.mlp.learning_rate);
        read_opt(j, "max_epochs", p.mlp.max_epochs);
        read_opt(j, "target_rmse", p.mlp.target_rmse);
        read_opt(j, "seed", p.mlp.seed);
    }
    if (m.contains("decision_tree")) {
        const auto& j = m.at("decision_tree");
        read_opt(j, "max_depth", p.tree.max_depth);
        read_opt(j, "min_leaf", p.tree.min_leaf);
    }
    if (m.contains("bagged_trees")) {
        const auto& j = m.at("bagged_trees");
        read_opt(j, "trees", p.bagging.trees);
        read_opt(j, "max_depth", p.bagging.tree.max_depth);
        read_opt(j, "min_leaf", p.bagging.tree.min_leaf);
        read_opt(j, "seed", p.bagging.seed);
        read_opt(j, "bootstrap", p.bagging.bootstrap);
    }
    if (m.contains("svm")) {
        const auto& j = m.at("svm");
        read_opt(j, "c", p.svm.c);
        read_opt(j, "learning_rate", p.svm.learning_rate);
        read_opt(j, "epochs", p.svm.epochs);
        read_opt(j, "seed", p.svm.seed);
    }
    if (m.contains("logistic_regression")) {
        const auto& j = m.at("logistic_regression");
        read_opt(j, "learning_rate", p.logistic.learning_rate);
        read_opt(j, "epochs", p.logistic.epochs);
        read_opt(j, "seed", p.logistic.seed);
    }
    if (m.contains("oner")) read_opt(m.at("oner"), "bins", p.oner_bins);
    return p;
}

ExperimentConfig experiment_config_from_json(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    ExperimentConfig cfg;
    if (j.contains("dataset")) {
        const auto& d = j.at("dataset");
        if (d.contains("csv")) {
            std::filesystem::path p = d.at("csv").get<std::string>();
            cfg.dataset_csv = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        } else if (d.contains("generator")) {
            cfg.generator = generator_config_from_json(d.at("generator"));
        } else {
            throw ConfigError("'dataset' needs either 'csv' or 'generator'");
        }
    }
    if (j.contains("split")) {
        const auto& s = j.at("split");
        if (s.contains("train_families")) cfg.split.train_families = families_from(s, "train_families");
        if (s.contains("test_families")) cfg.split.test_families = families_from(s, "test_families");
        read_opt(s, "benign_ratio", cfg.split.benign_ratio);
        read_opt(s, "seed", cfg.split.seed);
    }
    if (j.contains("selection")) {
        read_opt(j.at("selection"), "k", cfg.select_k);
        read_opt(j.at("selection"), "bins", cfg.select_bins);
    }
    if (j.contains("models")) {
        const auto& m = j.at("models");
        cfg.params = model_params_from_json(m, cfg.params);
        if (m.contains("order")) {
            cfg.models.clear();
            for (const auto& name : m.at("order")) {
                auto t = model_type_from_string(name.get<std::string>());
                if (!t) throw ConfigError("unknown model type '" + name.get<std::string>() + "'");
                cfg.models.push_back(*t);
            }
        }
    }
    if (j.contains("cost_table")) cfg.cost_table = cost_table_from_json(j.at("cost_table"));
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
}

json to_json(const ExperimentConfig& cfg) {
    json models{
        {"knn", {{"k", cfg.params.knn.k},
                 {"metric", cfg.params.knn.metric == DistanceMetric::euclidean ? "euclidean" : "manhattan"}}},
        {"mlp", {{"hidden", cfg.params.mlp.hidden},
                 {"learning_rate", cfg.params.mlp.learning_rate},
                 {"max_epochs", cfg.params.mlp.max_epochs},
                 {"target_rmse", cfg.params.mlp.target_rmse},
                 {"seed", cfg.params.mlp.seed}}},
        {"decision_tree", {{"max_depth", cfg.params.tree.max_depth}, {"min_leaf", cfg.params.tree.min_leaf}}},
        {"bagged_trees", {{"trees", cfg.params.bagging.trees},
                          {"max_depth", cfg.params.bagging.tree.max_depth},
                          {"min_leaf", cfg.params.bagging.tree.min_leaf},
                          {"seed", cfg.params.bagging.seed},
                          {"bootstrap", cfg.params.bagging.bootstrap}}},
        {"svm", {{"c", cfg.params.svm.c},
                 {"learning_rate", cfg.params.svm.learning_rate},
                 {"epochs", cfg.params.svm.epochs},
                 {"seed", cfg.params.svm.seed}}},
        {"logistic_regression", {{"learning_rate", cfg.params.logistic.learning_rate},
                                 {"epochs", cfg.params.logistic.epochs},
                                 {"seed", cfg.params.logistic.seed}}},
        {"oner", {{"bins", cfg.params.oner_bins}}},
    };
    json order = json::array();
    for (auto t : cfg.models) order.push_back(std::string(to_string(t)));
    models["order"] = std::move(order);

    json dataset = cfg.dataset_csv ? json{{"csv", cfg.dataset_csv->string()}}
                                   : json{{"generator", to_json(cfg.generator)}};
    return {{"dataset", std::move(dataset)},
            {"split", {{"train_families", family_names(cfg.split.train_families)},
                       {"test_families", family_names(cfg.split.test_families)},
                       {"benign_ratio", cfg.split.benign_ratio},
                       {"seed", cfg.split.seed}}},
            {"selection", {{"k", cfg.select_k}, {"bins", cfg.select_bins}}},
            {"models", std::move(models)},
            {"cost_table", to_json(cfg.cost_table)},
            {"output_dir", cfg.output_dir.string()}};
}

void override_seed(ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.generator.seed = seed;
    cfg.split.seed = seed;
}

Dataset load_dataset(const ExperimentConfig& cfg) {
    return cfg.dataset_csv ? parse_csv(*cfg.dataset_csv) : generate_synthetic(cfg.generator);
}

ReportResult run_report(const ExperimentConfig& cfg) {
    ReportResult r;
    Dataset raw = stage("dataset", [&] { return load_dataset(cfg); });
    r.raw_feature_names = raw.feature_names();
    SplitPair split = stage("split", [&] { return zero_day_split(raw, cfg.split); });

    r.selection = stage("select", [&] { return select_k_best(split.train, cfg.select_k, cfg.select_bins); });
    r.projected_indices = r.selection.kept_indices;
    std::sort(r.projected_indices.begin(), r.projected_indices.end());
    r.split = SplitPair{split.train.select_features(r.projected_indices),
                        split.test.select_features(r.projected_indices), split.train_families,
                        split.test_families};

    r.scaling = stage("scale", [&] { return fit_scaling(r.split.train); });
    Dataset train = apply_scaling(r.split.train, r.scaling);
    Dataset test = apply_scaling(r.split.test, r.scaling);
    auto actual = test.labels();

    for (ModelType type : cfg.models) {
        std::string name = "train:" + std::string(to_string(type));
        TrainedModel model = stage(name.c_str(), [&] { return train_model(type, train, cfg.params); });

        name = "evaluate:" + std::string(to_string(type));
        ModelResult res = stage(name.c_str(), [&] {
            auto preds = predict_all(model, test);
            std::vector<int> labels;
            std::vector<double> scores;
            for (const auto& p : preds) {
                labels.push_back(to_int(p.label));
                scores.push_back(p.score);
            }
            ModelResult m{type, confusion(labels, actual), {}, {}, {}, {}, 0.0, {}, {},
                          ModelFile{kModelFormatVersion, train.feature_names(), r.scaling, model}};
            m.accuracy = accuracy(m.cm);
            m.precision = precision(m.cm);
            m.recall = recall(m.cm);
            // The table's f1 is derived from its own precision and recall columns.
            m.f1 = f1(m.precision.value, m.recall.value);
            m.f1.degenerate = m.f1.degenerate || m.precision.degenerate || m.recall.degenerate;
            m.roc = roc_curve(scores, actual);
            m.auc = auc(m.roc);
            m.cost = estimate_cost(model, cfg.cost_table);
            return m;
        });
        r.models.push_back(std::move(res));
    }
    return r;
}

std::string metrics_csv(const ReportResult& r) {
    std::ostringstream out;
    out << "model,accuracy,precision,recall,f1,auc,tp,fp,tn,fn\n";
    for (const auto& m : r.models)
        out << to_string(m.type) << ',' << format_exact(m.accuracy.value) << ',' << format_exact(m.precision.value)
            << ',' << format_exact(m.recall.value) << ',' << format_exact(m.f1.value) << ','
            << format_exact(m.auc) << ',' << m.cm.tp << ',' << m.cm.fp << ',' << m.cm.tn << ',' << m.cm.fn << '\n';
    return out.str();
}

std::string metrics_table(const ReportResult& r) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %9s %9s %9s %9s %9s\n", "model", "accuracy", "precision", "recall",
                  "f1", "auc");
    out << line;
    for (const auto& m : r.models) {
        std::snprintf(line, sizeof line, "%-20s %9s %9s %9s %9s %9s\n", std::string(to_string(m.type)).c_str(),
                      fixed4(m.accuracy.value).c_str(), fixed4(m.precision.value).c_str(),
                      fixed4(m.recall.value).c_str(), fixed4(m.f1.value).c_str(), fixed4(m.auc).c_str());
        out << line;
    }
    return out.str();
}

std::string selection_csv(const SelectionResult& s, const std::vector<std::string>& names) {
    auto scores = s.all_scores;
    std::stable_sort(scores.begin(), scores.end(),
                     [](const FeatureScore& a, const FeatureScore& b) { return a.score > b.score; });
    std::ostringstream out;
    out << "feature_name,score_bits\n";
    for (const auto& fs : scores) out << names.at(fs.feature_index) << ',' << format_exact(fs.score) << '\n';
    return out.str();
}

void write_report(const ReportResult& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "roc");
    std::filesystem::create_directories(dir / "models");
    write_text_file(dir / "metrics.csv", metrics_csv(r));
    write_text_file(dir / "metrics.txt", metrics_table(r));
    write_text_file(dir / "selection.csv", selection_csv(r.selection, r.raw_feature_names));

    std::vector<NamedCost> costs;
    json cost_json = json::object();
    for (const auto& m : r.models) {
        std::string name(to_string(m.type));
        write_text_file(dir / "roc" / (name + ".csv"), roc_to_csv(m.roc));
        save_model(m.model_file, dir / "models" / (name + ".json"));
        costs.emplace_back(name, m.cost);
        cost_json[name] = to_json(m.cost);
    }
    write_text_file(dir / "cost.csv", cost_csv(costs));
    write_text_file(dir / "cost.json", cost_json.dump(2) + "\n");
    std::ostringstream ranking;
    ranking << "rank,model,rme,latency_cycles\n";
    std::size_t rank = 1;
    for (const auto& [name, c] : rank_models(costs))
        ranking << rank++ << ',' << name << ',' << c.rme << ',' << c.latency_cycles << '\n';
    write_text_file(dir / "cost_ranking.csv", ranking.str());

    json summary{{"train_size", r.split.train.size()},
                 {"test_size", r.split.test.size()},
                 {"train_families", family_names(r.split.train_families)},
                 {"test_families", family_names(r.split.test_families)},
                 {"selected_features", r.split.train.feature_names()}};
    const ModelResult* tree = nullptr;
    const ModelResult* bagged = nullptr;
    for (const auto& m : r.models) {
        if (m.type == ModelType::decision_tree) tree = &m;
        if (m.type == ModelType::bagged_trees) bagged = &m;
        if (m.type == ModelType::many_rules_oner) {
            const auto& rules = m.model_file.model.as<RuleListModel>();
            summary["many_rules_rule_count"] = rules.rule_count();
            summary["many_rules_feature"] = r.split.train.feature_names().at(rules.feature);
        }
    }
    // Observation only: bagging is not guaranteed to beat the single tree.
    if (tree && bagged)
        summary["bagged_minus_tree_accuracy"] = bagged->accuracy.value - tree->accuracy.value;
    write_text_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace hmd
