#include "cli/commands.hpp"

#include "hmd/error.hpp"
#include "hmd/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>

namespace hmd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
};

ExperimentConfig load_experiment(const GlobalOptions& g) {
    ExperimentConfig cfg;
    if (!g.config.empty()) {
        fs::path p = g.config;
        cfg = experiment_config_from_json(read_json_file(p), p.parent_path());
    }
    if (g.seed) override_seed(cfg, *g.seed);
    if (!g.out.empty()) cfg.output_dir = g.out;
    return cfg;
}

std::vector<std::vector<double>> raw_rows(const Dataset& ds) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : ds.samples()) rows.push_back(s.features);
    return rows;
}

// Reorders the data columns to the model's feature order, by name.
Dataset align_to_model(const Dataset& ds, const ModelFile& mf) {
    if (ds.feature_names() == mf.feature_names) return ds;
    std::vector<std::size_t> idx;
    for (const auto& name : mf.feature_names) {
        auto it = std::find(ds.feature_names().begin(), ds.feature_names().end(), name);
        if (it == ds.feature_names().end()) throw DataError("data has no column '" + name + "' required by the model");
        idx.push_back(static_cast<std::size_t>(it - ds.feature_names().begin()));
    }
    return ds.select_features(idx);
}

struct Scored {
    std::vector<int> labels;
    std::vector<double> scores;
};

Scored score_dataset(const ModelFile& mf, const Dataset& ds) {
    Scored s;
    for (const auto& row : raw_rows(ds)) {
        auto p = mf.predict_raw(row);
        s.labels.push_back(to_int(p.label));
        s.scores.push_back(p.score);
    }
    return s;
}

int cmd_generate(const GlobalOptions& g, const std::string& gen_config, std::optional<std::size_t> per_family,
                 std::optional<std::size_t> benign, std::ostream& out) {
    GeneratorConfig cfg = gen_config.empty() ? default_generator_config()
                                             : generator_config_from_json(read_json_file(gen_config));
    if (gen_config.empty() && !g.config.empty()) cfg = load_experiment(g).generator;
    if (g.seed) cfg.seed = *g.seed;
    if (per_family || benign)
        cfg = with_counts(cfg, per_family.value_or(cfg.families.empty() ? 0 : cfg.families.begin()->second.count),
                          benign.value_or(cfg.benign_count));
    Dataset ds = generate_synthetic(cfg);
    fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
    write_text_file(dir / "dataset.csv", to_csv(ds));
    out << "wrote " << ds.size() << " samples (" << ds.count(Label::malware) << " malware) to "
        << (dir / "dataset.csv").string() << "\n";
    return kExitOk;
}

int cmd_select(const GlobalOptions& g, const std::string& data, std::size_t k, int bins, std::ostream& out) {
    Dataset ds = parse_csv(data);
    auto sel = select_k_best(ds, k, bins);
    std::string csv = selection_csv(sel, ds.feature_names());
    out << csv;
    std::string kept = "kept:";
    for (auto i : sel.kept_indices) kept += " " + ds.feature_names()[i];
    out << "# " << kept << "\n";
    if (!g.out.empty()) write_text_file(fs::path(g.out) / "selection.csv", csv);
    return kExitOk;
}

int cmd_train(const GlobalOptions& g, const std::string& data, const std::string& model_name,
              const std::string& format, const std::string& model_out, std::ostream& out) {
    auto type = model_type_from_string(model_name);
    if (!type) throw ConfigError("unknown model type '" + model_name + "'");
    ExperimentConfig cfg = load_experiment(g);

    Dataset ds;
    if (format == "csv") {
        ds = parse_csv(data);
    } else if (format == "mlp-text") {
        auto text = read_mlp_text(data);
        ds = text.data;
        if (*type == ModelType::mlp) cfg.params.mlp.hidden = text.topology[1];
    } else {
        throw ConfigError("unknown data format '" + format + "'");
    }
    ScalingParams scaling = fit_scaling(ds);
    TrainedModel model = train_model(*type, apply_scaling(ds, scaling), cfg.params);
    ModelFile mf{kModelFormatVersion, ds.feature_names(), scaling, std::move(model)};

    fs::path path = !model_out.empty() ? fs::path(model_out)
                                       : (g.out.empty() ? fs::path(".") : fs::path(g.out)) / (model_name + ".json");
    save_model(mf, path);
    out << "trained " << model_name << " on " << ds.size() << " samples; wrote " << path.string() << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& model_path, const std::string& data, std::ostream& out) {
    ModelFile mf = load_model(model_path);
    Dataset ds = align_to_model(parse_csv(data), mf);
    auto scored = score_dataset(mf, ds);
    auto actual = ds.labels();
    auto cm = confusion(scored.labels, actual);
    out << "model,accuracy,precision,recall,f1,auc,tp,fp,tn,fn\n";
    std::string auc_text = "nan";
    if (ds.has_both_classes()) auc_text = format_exact(auc(roc_curve(scored.scores, actual)));
    out << to_string(mf.model.type()) << ',' << format_exact(accuracy(cm).value) << ','
        << format_exact(precision(cm).value) << ',' << format_exact(recall(cm).value) << ','
        << format_exact(f1(cm).value) << ',' << auc_text << ',' << cm.tp << ',' << cm.fp << ',' << cm.tn << ','
        << cm.fn << '\n';
    return kExitOk;
}

int cmd_explain(const std::string& model_path, std::ostream& out) {
    ModelFile mf = load_model(model_path);
    out << explain(mf.model, mf.feature_names);
    return kExitOk;
}

int cmd_roc(const GlobalOptions& g, const std::string& model_path, const std::string& data, std::ostream& out) {
    ModelFile mf = load_model(model_path);
    Dataset ds = align_to_model(parse_csv(data), mf);
    auto scored = score_dataset(mf, ds);
    auto curve = roc_curve(scored.scores, ds.labels());
    std::string csv = roc_to_csv(curve);
    if (g.out.empty()) {
        out << csv;
    } else {
        fs::path p = fs::path(g.out) / ("roc_" + std::string(to_string(mf.model.type())) + ".csv");
        write_text_file(p, csv);
        out << "auc=" << format_exact(auc(curve)) << "; wrote " << p.string() << "\n";
    }
    return kExitOk;
}

int cmd_cost(const GlobalOptions& g, const std::vector<std::string>& models, const std::string& table_path,
             bool as_json, std::ostream& out) {
    CostTable table = table_path.empty() ? load_experiment(g).cost_table : cost_table_from_json(read_json_file(table_path));
    std::vector<NamedCost> reports;
    for (const auto& path : models) {
        ModelFile mf = load_model(path);
        reports.emplace_back(fs::path(path).stem().string(), estimate_cost(mf.model, table));
    }
    reports = rank_models(std::move(reports));
    if (as_json) {
        json j = json::array();
        for (const auto& [name, r] : reports) {
            json e = to_json(r);
            e["model"] = name;
            j.push_back(std::move(e));
        }
        out << j.dump(2) << "\n";
    } else {
        out << cost_csv(reports);
    }
    return kExitOk;
}

int cmd_report(const GlobalOptions& g, std::ostream& out) {
    ExperimentConfig cfg = load_experiment(g);
    ReportResult r = run_report(cfg);
    write_report(r, cfg.output_dir);
    out << metrics_table(r);
    out << "wrote report to " << cfg.output_dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hardware-performance-counter malware detection toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config, "Experiment config (JSON)");
    auto* seed_opt = app.add_option("--seed", seed, "Seed overriding the config's data and split seeds");
    app.add_option("--out", g.out, "Output directory");

    auto* gen = app.add_subcommand("generate", "Write a synthetic HPC dataset as CSV");
    std::string gen_config;
    std::optional<std::size_t> per_family, benign;
    gen->add_option("--generator", gen_config, "Generator config (JSON)");
    gen->add_option("--per-family", per_family, "Samples per malware family");
    gen->add_option("--benign", benign, "Benign sample count");

    auto* sel = app.add_subcommand("select", "Rank features by mutual information with the label");
    std::string sel_data;
    std::size_t sel_k = 4;
    int sel_bins = kDefaultMiBins;
    sel->add_option("--data", sel_data, "Dataset CSV")->required();
    sel->add_option("--k", sel_k, "Features to keep");
    sel->add_option("--bins", sel_bins, "Quantile bins per feature");

    auto* train = app.add_subcommand("train", "Train one model and save it as JSON");
    std::string train_data, train_model_name, train_format = "csv", train_out;
    train->add_option("--data", train_data, "Training data")->required();
    train->add_option("--model", train_model_name, "Model type")->required();
    train->add_option("--format", train_format, "csv or mlp-text");
    train->add_option("--model-out", train_out, "Path of the saved model");

    auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a CSV");
    std::string eval_model, eval_data;
    eval->add_option("--model", eval_model, "Saved model")->required();
    eval->add_option("--data", eval_data, "Dataset CSV")->required();

    auto* expl = app.add_subcommand("explain", "Print a tree or rule list as text");
    std::string expl_model;
    expl->add_option("--model", expl_model, "Saved model")->required();

    auto* roc = app.add_subcommand("roc", "Export ROC points (threshold,fpr,tpr)");
    std::string roc_model, roc_data;
    roc->add_option("--model", roc_model, "Saved model")->required();
    roc->add_option("--data", roc_data, "Dataset CSV")->required();

    auto* cost = app.add_subcommand("cost", "Estimate inference latency and resources");
    std::vector<std::string> cost_models;
    std::string cost_table;
    bool cost_json = false;
    cost->add_option("--model", cost_models, "Saved model(s)")->required();
    cost->add_option("--cost-table", cost_table, "Cost table (JSON)");
    cost->add_flag("--json", cost_json, "Emit JSON instead of CSV");

    auto* report = app.add_subcommand("report", "Run the full zero-day experiment");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend() - 1);
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    if (seed_opt->count() > 0) g.seed = seed;

    try {
        if (*gen) return cmd_generate(g, gen_config, per_family, benign, out);
        if (*sel) return cmd_select(g, sel_data, sel_k, sel_bins, out);
        if (*train) return cmd_train(g, train_data, train_model_name, train_format, train_out, out);
        if (*eval) return cmd_eval(eval_model, eval_data, out);
        if (*expl) return cmd_explain(expl_model, out);
        if (*roc) return cmd_roc(g, roc_model, roc_data, out);
        if (*cost) return cmd_cost(g, cost_models, cost_table, cost_json, out);
        if (*report) return cmd_report(g, out);
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed JSON input: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace hmd::cli
