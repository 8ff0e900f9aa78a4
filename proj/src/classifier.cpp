#include "hmd/classifier.hpp"

#include <array>

namespace hmd {

namespace {

constexpr std::array<ModelType, 8> kAllTypes{
    ModelType::knn,   ModelType::mlp, ModelType::decision_tree, ModelType::bagged_trees,
    ModelType::svm,   ModelType::logistic_regression, ModelType::many_rules_oner, ModelType::oner};

constexpr std::array<std::pair<ModelType, std::string_view>, 8> kNames{{
    {ModelType::knn, "knn"},
    {ModelType::mlp, "mlp"},
    {ModelType::decision_tree, "decision_tree"},
    {ModelType::bagged_trees, "bagged_trees"},
    {ModelType::svm, "svm"},
    {ModelType::logistic_regression, "logistic_regression"},
    {ModelType::oner, "oner"},
    {ModelType::many_rules_oner, "many_rules_oner"},
}};

bool variant_matches(ModelType t, const TrainedModel::Variant& v) {
    switch (t) {
        case ModelType::knn: return std::holds_alternative<KnnModel>(v);
        case ModelType::mlp: return std::holds_alternative<MlpModel>(v);
        case ModelType::decision_tree: return std::holds_alternative<TreeModel>(v);
        case ModelType::bagged_trees: return std::holds_alternative<BaggedModel>(v);
        case ModelType::svm:
            return std::holds_alternative<LinearModel>(v) && std::get<LinearModel>(v).kind == LinearKind::svm;
        case ModelType::logistic_regression:
            return std::holds_alternative<LinearModel>(v) &&
                   std::get<LinearModel>(v).kind == LinearKind::logistic;
        case ModelType::oner:
            return std::holds_alternative<RuleListModel>(v) &&
                   std::get<RuleListModel>(v).kind == RuleKind::classic;
        case ModelType::many_rules_oner:
            return std::holds_alternative<RuleListModel>(v) && std::get<RuleListModel>(v).kind == RuleKind::many;
    }
    return false;
}

}  // namespace

std::string_view to_string(ModelType t) {
    for (const auto& [type, name] : kNames)
        if (type == t) return name;
    return "unknown";
}

std::optional<ModelType> model_type_from_string(std::string_view name) {
    for (const auto& [type, n] : kNames)
        if (n == name) return type;
    return std::nullopt;
}

std::span<const ModelType> all_model_types() { return kAllTypes; }

TrainedModel::TrainedModel(ModelType type, Variant model) : type_(type), model_(std::move(model)) {
    if (!variant_matches(type_, model_))
        throw InvalidArgument("model parameters do not match model type '" + std::string(to_string(type_)) + "'");
}

std::size_t TrainedModel::feature_count() const {
    return std::visit([](const auto& m) { return m.feature_count(); }, model_);
}

TrainedModel train_model(ModelType type, const Dataset& ds, const ModelParams& p) {
    switch (type) {
        case ModelType::knn: return {type, train_knn(ds, p.knn)};
        case ModelType::mlp: return {type, train_mlp(ds, p.mlp)};
        case ModelType::decision_tree: return {type, train_tree(ds, p.tree)};
        case ModelType::bagged_trees: return {type, train_bagged(ds, p.bagging)};
        case ModelType::svm: return {type, train_svm(ds, p.svm)};
        case ModelType::logistic_regression: return {type, train_logistic(ds, p.logistic)};
        case ModelType::oner: return {type, train_classic_oner(ds, p.oner_bins)};
        case ModelType::many_rules_oner: return {type, train_many_rules(ds)};
    }
    throw InvalidArgument("unknown model type");
}

Prediction predict(const TrainedModel& m, std::span<const double> x) {
    check_dimension(m.feature_count(), x.size());
    switch (m.type()) {
        case ModelType::knn: return knn_predict(m.as<KnnModel>(), x);
        case ModelType::mlp: return mlp_predict(m.as<MlpModel>(), x);
        case ModelType::decision_tree: return tree_predict(m.as<TreeModel>(), x);
        case ModelType::bagged_trees: return bagged_predict(m.as<BaggedModel>(), x);
        case ModelType::svm: return svm_predict(m.as<LinearModel>(), x);
        case ModelType::logistic_regression: return logistic_predict(m.as<LinearModel>(), x);
        case ModelType::oner:
        case ModelType::many_rules_oner: return rules_predict(m.as<RuleListModel>(), x);
    }
    throw InvalidArgument("unknown model type");
}

std::vector<Prediction> predict_all(const TrainedModel& m, const Dataset& ds) {
    std::vector<Prediction> out;
    out.reserve(ds.size());
    for (const auto& s : ds.samples()) out.push_back(predict(m, s.features));
    return out;
}

std::string explain(const TrainedModel& m, const std::vector<std::string>& feature_names) {
    switch (m.type()) {
        case ModelType::decision_tree: return explain_tree(m.as<TreeModel>(), feature_names);
        case ModelType::oner:
        case ModelType::many_rules_oner: return explain_rules(m.as<RuleListModel>(), feature_names);
        default:
            throw InvalidArgument("model type '" + std::string(to_string(m.type())) +
                                  "' has no readable explanation");
    }
}

}  // namespace hmd
