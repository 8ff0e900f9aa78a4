#pragma once

#include "hmd/knn.hpp"
#include "hmd/linear_models.hpp"
#include "hmd/mlp.hpp"
#include "hmd/prediction.hpp"
#include "hmd/rules.hpp"
#include "hmd/trees.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hmd {

enum class ModelType { knn, mlp, decision_tree, bagged_trees, svm, logistic_regression, oner, many_rules_oner };

std::string_view to_string(ModelType t);
std::optional<ModelType> model_type_from_string(std::string_view name);
// Report order: the seven detectors followed by the classic OneR baseline.
std::span<const ModelType> all_model_types();

struct ModelParams {
    KnnParams knn;
    MlpParams mlp;
    TreeParams tree;
    BaggingParams bagging;
    SvmParams svm;
    LogisticParams logistic;
    std::size_t oner_bins = kClassicOneRBins;
};

// A fitted model of any supported kind. Immutable once built; predict is thread-safe.
class TrainedModel {
public:
    using Variant = std::variant<KnnModel, MlpModel, TreeModel, BaggedModel, LinearModel, RuleListModel>;

    TrainedModel(ModelType type, Variant model);

    ModelType type() const noexcept { return type_; }
    const Variant& model() const noexcept { return model_; }
    std::size_t feature_count() const;

    template <typename T>
    const T& as() const {
        return std::get<T>(model_);
    }

    bool operator==(const TrainedModel&) const = default;

private:
    ModelType type_;
    Variant model_;
};

TrainedModel train_model(ModelType type, const Dataset& ds, const ModelParams& params = {});

Prediction predict(const TrainedModel& m, std::span<const double> x);
std::vector<Prediction> predict_all(const TrainedModel& m, const Dataset& ds);

// Tree if-then text or the rule list; other kinds have no readable form.
std::string explain(const TrainedModel& m, const std::vector<std::string>& feature_names);

}  // namespace hmd
