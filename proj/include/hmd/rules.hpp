#pragma once

#include "hmd/prediction.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hmd {

enum class RuleKind { classic, many };

// lower < x[feature] <= upper  ->  label
struct RuleInterval {
    std::size_t feature = 0;
    double lower = 0.0;
    double upper = 0.0;  // +inf on the last interval
    Label label = Label::benign;
    std::size_t support = 0;
    double purity = 0.0;  // majority count / support

    bool operator==(const RuleInterval&) const = default;
};

// x[feature] == value  ->  label, checked before any interval.
struct BaseCaseRule {
    double value = 0.0;
    Label label = Label::benign;
    std::size_t support = 0;

    bool operator==(const BaseCaseRule&) const = default;
};

// Single-feature rule list. Intervals are sorted, disjoint, cover (min training value, +inf)
// and never repeat a label between neighbours. Inputs at or below the lowest bound take
// the lowest interval's rule.
struct RuleListModel {
    RuleKind kind = RuleKind::many;
    std::size_t features = 0;
    std::size_t feature = 0;
    std::vector<BaseCaseRule> base_cases;
    std::vector<RuleInterval> intervals;
    Label default_label = Label::benign;
    std::vector<double> feature_accuracy;  // training accuracy of the candidate list on each feature

    std::size_t feature_count() const { return features; }
    std::size_t rule_count() const { return base_cases.size() + intervals.size(); }
    bool operator==(const RuleListModel&) const = default;
};

inline constexpr std::size_t kClassicOneRBins = 8;
inline constexpr std::size_t kBaseCaseMinSupport = 5;

// Classic OneR on quantile buckets of each feature; the feature with the fewest training
// errors wins (lower index on ties). A single-class set yields one rule.
RuleListModel train_classic_oner(const Dataset& ds, std::size_t bins = kClassicOneRBins);
// The classic rule list restricted to one feature.
RuleListModel classic_oner_for_feature(const Dataset& ds, std::size_t feature,
                                       std::size_t bins = kClassicOneRBins);

// Many-rules variant. Rows are sorted by the feature; an interval closes between two rows
// of different value when the class changes and the closing class has occurred at least
// twice in a row since the previous cut. Intervals take their majority class (ties
// benign), equal-label neighbours merge, and exact values seen at least five times with a
// single class become base-case rules. The most accurate feature on the training set wins.
RuleListModel train_many_rules(const Dataset& ds);
RuleListModel many_rules_for_feature(const Dataset& ds, std::size_t feature);

// Base cases first, then a binary search over the interval upper bounds.
// score = purity oriented toward malware.
Prediction rules_predict(const RuleListModel& m, std::span<const double> x);

double training_accuracy(const RuleListModel& m, const Dataset& ds);

// Text form:
//   model many_rules_oner
//   feature <name>: train_acc=<x>      (one per feature)
//   selected <name>
//   if <name> == <v> then <class> (support=<n>)
//   if <lo> < <name> <= <hi> then <class> (support=<n>, purity=<p>)
// Numbers are printed in shortest round-trip form, so parse_rules(explain_rules(m)) == m.
std::string explain_rules(const RuleListModel& m, const std::vector<std::string>& feature_names);
RuleListModel parse_rules(std::string_view text, const std::vector<std::string>& feature_names);

}  // namespace hmd
