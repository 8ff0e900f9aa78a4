#include "hmd/rules.hpp"

#include "hmd/feature_selection.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace hmd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Row {
    double value;
    Label label;
};

std::vector<Row> sorted_rows(const Dataset& ds, std::size_t feature) {
    std::vector<Row> rows;
    rows.reserve(ds.size());
    for (const auto& s : ds.samples()) rows.push_back({s.features[feature], s.label});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return a.value < b.value || (a.value == b.value && to_int(a.label) < to_int(b.label));
    });
    return rows;
}

// Turns consecutive row segments [ends[i-1], ends[i]) into labelled, merged intervals.
std::vector<RuleInterval> intervals_from_segments(const std::vector<Row>& rows,
                                                  const std::vector<std::size_t>& ends,
                                                  std::size_t feature) {
    struct Seg {
        double upper;
        std::array<std::size_t, 2> counts;
    };
    std::vector<Seg> segs;
    std::size_t begin = 0;
    for (std::size_t end : ends) {
        Seg s{rows[end - 1].value, {0, 0}};
        for (std::size_t i = begin; i < end; ++i) ++s.counts[static_cast<std::size_t>(to_int(rows[i].label))];
        segs.push_back(s);
        begin = end;
    }

    auto label_of = [](const std::array<std::size_t, 2>& c) {
        return c[1] > c[0] ? Label::malware : Label::benign;
    };
    std::vector<Seg> merged;
    for (const auto& s : segs) {
        if (!merged.empty() && label_of(merged.back().counts) == label_of(s.counts)) {
            merged.back().upper = s.upper;
            merged.back().counts[0] += s.counts[0];
            merged.back().counts[1] += s.counts[1];
        } else {
            merged.push_back(s);
        }
    }

    std::vector<RuleInterval> out;
    // A first segment holding only the minimum value would give an empty (min, min];
    // open it downward instead.
    double lower = merged.size() > 1 && merged.front().upper == rows.front().value ? -kInf
                                                                                   : rows.front().value;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const auto& s = merged[i];
        Label l = label_of(s.counts);
        std::size_t support = s.counts[0] + s.counts[1];
        std::size_t majority = s.counts[static_cast<std::size_t>(to_int(l))];
        double upper = i + 1 == merged.size() ? kInf : s.upper;
        out.push_back({feature, lower, upper, l, support,
                       static_cast<double>(majority) / static_cast<double>(support)});
        lower = upper;
    }
    return out;
}

std::vector<BaseCaseRule> find_base_cases(const std::vector<Row>& rows) {
    std::vector<BaseCaseRule> out;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        std::array<std::size_t, 2> counts{0, 0};
        while (j < rows.size() && rows[j].value == rows[i].value) {
            ++counts[static_cast<std::size_t>(to_int(rows[j].label))];
            ++j;
        }
        std::size_t n = j - i;
        if (n >= kBaseCaseMinSupport && (counts[0] == 0 || counts[1] == 0))
            out.push_back({rows[i].value, counts[1] > 0 ? Label::malware : Label::benign, n});
        i = j;
    }
    return out;
}

RuleListModel finish(RuleKind kind, const Dataset& ds, std::size_t feature,
                     std::vector<RuleInterval> intervals, std::vector<BaseCaseRule> base_cases) {
    RuleListModel m;
    m.kind = kind;
    m.features = ds.feature_count();
    m.feature = feature;
    m.intervals = std::move(intervals);
    m.base_cases = std::move(base_cases);
    m.default_label = m.intervals.front().label;
    return m;
}

void check_feature(const Dataset& ds, std::size_t feature) {
    if (ds.empty()) throw EmptyDatasetError("rules: empty training set");
    if (feature >= ds.feature_count()) throw InvalidArgument("rules: feature index out of range");
}

template <typename Build>
RuleListModel pick_best_feature(const Dataset& ds, Build build) {
    std::vector<double> acc;
    RuleListModel best;
    for (std::size_t f = 0; f < ds.feature_count(); ++f) {
        auto m = build(f);
        double a = training_accuracy(m, ds);
        if (acc.empty() || a > *std::max_element(acc.begin(), acc.end())) best = std::move(m);
        acc.push_back(a);
    }
    best.feature_accuracy = std::move(acc);
    return best;
}

std::string num(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

double parse_num(std::string_view s, std::size_t lineno) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParseError(lineno, "bad number '" + std::string(s) + "'");
    return v;
}

std::size_t parse_count(std::string_view s, std::size_t lineno) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParseError(lineno, "bad count '" + std::string(s) + "'");
    return v;
}

Label parse_class(std::string_view s, std::size_t lineno) {
    if (s == "0") return Label::benign;
    if (s == "1") return Label::malware;
    throw ParseError(lineno, "class must be 0 or 1");
}

std::string_view strip_prefix(std::string_view s, std::string_view prefix, std::size_t lineno) {
    if (s.substr(0, prefix.size()) != prefix)
        throw ParseError(lineno, "expected '" + std::string(prefix) + "'");
    s.remove_prefix(prefix.size());
    return s;
}

std::vector<std::string_view> words(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

RuleListModel classic_oner_for_feature(const Dataset& ds, std::size_t feature, std::size_t bins) {
    check_feature(ds, feature);
    if (bins == 0) throw InvalidArgument("classic OneR: bins must be positive");
    auto col = ds.column(feature);
    auto bin_ids = discretize(col, static_cast<int>(bins));
    // Quantile bins are rank-ordered, so sorting by value groups each bin contiguously.
    auto rows = sorted_rows(ds, feature);
    std::map<double, int> bin_of_value;
    for (std::size_t i = 0; i < col.size(); ++i) bin_of_value.emplace(col[i], bin_ids[i]);

    std::vector<std::size_t> ends;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (bin_of_value[rows[i].value] != bin_of_value[rows[i - 1].value]) ends.push_back(i);
    ends.push_back(rows.size());
    return finish(RuleKind::classic, ds, feature, intervals_from_segments(rows, ends, feature), {});
}

RuleListModel train_classic_oner(const Dataset& ds, std::size_t bins) {
    if (ds.empty()) throw EmptyDatasetError("classic OneR: empty training set");
    return pick_best_feature(ds, [&](std::size_t f) { return classic_oner_for_feature(ds, f, bins); });
}

RuleListModel many_rules_for_feature(const Dataset& ds, std::size_t feature) {
    check_feature(ds, feature);
    auto rows = sorted_rows(ds, feature);

    std::vector<std::size_t> ends;
    std::size_t run = 1;  // length of the current same-class run since the last cut
    for (std::size_t i = 1; i < rows.size(); ++i) {
        bool class_change = rows[i].label != rows[i - 1].label;
        if (class_change && run >= 2 && rows[i].value > rows[i - 1].value) {
            ends.push_back(i);
            run = 1;
            continue;
        }
        run = class_change ? 1 : run + 1;
    }
    ends.push_back(rows.size());
    return finish(RuleKind::many, ds, feature, intervals_from_segments(rows, ends, feature),
                  find_base_cases(rows));
}

RuleListModel train_many_rules(const Dataset& ds) {
    if (ds.empty()) throw EmptyDatasetError("many-rules OneR: empty training set");
    if (!ds.has_both_classes())
        throw DegenerateTrainingError("many-rules OneR: training set holds a single class");
    return pick_best_feature(ds, [&](std::size_t f) { return many_rules_for_feature(ds, f); });
}

Prediction rules_predict(const RuleListModel& m, std::span<const double> x) {
    check_dimension(m.features, x.size());
    if (m.intervals.empty()) throw InvalidArgument("rules: model has no intervals");
    const double v = x[m.feature];
    for (const auto& bc : m.base_cases)
        if (v == bc.value) return {bc.label, bc.label == Label::malware ? 1.0 : 0.0};

    auto it = std::lower_bound(m.intervals.begin(), m.intervals.end(), v,
                               [](const RuleInterval& r, double value) { return r.upper < value; });
    if (v <= m.intervals.front().lower) it = m.intervals.begin();
    if (it == m.intervals.end()) it = std::prev(m.intervals.end());  // only reachable for NaN
    double score = it->label == Label::malware ? it->purity : 1.0 - it->purity;
    return {it->label, score};
}

double training_accuracy(const RuleListModel& m, const Dataset& ds) {
    if (ds.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& s : ds.samples())
        if (rules_predict(m, s.features).label == s.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(ds.size());
}

std::string explain_rules(const RuleListModel& m, const std::vector<std::string>& names) {
    if (names.size() != m.features) throw DimensionError(m.features, names.size());
    std::ostringstream out;
    out << "model " << (m.kind == RuleKind::many ? "many_rules_oner" : "oner") << "\n";
    for (std::size_t f = 0; f < m.feature_accuracy.size(); ++f)
        out << "feature " << names[f] << ": train_acc=" << num(m.feature_accuracy[f]) << "\n";
    const auto& name = names[m.feature];
    out << "selected " << name << "\n";
    for (const auto& bc : m.base_cases)
        out << "if " << name << " == " << num(bc.value) << " then " << to_int(bc.label)
            << " (support=" << bc.support << ")\n";
    for (const auto& r : m.intervals)
        out << "if " << num(r.lower) << " < " << name << " <= " << num(r.upper) << " then "
            << to_int(r.label) << " (support=" << r.support << ", purity=" << num(r.purity) << ")\n";
    return out.str();
}

RuleListModel parse_rules(std::string_view text, const std::vector<std::string>& names) {
    RuleListModel m;
    m.features = names.size();
    bool have_kind = false, have_selected = false;
    auto index_of = [&](std::string_view n, std::size_t lineno) {
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) throw ParseError(lineno, "unknown feature '" + std::string(n) + "'");
        return static_cast<std::size_t>(it - names.begin());
    };

    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        auto line = text.substr(start, pos - start);
        start = pos + 1;
        ++lineno;
        auto w = words(line);
        if (w.empty()) continue;

        if (w[0] == "model" && w.size() == 2) {
            if (w[1] == "many_rules_oner") m.kind = RuleKind::many;
            else if (w[1] == "oner") m.kind = RuleKind::classic;
            else throw ParseError(lineno, "unknown rule model kind");
            have_kind = true;
        } else if (w[0] == "feature" && w.size() == 3) {
            auto name = w[1];
            if (name.empty() || name.back() != ':') throw ParseError(lineno, "expected 'feature <name>:'");
            name.remove_suffix(1);
            if (index_of(name, lineno) != m.feature_accuracy.size())
                throw ParseError(lineno, "feature lines must follow feature order");
            m.feature_accuracy.push_back(parse_num(strip_prefix(w[2], "train_acc=", lineno), lineno));
        } else if (w[0] == "selected" && w.size() == 2) {
            m.feature = index_of(w[1], lineno);
            have_selected = true;
        } else if (w[0] == "if" && w.size() == 7 && w[2] == "==" && w[4] == "then") {
            if (!have_selected || index_of(w[1], lineno) != m.feature)
                throw ParseError(lineno, "rule on a feature other than the selected one");
            BaseCaseRule bc;
            bc.value = parse_num(w[3], lineno);
            bc.label = parse_class(w[5], lineno);
            auto sup = strip_prefix(w[6], "(support=", lineno);
            if (sup.empty() || sup.back() != ')') throw ParseError(lineno, "expected '(support=<n>)'");
            sup.remove_suffix(1);
            bc.support = parse_count(sup, lineno);
            m.base_cases.push_back(bc);
        } else if (w[0] == "if" && w.size() == 10 && w[2] == "<" && w[4] == "<=" && w[6] == "then") {
            if (!have_selected || index_of(w[3], lineno) != m.feature)
                throw ParseError(lineno, "rule on a feature other than the selected one");
            RuleInterval r;
            r.feature = m.feature;
            r.lower = parse_num(w[1], lineno);
            r.upper = parse_num(w[5], lineno);
            r.label = parse_class(w[7], lineno);
            auto sup = strip_prefix(w[8], "(support=", lineno);
            if (sup.empty() || sup.back() != ',') throw ParseError(lineno, "expected '(support=<n>,'");
            sup.remove_suffix(1);
            r.support = parse_count(sup, lineno);
            auto pur = strip_prefix(w[9], "purity=", lineno);
            if (pur.empty() || pur.back() != ')') throw ParseError(lineno, "expected 'purity=<p>)'");
            pur.remove_suffix(1);
            r.purity = parse_num(pur, lineno);
            if (!m.intervals.empty() && r.lower != m.intervals.back().upper)
                throw ParseError(lineno, "intervals must be contiguous and ascending");
            if (!(r.lower < r.upper)) throw ParseError(lineno, "interval lower bound must be below upper");
            m.intervals.push_back(r);
        } else {
            throw ParseError(lineno, "unrecognised rule line");
        }
    }
    if (!have_kind || !have_selected || m.intervals.empty())
        throw ParseError(lineno, "rule text needs a model line, a selected feature and intervals");
    m.default_label = m.intervals.front().label;
    return m;
}

}  // namespace hmd
