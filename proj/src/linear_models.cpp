#include "hmd/linear_models.hpp"

#include <cmath>
#include <limits>

namespace hmd {

namespace {

void require_two_classes(const Dataset& ds, const char* who) {
    if (ds.empty()) throw EmptyDatasetError(std::string(who) + ": empty training set");
    if (!ds.has_both_classes())
        throw DegenerateTrainingError(std::string(who) + ": training set holds a single class");
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double signed_target(Label l) { return l == Label::malware ? 1.0 : -1.0; }

}  // namespace

double LinearModel::margin(std::span<const double> x) const {
    check_dimension(w.size(), x.size());
    return dot(w, x) + b;
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

LinearModel train_logistic(const Dataset& ds, const LogisticParams& params) {
    require_two_classes(ds, "logistic regression");
    if (!(params.learning_rate > 0.0)) throw ConfigError("logistic regression: learning rate must be positive");

    const std::size_t d = ds.feature_count();
    const double n = static_cast<double>(ds.size());
    LinearModel m{LinearKind::logistic, std::vector<double>(d, 0.0), 0.0, {}};
    std::vector<double> grad_w(d);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0.0;
        double loss = 0.0;
        for (const auto& s : ds.samples()) {
            double z = dot(m.w, s.features) + m.b;
            double p = sigmoid(z);
            double y = s.label == Label::malware ? 1.0 : 0.0;
            double err = p - y;
            for (std::size_t j = 0; j < d; ++j) grad_w[j] += err * s.features[j];
            grad_b += err;
            // log(1 + e^-|z|) form keeps the loss finite when p saturates
            loss += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y * z;
        }
        for (std::size_t j = 0; j < d; ++j) m.w[j] -= params.learning_rate * grad_w[j] / n;
        m.b -= params.learning_rate * grad_b / n;
        m.loss_history.push_back(loss / n);
    }
    return m;
}

Prediction logistic_predict(const LinearModel& m, std::span<const double> x) {
    // sigmoid(z) >= 0.5 exactly when z >= 0; testing z avoids rounding at the boundary.
    double z = m.margin(x);
    return {z >= 0.0 ? Label::malware : Label::benign, sigmoid(z)};
}

double hinge_loss(const LinearModel& m, const Dataset& ds) {
    double total = 0.0;
    for (const auto& s : ds.samples())
        total += std::max(0.0, 1.0 - signed_target(s.label) * m.margin(s.features));
    return total;
}

double svm_objective(const LinearModel& m, const Dataset& ds, double c) {
    return 0.5 * dot(m.w, m.w) + c * hinge_loss(m, ds);
}

LinearModel train_svm(const Dataset& ds, const SvmParams& params) {
    require_two_classes(ds, "svm");
    if (!(params.c > 0.0)) throw ConfigError("svm: C must be positive");
    if (!(params.learning_rate > 0.0)) throw ConfigError("svm: learning rate must be positive");

    const std::size_t d = ds.feature_count();
    LinearModel cur{LinearKind::svm, std::vector<double>(d, 0.0), 0.0, {}};
    LinearModel best = cur;
    double best_obj = svm_objective(cur, ds, params.c);
    std::vector<double> grad_w(d);

    for (std::size_t t = 1; t <= params.epochs; ++t) {
        grad_w = cur.w;  // gradient of the regulariser
        double grad_b = 0.0;
        for (const auto& s : ds.samples()) {
            double y = signed_target(s.label);
            if (y * cur.margin(s.features) < 1.0) {
                for (std::size_t j = 0; j < d; ++j) grad_w[j] -= params.c * y * s.features[j];
                grad_b -= params.c * y;
            }
        }
        double step = params.learning_rate / static_cast<double>(t);
        for (std::size_t j = 0; j < d; ++j) cur.w[j] -= step * grad_w[j];
        cur.b -= step * grad_b;

        double obj = svm_objective(cur, ds, params.c);
        if (obj < best_obj) {
            best_obj = obj;
            best.w = cur.w;
            best.b = cur.b;
        }
        best.loss_history.push_back(best_obj);
    }
    return best;
}

Prediction svm_predict(const LinearModel& m, std::span<const double> x) {
    double z = m.margin(x);
    return {z >= 0.0 ? Label::malware : Label::benign, sigmoid(z)};
}

double hyperplane_width(std::span<const double> w) {
    double norm = std::sqrt(dot(w, w));
    return norm > 0.0 ? 1.0 / norm : std::numeric_limits<double>::infinity();
}

}  // namespace hmd
