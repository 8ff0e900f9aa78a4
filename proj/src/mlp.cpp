#include "hmd/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace hmd {

namespace {

struct Activations {
    std::vector<double> hidden;
    double output = 0.0;
};

Activations forward_pass(const MlpModel& m, std::span<const double> x) {
    check_dimension(m.inputs, x.size());
    for (double v : x)
        if (!std::isfinite(v)) throw InvalidArgument("mlp: non-finite input");
    const std::size_t stride = m.inputs + 1;
    Activations a;
    a.hidden.resize(m.hidden);
    for (std::size_t h = 0; h < m.hidden; ++h) {
        const double* w = &m.hidden_weights[h * stride];
        double z = w[m.inputs];
        for (std::size_t i = 0; i < m.inputs; ++i) z += w[i] * x[i];
        a.hidden[h] = std::tanh(z);
    }
    double z = m.output_weights[m.hidden];
    for (std::size_t h = 0; h < m.hidden; ++h) z += m.output_weights[h] * a.hidden[h];
    a.output = std::tanh(z);
    return a;
}

double target_for(Label l) { return l == Label::malware ? 1.0 : -1.0; }

}  // namespace

MlpModel init_mlp(std::size_t inputs, const MlpParams& params) {
    if (inputs == 0 || params.hidden == 0) throw ConfigError("mlp: layer sizes must be positive");
    MlpModel m;
    m.inputs = inputs;
    m.hidden = params.hidden;
    m.params = params;
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> init(-0.5, 0.5);
    m.hidden_weights.resize(m.hidden * (inputs + 1));
    m.output_weights.resize(m.hidden + 1);
    for (auto& w : m.hidden_weights) w = init(rng);
    for (auto& w : m.output_weights) w = init(rng);
    return m;
}

double mlp_forward(const MlpModel& m, std::span<const double> x) { return forward_pass(m, x).output; }

double mlp_sample_loss(const MlpModel& m, std::span<const double> x, double target) {
    double e = mlp_forward(m, x) - target;
    return 0.5 * e * e;
}

MlpGradient mlp_gradient(const MlpModel& m, std::span<const double> x, double target) {
    auto a = forward_pass(m, x);
    const std::size_t stride = m.inputs + 1;
    MlpGradient g;
    g.hidden_weights.assign(m.hidden_weights.size(), 0.0);
    g.output_weights.assign(m.output_weights.size(), 0.0);

    double delta_out = (a.output - target) * (1.0 - a.output * a.output);
    for (std::size_t h = 0; h < m.hidden; ++h) g.output_weights[h] = delta_out * a.hidden[h];
    g.output_weights[m.hidden] = delta_out;

    for (std::size_t h = 0; h < m.hidden; ++h) {
        double delta_h = delta_out * m.output_weights[h] * (1.0 - a.hidden[h] * a.hidden[h]);
        double* gw = &g.hidden_weights[h * stride];
        for (std::size_t i = 0; i < m.inputs; ++i) gw[i] = delta_h * x[i];
        gw[m.inputs] = delta_h;
    }
    return g;
}

MlpModel train_mlp(const Dataset& ds, const MlpParams& params) {
    if (ds.empty()) throw EmptyDatasetError("mlp: empty training set");
    if (params.learning_rate < 0.0 || !std::isfinite(params.learning_rate))
        throw ConfigError("mlp: learning rate must be finite and non-negative");
    if (params.max_epochs == 0) throw ConfigError("mlp: epochs must be positive");

    MlpModel m = init_mlp(ds.feature_count(), params);
    std::mt19937_64 rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> outputs(ds.size()), targets(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) targets[i] = target_for(ds[i].label);

    for (std::size_t epoch = 0; epoch < params.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            const auto& s = ds[idx];
            auto g = mlp_gradient(m, s.features, targets[idx]);
            for (std::size_t w = 0; w < m.hidden_weights.size(); ++w)
                m.hidden_weights[w] -= params.learning_rate * g.hidden_weights[w];
            for (std::size_t w = 0; w < m.output_weights.size(); ++w)
                m.output_weights[w] -= params.learning_rate * g.output_weights[w];
        }
        for (std::size_t i = 0; i < ds.size(); ++i) outputs[i] = mlp_forward(m, ds[i].features);
        m.final_rmse = rmse(outputs, targets);
        m.epochs_run = epoch + 1;
        if (m.final_rmse < params.target_rmse) break;
    }
    return m;
}

Prediction mlp_predict(const MlpModel& m, std::span<const double> x) {
    double out = mlp_forward(m, x);
    return {out >= 0.0 ? Label::malware : Label::benign, (out + 1.0) / 2.0};
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size()) throw InvalidArgument("rmse: length mismatch");
    if (predicted.empty()) throw InvalidArgument("rmse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        double d = predicted[i] - actual[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(predicted.size()));
}

MlpTextData parse_mlp_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    MlpTextData out;
    std::vector<HpcSample> samples;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string t; fields >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;
        if (out.topology.empty()) {
            for (const auto& t : tokens) {
                std::size_t pos = 0;
                unsigned long v = 0;
                try {
                    v = std::stoul(t, &pos);
                } catch (const std::exception&) {
                    throw ParseError(lineno, "topology must be whitespace-separated integers");
                }
                if (pos != t.size() || v == 0) throw ParseError(lineno, "bad topology entry '" + t + "'");
                out.topology.push_back(v);
            }
            if (out.topology.size() != 3 || out.topology[2] != 1)
                throw ParseError(lineno, "topology must be '<inputs> <hidden> 1'");
            continue;
        }
        const std::size_t n_in = out.topology[0];
        if (tokens.size() != n_in + 1)
            throw ParseError(lineno, "expected " + std::to_string(n_in + 1) + " values");
        HpcSample s;
        for (std::size_t i = 0; i < n_in; ++i) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(tokens[i], &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != tokens[i].size() || !std::isfinite(v))
                throw ParseError(lineno, "non-numeric feature '" + tokens[i] + "'");
            s.features.push_back(v);
        }
        if (tokens.back() == "0") {
            s.label = Label::benign;
        } else if (tokens.back() == "1") {
            s.label = Label::malware;
        } else {
            throw ParseError(lineno, "target must be 0 or 1");
        }
        samples.push_back(std::move(s));
    }
    if (out.topology.empty()) throw EmptyDatasetError("mlp text file is empty");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < out.topology[0]; ++i) names.push_back("x" + std::to_string(i));
    out.data = Dataset(std::move(names), std::move(samples));
    return out;
}

MlpTextData read_mlp_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mlp_text(buf.str());
}

std::string to_mlp_text(const Dataset& ds, std::size_t hidden) {
    std::ostringstream out;
    out.precision(17);
    out << ds.feature_count() << ' ' << hidden << " 1\n";
    for (const auto& s : ds.samples()) {
        for (double v : s.features) out << v << ' ';
        out << to_int(s.label) << '\n';
    }
    return out.str();
}

}  // namespace hmd
