#include "hmd/dataset.hpp"

#include "hmd/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace hmd {

namespace {

constexpr std::array<Family, kFamilyCount - 1> kMalwareFamilies{
    Family::backdoor, Family::worm,    Family::virus,  Family::rootkit, Family::botnet,
    Family::ransomware, Family::spyware, Family::adware, Family::trojan};

constexpr std::array<std::string_view, kFamilyCount> kFamilyNames{
    "none", "backdoor", "worm", "virus", "rootkit", "botnet", "ransomware", "spyware", "adware",
    "trojan"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

void check_family_label(const HpcSample& s, const std::string& where) {
    if (!s.family) return;
    bool is_none = *s.family == Family::none;
    if (is_none && s.label == Label::malware)
        throw DataError(where + "family 'none' on a malware sample");
    if (!is_none && s.label == Label::benign)
        throw DataError(where + "malware family '" + std::string(to_string(*s.family)) +
                        "' on a benign sample");
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

}  // namespace

Label label_from_int(int v) {
    if (v == 0) return Label::benign;
    if (v == 1) return Label::malware;
    throw InvalidArgument("label must be 0 or 1, got " + std::to_string(v));
}

std::string_view to_string(Family f) { return kFamilyNames[static_cast<std::size_t>(f)]; }

std::optional<Family> family_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
        if (kFamilyNames[i] == name) return static_cast<Family>(i);
    return std::nullopt;
}

std::span<const Family> malware_families() { return kMalwareFamilies; }

std::vector<std::string> default_feature_names() {
    return {"node-loads", "dTLB-stores", "branch-instructions", "cyclesct"};
}

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<HpcSample> samples,
                 Provenance provenance)
    : feature_names_(std::move(feature_names)), samples_(std::move(samples)), provenance_(provenance) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        std::string where = "sample " + std::to_string(i) + ": ";
        if (s.features.size() != feature_names_.size())
            throw DataError(where + "expected " + std::to_string(feature_names_.size()) +
                            " features, got " + std::to_string(s.features.size()));
        for (double v : s.features)
            if (!std::isfinite(v)) throw DataError(where + "non-finite feature value");
        check_family_label(s, where);
    }
}

std::vector<double> Dataset::column(std::size_t feature) const {
    if (feature >= feature_count()) throw InvalidArgument("feature index out of range");
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.features[feature]);
    return out;
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(to_int(s.label));
    return out;
}

std::size_t Dataset::count(Label l) const {
    return static_cast<std::size_t>(
        std::count_if(samples_.begin(), samples_.end(), [l](const HpcSample& s) { return s.label == l; }));
}

Dataset Dataset::select_features(std::span<const std::size_t> indices) const {
    std::vector<std::string> names;
    for (auto j : indices) {
        if (j >= feature_count()) throw InvalidArgument("feature index out of range");
        names.push_back(feature_names_[j]);
    }
    std::vector<HpcSample> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) {
        HpcSample t{{}, s.label, s.family};
        t.features.reserve(indices.size());
        for (auto j : indices) t.features.push_back(s.features[j]);
        out.push_back(std::move(t));
    }
    return Dataset(std::move(names), std::move(out), provenance_);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    std::vector<HpcSample> out;
    out.reserve(rows.size());
    for (auto r : rows) out.push_back(samples_.at(r));
    return Dataset(feature_names_, std::move(out), provenance_);
}

// ---- CSV --------------------------------------------------------------------

Dataset parse_csv_text(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    // Drop trailing blank lines only; blank lines in the middle are malformed rows.
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw EmptyDatasetError("empty file: no header");

    auto header = split_fields(lines[0]);
    bool has_family = !header.empty() && header.back() == "family";
    std::size_t label_col = header.size() - (has_family ? 2 : 1);
    if (header.size() < (has_family ? 3u : 2u) || header[label_col] != "label")
        throw ParseError(1, "header must end with 'label' or 'label,family'");
    std::vector<std::string> names(header.begin(), header.begin() + static_cast<long>(label_col));
    for (const auto& n : names)
        if (n.empty()) throw ParseError(1, "empty feature name in header");

    std::vector<HpcSample> samples;
    samples.reserve(lines.size() - 1);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        std::size_t lineno = li + 1;
        auto fields = split_fields(lines[li]);
        if (fields.size() != header.size())
            throw ParseError(lineno, "expected " + std::to_string(header.size()) + " columns, got " +
                                         std::to_string(fields.size()));
        HpcSample s;
        s.features.reserve(names.size());
        for (std::size_t j = 0; j < label_col; ++j) {
            auto v = parse_double(fields[j]);
            if (!v || !std::isfinite(*v))
                throw ParseError(lineno, "non-numeric value '" + std::string(fields[j]) +
                                             "' for feature '" + names[j] + "'");
            if (*v < 0.0)
                throw ParseError(lineno, "negative counter value for feature '" + names[j] + "'");
            s.features.push_back(*v);
        }
        auto lbl = fields[label_col];
        if (lbl == "0") {
            s.label = Label::benign;
        } else if (lbl == "1") {
            s.label = Label::malware;
        } else {
            throw ParseError(lineno, "label must be 0 or 1, got '" + std::string(lbl) + "'");
        }
        if (has_family) {
            auto fam = family_from_string(fields.back());
            if (!fam) throw ParseError(lineno, "unknown family '" + std::string(fields.back()) + "'");
            s.family = *fam;
            try {
                check_family_label(s, "");
            } catch (const DataError& e) {
                throw ParseError(lineno, e.what());
            }
        }
        samples.push_back(std::move(s));
    }
    if (samples.empty()) throw EmptyDatasetError("file has a header but no samples");
    return Dataset(std::move(names), std::move(samples), Provenance::ingested);
}

Dataset parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_text(buf.str());
}

std::string to_csv(const Dataset& ds) {
    bool has_family = std::any_of(ds.samples().begin(), ds.samples().end(),
                                  [](const HpcSample& s) { return s.family.has_value(); });
    std::string out;
    for (const auto& n : ds.feature_names()) out += n + ",";
    out += has_family ? "label,family\n" : "label\n";
    for (const auto& s : ds.samples()) {
        for (double v : s.features) out += format_double(v) + ",";
        out += std::to_string(to_int(s.label));
        if (has_family) {
            if (!s.family && s.label == Label::malware)
                throw DataError("cannot write a family column: a malware sample has no family tag");
            out += ",";
            out += to_string(s.family.value_or(Family::none));
        }
        out += "\n";
    }
    return out;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << to_csv(ds);
}

// ---- zero-day split ---------------------------------------------------------

SplitPair zero_day_split(const Dataset& ds, const SplitProtocol& protocol) {
    if (!(protocol.benign_ratio > 0.0 && protocol.benign_ratio < 1.0))
        throw ConfigError("benign_ratio must lie in (0, 1)");
    if (protocol.train_families.empty() || protocol.test_families.empty())
        throw ProtocolError("both train and test family sets must be non-empty");
    for (Family f : protocol.train_families) {
        if (f == Family::none) throw ProtocolError("'none' is not a malware family");
        if (protocol.test_families.contains(f))
            throw ProtocolError("family '" + std::string(to_string(f)) +
                                "' appears in both train and test sets");
    }
    if (protocol.test_families.contains(Family::none))
        throw ProtocolError("'none' is not a malware family");

    std::set<Family> present;
    std::vector<std::size_t> benign_rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& s = ds[i];
        if (s.label == Label::benign) {
            benign_rows.push_back(i);
        } else {
            if (!s.family) throw ProtocolError("malware sample " + std::to_string(i) + " has no family tag");
            present.insert(*s.family);
        }
    }
    for (const auto* set : {&protocol.train_families, &protocol.test_families})
        for (Family f : *set)
            if (!present.contains(f)) throw MissingFamilyError(std::string(to_string(f)));
    if (benign_rows.empty()) throw DataError("dataset has no benign samples to split");

    std::mt19937_64 rng(protocol.seed);
    std::shuffle(benign_rows.begin(), benign_rows.end(), rng);
    auto n_train_benign = static_cast<std::size_t>(
        std::llround(protocol.benign_ratio * static_cast<double>(benign_rows.size())));
    std::vector<bool> benign_in_train(ds.size(), false);
    for (std::size_t i = 0; i < n_train_benign; ++i) benign_in_train[benign_rows[i]] = true;

    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& s = ds[i];
        if (s.label == Label::benign) {
            (benign_in_train[i] ? train_rows : test_rows).push_back(i);
        } else if (protocol.train_families.contains(*s.family)) {
            train_rows.push_back(i);
        } else if (protocol.test_families.contains(*s.family)) {
            test_rows.push_back(i);
        }
    }
    return SplitPair{ds.subset(train_rows), ds.subset(test_rows), protocol.train_families,
                     protocol.test_families};
}

// ---- synthetic generator ----------------------------------------------------

GeneratorConfig default_generator_config() {
    // Log-space means: malware runs hotter on memory and TLB events than the benign
    // baseline, each family with its own offset so that held-out families differ from
    // the training families.
    auto dist = [](std::vector<double> mu, std::vector<double> sigma, std::vector<double> zp = {}) {
        return CounterDistribution{std::move(mu), std::move(sigma), std::move(zp)};
    };
    GeneratorConfig cfg;
    cfg.seed = 42;
    cfg.benign_count = 3600;
    cfg.benign = dist({9.0, 10.0, 13.0, 14.0}, {0.9, 0.8, 0.7, 0.6}, {0.15, 0.0, 0.0, 0.0});
    const std::vector<double> s{0.7, 0.7, 0.6, 0.5};
    cfg.families = {
        {Family::backdoor, {400, dist({10.5, 11.0, 13.5, 14.6}, s)}},
        {Family::worm, {400, dist({11.0, 10.8, 14.0, 14.8}, s)}},
        {Family::virus, {400, dist({10.8, 11.4, 13.2, 14.5}, s)}},
        {Family::rootkit, {400, dist({11.3, 11.2, 13.8, 15.0}, s)}},
        {Family::botnet, {400, dist({10.6, 11.6, 14.2, 14.4}, s)}},
        {Family::ransomware, {400, dist({11.1, 11.5, 13.6, 14.9}, s)}},
        {Family::spyware, {400, dist({10.7, 11.1, 14.1, 14.7}, s)}},
        {Family::adware, {400, dist({10.4, 10.9, 13.9, 14.3}, s)}},
        {Family::trojan, {400, dist({11.2, 11.3, 13.4, 14.6}, s)}},
    };
    return cfg;
}

GeneratorConfig with_counts(GeneratorConfig cfg, std::size_t per_family, std::size_t benign) {
    cfg.benign_count = benign;
    for (auto& [f, spec] : cfg.families) spec.count = per_family;
    return cfg;
}

namespace {

void validate_dist(const CounterDistribution& d, std::size_t n, const std::string& who) {
    if (d.mu.size() != n || d.sigma.size() != n)
        throw ConfigError(who + ": mu and sigma need " + std::to_string(n) + " entries");
    if (!d.zero_prob.empty() && d.zero_prob.size() != n)
        throw ConfigError(who + ": zero_prob needs " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(d.mu[j]) || !std::isfinite(d.sigma[j]) || d.sigma[j] < 0.0)
            throw ConfigError(who + ": mu must be finite and sigma finite and >= 0");
        if (!d.zero_prob.empty() && !(d.zero_prob[j] >= 0.0 && d.zero_prob[j] <= 1.0))
            throw ConfigError(who + ": zero_prob must lie in [0, 1]");
    }
}

void draw_rows(const CounterDistribution& d, std::size_t count, Label label, std::optional<Family> fam,
               std::mt19937_64& rng, std::vector<HpcSample>& out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        HpcSample s{{}, label, fam};
        s.features.reserve(d.mu.size());
        for (std::size_t j = 0; j < d.mu.size(); ++j) {
            double z = normal(rng);
            double u = unit(rng);
            bool zero = !d.zero_prob.empty() && u < d.zero_prob[j];
            s.features.push_back(zero ? 0.0 : std::round(std::exp(d.mu[j] + d.sigma[j] * z)));
        }
        out.push_back(std::move(s));
    }
}

}  // namespace

void validate(const GeneratorConfig& cfg) {
    std::size_t n = cfg.feature_names.size();
    if (n == 0) throw ConfigError("generator needs at least one feature name");
    validate_dist(cfg.benign, n, "benign");
    for (const auto& [f, spec] : cfg.families) {
        if (f == Family::none) throw ConfigError("'none' is not a malware family");
        validate_dist(spec.dist, n, std::string(to_string(f)));
    }
}

Dataset generate_synthetic(const GeneratorConfig& cfg) {
    validate(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::vector<HpcSample> out;
    draw_rows(cfg.benign, cfg.benign_count, Label::benign, Family::none, rng, out);
    for (Family f : kMalwareFamilies) {
        auto it = cfg.families.find(f);
        if (it == cfg.families.end()) continue;
        draw_rows(it->second.dist, it->second.count, Label::malware, f, rng, out);
    }
    return Dataset(cfg.feature_names, std::move(out), Provenance::synthetic);
}

// ---- scaling ------------------------------------------------------------------

ScalingParams fit_scaling(const Dataset& train) {
    if (train.empty()) throw EmptyDatasetError("cannot fit scaling on an empty training set");
    ScalingParams p;
    p.min = train[0].features;
    p.max = train[0].features;
    for (const auto& s : train.samples())
        for (std::size_t j = 0; j < s.features.size(); ++j) {
            p.min[j] = std::min(p.min[j], s.features[j]);
            p.max[j] = std::max(p.max[j], s.features[j]);
        }
    return p;
}

std::vector<double> apply_scaling(std::span<const double> x, const ScalingParams& p) {
    if (x.size() != p.min.size()) throw DimensionError(p.min.size(), x.size());
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        double range = p.max[j] - p.min[j];
        out[j] = range > 0.0 ? (x[j] - p.min[j]) / range : 0.0;
    }
    return out;
}

Dataset apply_scaling(const Dataset& ds, const ScalingParams& p) {
    std::vector<HpcSample> out;
    out.reserve(ds.size());
    for (const auto& s : ds.samples()) out.push_back({apply_scaling(s.features, p), s.label, s.family});
    return Dataset(ds.feature_names(), std::move(out), ds.provenance());
}

}  // namespace hmd
