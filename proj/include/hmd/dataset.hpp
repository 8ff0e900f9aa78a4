#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hmd {

enum class Label : int { benign = 0, malware = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
Label label_from_int(int v);

// Malware families from the usual taxonomy; `none` tags benign programs.
enum class Family { none, backdoor, worm, virus, rootkit, botnet, ransomware, spyware, adware, trojan };

inline constexpr std::size_t kFamilyCount = 10;

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view name);
// All malware families in canonical order (excludes `none`).
std::span<const Family> malware_families();

// One HPC observation. `family` is absent when the source carried no family column.
struct HpcSample {
    std::vector<double> features;
    Label label = Label::benign;
    std::optional<Family> family;

    bool operator==(const HpcSample&) const = default;
};

enum class Provenance { ingested, synthetic };

// Feature names used by the selected four-counter feature set.
std::vector<std::string> default_feature_names();

class Dataset {
public:
    Dataset() = default;
    // Validates shape (every sample has feature_names.size() finite values) and the
    // label/family agreement rule. Throws DataError.
    Dataset(std::vector<std::string> feature_names, std::vector<HpcSample> samples,
            Provenance provenance = Provenance::ingested);

    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    std::size_t feature_count() const noexcept { return feature_names_.size(); }

    const std::vector<HpcSample>& samples() const noexcept { return samples_; }
    const HpcSample& operator[](std::size_t i) const { return samples_[i]; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    Provenance provenance() const noexcept { return provenance_; }

    std::vector<double> column(std::size_t feature) const;
    std::vector<int> labels() const;
    std::size_t count(Label l) const;
    bool has_both_classes() const { return count(Label::benign) > 0 && count(Label::malware) > 0; }

    // Keeps only the listed feature columns, in the order given.
    Dataset select_features(std::span<const std::size_t> indices) const;
    // Samples at the given row indices (duplicates allowed), same schema.
    Dataset subset(std::span<const std::size_t> rows) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<std::string> feature_names_;
    std::vector<HpcSample> samples_;
    Provenance provenance_ = Provenance::ingested;
};

// ---- CSV ------------------------------------------------------------------
//
// Header: <feature>,...,label[,family]. Rows keep file order. Feature values must be
// finite and non-negative; label is 0 or 1; family (when present) must agree with label.

Dataset parse_csv(const std::filesystem::path& path);
Dataset parse_csv_text(std::string_view text);
std::string to_csv(const Dataset& ds);
void write_csv(const Dataset& ds, const std::filesystem::path& path);

// ---- zero-day split -------------------------------------------------------

struct SplitPair {
    Dataset train;
    Dataset test;
    std::set<Family> train_families;
    std::set<Family> test_families;
};

struct SplitProtocol {
    std::set<Family> train_families{Family::backdoor, Family::worm, Family::virus, Family::rootkit,
                                    Family::botnet};
    std::set<Family> test_families{Family::ransomware, Family::spyware, Family::adware,
                                   Family::trojan};
    double benign_ratio = 0.8;
    std::uint64_t seed = 7;
};

// Routes malware by family membership and splits benign samples by a seeded shuffle.
// Malware of a family named in neither set is dropped.
SplitPair zero_day_split(const Dataset& ds, const SplitProtocol& protocol);

// ---- synthetic generator --------------------------------------------------

struct CounterDistribution {
    std::vector<double> mu;         // log-space mean per counter
    std::vector<double> sigma;      // log-space stddev per counter
    std::vector<double> zero_prob;  // probability the counter reads exactly 0 (may be empty)
};

struct FamilySpec {
    std::size_t count = 0;
    CounterDistribution dist;
};

struct GeneratorConfig {
    std::uint64_t seed = 42;
    std::size_t benign_count = 0;
    CounterDistribution benign;
    std::map<Family, FamilySpec> families;
    std::vector<std::string> feature_names = default_feature_names();
};

// The default benchmark: nine families of 400 samples and 3,600 benign samples.
GeneratorConfig default_generator_config();
// Same distributions with the counts replaced.
GeneratorConfig with_counts(GeneratorConfig cfg, std::size_t per_family, std::size_t benign);

void validate(const GeneratorConfig& cfg);

// Log-normal counters rounded to whole event counts. Benign rows come first, then
// families in canonical order. Pure function of the config.
Dataset generate_synthetic(const GeneratorConfig& cfg);

// ---- scaling ---------------------------------------------------------------

struct ScalingParams {
    std::vector<double> min;
    std::vector<double> max;

    bool operator==(const ScalingParams&) const = default;
};

ScalingParams fit_scaling(const Dataset& train);
// (v - min) / (max - min), 0 for constant features; values outside the fitted range are
// not clamped.
std::vector<double> apply_scaling(std::span<const double> x, const ScalingParams& p);
Dataset apply_scaling(const Dataset& ds, const ScalingParams& p);

}  // namespace hmd
