#pragma once

#include "hmd/classifier.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hmd {

// Abstract hardware cost estimates. Nothing here models a real synthesis tool: every
// number is the static primitive count of one worst-case inference pushed through a
// documented cost table.

enum class Primitive { compare, add, multiply, divide, exp_eval, tanh_eval, memory_word };
inline constexpr std::size_t kPrimitiveCount = 7;

std::string_view to_string(Primitive p);

struct PrimitiveCost {
    std::uint64_t cycles = 0;
    std::uint64_t bram = 0;
    std::uint64_t dsp = 0;
    std::uint64_t ff = 0;
    std::uint64_t lut = 0;

    bool operator==(const PrimitiveCost&) const = default;
};

struct CostTable {
    std::array<PrimitiveCost, kPrimitiveCount> costs{};
    double clock_period_ns = 25.0;

    const PrimitiveCost& operator[](Primitive p) const { return costs[static_cast<std::size_t>(p)]; }
    PrimitiveCost& operator[](Primitive p) { return costs[static_cast<std::size_t>(p)]; }

    // Calibrated so one linear SVM inference costs 52 cycles (1300 ns at 25 ns).
    static CostTable default_table();
    // Every primitive costs 1 cycle and 1 unit of each resource; clock 1 ns.
    static CostTable unit();

    bool operator==(const CostTable&) const = default;
};

void validate(const CostTable& t);

struct OpCounts {
    std::array<std::uint64_t, kPrimitiveCount> n{};

    std::uint64_t& operator[](Primitive p) { return n[static_cast<std::size_t>(p)]; }
    std::uint64_t operator[](Primitive p) const { return n[static_cast<std::size_t>(p)]; }
    OpCounts& operator+=(const OpCounts& o);
    std::uint64_t total() const;
    bool operator==(const OpCounts&) const = default;
};

OpCounts operator+(OpCounts a, const OpCounts& b);

// `core` covers the per-model datapath (distances, layers, tree walks, rule search);
// `aggregation` covers vote tallies and score normalisation on top of it.
struct OpBreakdown {
    OpCounts core;
    OpCounts aggregation;

    OpCounts total() const { return core + aggregation; }
};

OpBreakdown count_primitives(const TrainedModel& m);

struct CostReport {
    std::uint64_t latency_cycles = 0;
    double latency_ns = 0.0;
    std::uint64_t interval_cycles = 1;  // next input accepted one cycle after the last latency cycle
    std::uint64_t bram = 0;
    std::uint64_t dsp = 0;
    std::uint64_t ff = 0;
    std::uint64_t lut = 0;
    std::uint64_t rme = 0;  // bram + dsp + ff + lut

    bool operator==(const CostReport&) const = default;
};

CostReport cost_of(const OpCounts& ops, const CostTable& t);
CostReport estimate_cost(const TrainedModel& m, const CostTable& t);

using NamedCost = std::pair<std::string, CostReport>;

// Descending by RME, then latency, then ascending by name.
std::vector<NamedCost> rank_models(std::vector<NamedCost> reports);

// model,latency_cycles,latency_ns,interval,bram,dsp,ff,lut,rme
std::string cost_csv(const std::vector<NamedCost>& reports);

}  // namespace hmd
