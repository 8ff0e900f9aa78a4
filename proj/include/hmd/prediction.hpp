#pragma once

#include "hmd/dataset.hpp"
#include "hmd/error.hpp"

#include <cstddef>

namespace hmd {

// Label plus a calibrated confidence that the sample is malware. Scores strictly above
// 0.5 always carry label 1 and scores strictly below carry label 0; a score of exactly
// 0.5 follows the owning model's tie rule.
struct Prediction {
    Label label = Label::benign;
    double score = 0.0;

    bool operator==(const Prediction&) const = default;
};

inline void check_dimension(std::size_t expected, std::size_t got) {
    if (expected != got) throw DimensionError(expected, got);
}

}  // namespace hmd
