#pragma once

#include <cstdint>
#include <vector>

#include "pfc/context.hpp"

namespace pfc {

// Recipe for a labeled categorical benchmark: class prototypes drawn with a
// minimum pairwise Hamming distance, copied with optional per-cell noise.
struct SyntheticSpec {
    std::int32_t n_classes = 12;
    std::int32_t copies_per_class = 30;
    std::int32_t n_attributes = 24;
    std::int32_t values_per_attribute = 8;
    std::int32_t min_prototype_distance = -1;  // -1: n_attributes / 2
    double noise_rate = 0.0;                   // per-cell resample probability

    std::int32_t distance() const {
        return min_prototype_distance >= 0 ? min_prototype_distance : n_attributes / 2;
    }
    void validate() const;  // throws std::invalid_argument
};

struct SyntheticData {
    Context ctx;                                        // objects in shuffled order
    std::vector<std::int32_t> labels;                   // object index -> class
    std::vector<std::vector<std::int32_t>> prototypes;  // class -> value per attribute
    std::int64_t noisy_cells = 0;                       // cells differing from the prototype
};

// Deterministic for a fixed (spec, seed) pair on every platform: all draws go
// through one 64-bit generator with hand-rolled rejection sampling, never
// through distribution classes with unspecified mappings.
SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

} // namespace pfc
