#pragma once

// Shared fixtures: the two hand-checked toy contexts plus a random-context
// generator used by the property suites. All random draws go through the
// bounded() helper so runs are reproducible across platforms.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pfc/context.hpp"

namespace pfc::fixtures {

// Four objects over three boolean attributes. Every causal and terminal rule
// of this context is derived by hand in test_oracle.cpp.
inline Context toy_context() {
    Schema s;
    for (const char* n : {"a", "b", "c"})
        s.attributes.push_back({n, Encoding::Boolean, {}});
    const std::vector<RawRow> rows = {
        {"g1", {"1", "1", "1"}, 1.0},
        {"g2", {"1", "1", "0"}, 1.0},
        {"g3", {"0", "1", "1"}, 1.0},
        {"g4", {"0", "0", "0"}, 1.0},
    };
    return build_context(s, rows);
}

// Two independent boolean attributes, all four combinations present once.
// The only terminal rules are empty-premise ones with conditional
// probability 1/2, so the full-system closure laws fail here while the
// probability-1 subsystem is empty and passes trivially.
inline Context independence_context() {
    Schema s;
    for (const char* n : {"a", "b"})
        s.attributes.push_back({n, Encoding::Boolean, {}});
    const std::vector<RawRow> rows = {
        {"g1", {"1", "1"}, 1.0},
        {"g2", {"1", "0"}, 1.0},
        {"g3", {"0", "1"}, 1.0},
        {"g4", {"0", "0"}, 1.0},
    };
    return build_context(s, rows);
}

inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = (0 - n) % n;  // reject the biased low range
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= limit) return r % n;
    }
}

// Random boolean context with missing cells: 1..max_objects objects over
// 1..max_atoms attributes, each cell missing with probability ~15%.
inline Context random_context(std::mt19937_64& rng, int max_objects = 8, int max_atoms = 5) {
    const int nobj = 1 + static_cast<int>(bounded(rng, static_cast<std::uint64_t>(max_objects)));
    const int natom = 1 + static_cast<int>(bounded(rng, static_cast<std::uint64_t>(max_atoms)));
    Schema s;
    for (int a = 0; a < natom; ++a)
        s.attributes.push_back({"a" + std::to_string(a), Encoding::Boolean, {}});
    std::vector<RawRow> rows;
    for (int g = 0; g < nobj; ++g) {
        RawRow r;
        r.name = "g" + std::to_string(g);
        for (int a = 0; a < natom; ++a) {
            const std::uint64_t roll = bounded(rng, 100);
            r.cells.push_back(roll < 15 ? "" : (roll & 1 ? "1" : "0"));
        }
        rows.push_back(std::move(r));
    }
    return build_context(s, rows);
}

// what() of the Ex thrown by fn; empty when nothing is thrown
template <typename Ex, typename Fn>
std::string thrown_what(Fn&& fn) {
    try {
        fn();
    } catch (const Ex& e) {
        return e.what();
    }
    return {};
}

} // namespace pfc::fixtures
