#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfc/context.hpp"
#include "pfc/measure.hpp"
#include "pfc/rules.hpp"

namespace pfc {

// Brute-force reference implementations, deliberately independent of the
// miner's bitset machinery: satisfaction is re-derived per object from the
// raw incidence, probabilities from explicit sums. Meant for cross-checking
// on small inputs only.

struct OracleBudget {
    std::int32_t max_objects = 8;
    std::int32_t max_atoms = 5;
    std::int32_t max_premise = 3;

    void validate() const;  // throws when the implied evaluation count is excessive
};

// All causal rules up to the premise cap: every strict sub-premise has a
// strictly smaller conditional probability, compared exactly.
std::vector<CausalRule> brute_force_causal_rules(const Context& ctx, const Measure& mu,
                                                 const OracleBudget& budget);

// Causal rules with no causal strict refinement within the premise cap.
std::vector<CausalRule> brute_force_terminals(const Context& ctx, const Measure& mu,
                                              const OracleBudget& budget);

// ============================================================================
// Law verification on small contexts
// ============================================================================

enum class RuleSystem {
    EtaOne,  // terminals whose conditional probability is exactly 1
    Full,    // all mined terminals
};

struct TheoremReport {
    struct Failure {
        std::string law;     // which claimed property failed
        std::string detail;  // human-readable counterexample
    };
    std::vector<Failure> failures;
    std::int64_t seeds_checked = 0;
    std::int64_t concepts_checked = 0;
    std::int64_t fixed_points_checked = 0;

    bool all_passed() const { return failures.empty(); }
};

// Exhaustively checks, over every consistent literal set of a small context:
//  1. closure consistency: the prediction closure of any satisfiable set is
//     itself satisfiable and non-contradictory;
//  2. concept embedding: every classical formal concept embeds into a
//     prediction fixed point, and each fixed point's objects are exactly the
//     union of the classical extents it absorbs;
//  3. climb/closure agreement: the score hill-climb started from a
//     satisfiable set reaches the prediction closure.
// The rule system is mined exactly with premise cap |atoms|-1 and optionally
// restricted to probability-1 terminals. The full system is allowed to fail
// these laws; failures are reported, not thrown.
TheoremReport verify_theorems(const Context& ctx, const Measure& mu,
                              const OracleBudget& budget,
                              RuleSystem system = RuleSystem::EtaOne,
                              double epsilon = 1e-4);

} // namespace pfc
