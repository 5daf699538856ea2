#pragma once

#include <cstdint>
#include <vector>

#include "pfc/context.hpp"
#include "pfc/measure.hpp"
#include "pfc/rules.hpp"

namespace pfc {

struct MinerConfig {
    MineMode mode = MineMode::Fisher;
    double alpha = 0.01;               // Fisher gate significance level
    std::int32_t max_premise_len = 5;  // premise literal cap
    std::int32_t beam_width = 0;       // 0 = unbounded (Fisher search only)
    bool mscr_strict = false;          // keep only maximal-eta terminals per conclusion
    std::int32_t threads = 1;

    void validate() const;  // throws std::invalid_argument on out-of-range values
};

// Terminal causal rules predicting one conclusion.
//
// Exact mode enumerates the whole premise lattice (consistent premises with
// positive support, up to max_premise_len), keeps the causal rules — every
// strict sub-premise has strictly smaller conditional probability — and
// returns those with no causal strict refinement within the cap. Refused for
// signatures above 20 atoms.
//
// Fisher mode grows premises one literal at a time; a step is admitted when
// it strictly raises the conditional probability AND its 2x2 refinement table
// passes the one-sided Fisher test below alpha. Terminals are premises with
// no admissible extension; the empty premise is never stored (it was never
// admitted by a gate). Requires a uniform measure.
std::vector<CausalRule> mine_conclusion(const Context& ctx, const Measure& mu,
                                        Literal conclusion, const MinerConfig& cfg);

// All conclusions (both signs of every atom), deterministic canonical order.
// Parallelizes over conclusions; the merge is order-stable.
RuleSet mine_rules(const Context& ctx, const Measure& mu, const MinerConfig& cfg);

} // namespace pfc
