#pragma once

#include <cstdint>
#include <vector>

#include "pfc/context.hpp"
#include "pfc/rules.hpp"

namespace pfc {

// ============================================================================
// Prediction closure
// ============================================================================

struct ClosureResult {
    LiteralSet literals;  // least fixed point reached (flagged if inconsistent)
    bool consistent = true;
    std::int32_t steps = 0;  // number of literals added
};

// One parallel application of the prediction operator: L plus the conclusions
// of every rule whose premise is contained in L. A complementary conclusion
// makes the result inconsistent (flagged, not dropped).
ClosureResult predict_step(const RuleSet& rules, const LiteralSet& state);

// Iterate prediction to its least fixed point. Terminates after at most one
// addition per literal of the signature; an inconsistent fixed point is
// returned with the flag down rather than swallowed.
ClosureResult closure(const RuleSet& rules, const LiteralSet& state);

// ============================================================================
// Consistency score
// ============================================================================

struct PredictionState {
    LiteralSet literals;
    std::vector<std::int32_t> confirmed;  // rules with premise held and conclusion present
    std::vector<std::int32_t> refuted;    // rules with premise held and conclusion contradicted
    double score = 0.0;                   // sum of confirmed weights minus refuted weights
};

// Score a literal set against a rule system: each rule whose premise is
// contained in the set contributes +w when its conclusion is present and -w
// when the complementary literal is present, where w = -ln(1 + eps - eta).
PredictionState consistency_score(const RuleSet& rules, const LiteralSet& state,
                                  double epsilon);

// ============================================================================
// Consistency hill-climb
// ============================================================================

enum class StepAction { Added, Removed, Fixpoint };

struct StepResult {
    LiteralSet literals;
    StepAction action = StepAction::Fixpoint;
    Literal literal{0, false};  // the literal added or removed (valid unless Fixpoint)
    double delta = 0.0;         // score gain of the applied move (> 0 unless Fixpoint)
};

// One move of the score hill-climb. Additions range over literals predicted
// by some rule with satisfied premise and compatible with the current set;
// removals range over the current set. The better of the best addition and
// best removal is applied when its gain is positive; ties between the two
// kinds prefer removal, ties within a kind prefer the smallest literal code.
StepResult consistency_step(const RuleSet& rules, const LiteralSet& state,
                            double epsilon);

struct FixpointResult {
    LiteralSet literals;
    double score = 0.0;
    std::int64_t steps = 0;
};

// Iterate consistency_step until no move has positive gain. Every applied
// move strictly increases the score, so the iteration terminates; max_steps
// (0 = automatic) is a hard safety bound.
FixpointResult consistency_fixpoint(const RuleSet& rules, LiteralSet state,
                                    double epsilon, std::int64_t max_steps = 0);

// Number of hill-climb moves applied so far, process-wide, whose recomputed
// score gain failed to be strictly positive. Stays zero unless the
// incremental bookkeeping disagrees with the definition.
std::int64_t fixpoint_violation_count();

// ============================================================================
// Clustering by shared fixed points
// ============================================================================

struct FixedPointConcept {
    LiteralSet intent;             // the common fixed point
    std::vector<ObjectId> seeds;   // objects whose hill-climb converges to it
    std::vector<ObjectId> extent;  // seeds plus objects whose closure lands on it
    double score = 0.0;            // consistency score of the intent
};

// Run the hill-climb from every object description and group objects by the
// fixed point they reach (the seeds); the extent additionally collects every
// object whose prediction closure equals the intent. Concepts are ordered by
// seed count (descending), then by intent. Deterministic for any thread count.
std::vector<FixedPointConcept> cluster(const Context& ctx, const RuleSet& rules,
                                       double epsilon, std::int32_t threads = 1);

} // namespace pfc
