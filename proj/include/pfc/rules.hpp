#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfc/context.hpp"
#include "pfc/measure.hpp"

namespace pfc {

// Causal rule H1 & ... & Hk -> C. The conclusion and its negation never occur
// in the premise; the premise is consistent (LiteralSet invariant).
struct CausalRule {
    LiteralSet premise;
    Literal conclusion;
    std::int64_t n_premise = 0;          // objects satisfying the premise
    std::int64_t n_both = 0;             // ... and the conclusion
    double eta = 0.0;                    // conditional probability of the conclusion
    std::optional<double> p_value;       // Fisher p of the admitting step (statistical mode)
    std::int32_t chain_len = 0;          // refinement steps from the empty premise

    CausalRule() = default;
    CausalRule(LiteralSet prem, Literal concl);  // validates the premise/conclusion contract

    friend bool operator==(const CausalRule& a, const CausalRule& b) {
        return a.premise == b.premise && a.conclusion == b.conclusion;
    }
};

enum class MineMode { Exact, Fisher };

// Deduplicated rule collection with conclusion and premise-membership indices.
class RuleSet {
public:
    // returns false when an identical (premise, conclusion) rule is already present
    bool add(CausalRule r);

    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }
    const CausalRule& operator[](std::size_t i) const { return rules_[i]; }
    const std::vector<CausalRule>& rules() const { return rules_; }

    bool contains(const LiteralSet& premise, Literal conclusion) const;

    // indices of rules concluding l
    const std::vector<std::int32_t>& by_conclusion(Literal l) const;
    // indices of rules whose premise contains l
    const std::vector<std::int32_t>& by_premise_literal(Literal l) const;
    // indices of rules with premise contained in L, ascending
    std::vector<std::int32_t> premise_satisfied_in(const LiteralSet& L) const;

    // keep only rules accepted by pred(rule); reindexes
    template <typename Pred>
    RuleSet filtered(Pred&& pred) const {
        RuleSet out;
        out.mode = mode;
        out.alpha = alpha;
        out.max_premise_len = max_premise_len;
        for (const CausalRule& r : rules_)
            if (pred(r)) out.add(r);
        return out;
    }

    // deterministic order: conclusion code, then premise lexicographic
    void sort_canonical();

    MineMode mode = MineMode::Exact;
    double alpha = 0.01;
    std::int32_t max_premise_len = 0;

private:
    static std::string key(const LiteralSet& premise, Literal conclusion);

    std::vector<CausalRule> rules_;
    std::unordered_map<std::string, std::int32_t> keys_;
    std::unordered_map<std::int32_t, std::vector<std::int32_t>> by_concl_;
    std::unordered_map<std::int32_t, std::vector<std::int32_t>> by_prem_lit_;
    static const std::vector<std::int32_t> empty_index_;
};

// r1 is a strict sub-rule of r2: same conclusion, premise strictly contained.
bool is_subrule(const CausalRule& r1, const CausalRule& r2);

// stronger refines weaker: weaker is a strict sub-rule and the conditional
// probability strictly grows (exact comparison under a uniform measure)
bool refines(const Context& ctx, const Measure& mu,
             const CausalRule& stronger, const CausalRule& weaker);

// A rule is causal when every strict sub-premise rule has strictly smaller
// conditional probability. The empty premise is vacuously causal; a premise
// with zero support has no conditional probability and is never causal.
bool is_causal_rule(const Context& ctx, const Measure& mu,
                    const LiteralSet& premise, Literal conclusion);

} // namespace pfc
