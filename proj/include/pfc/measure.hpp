#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pfc/context.hpp"

namespace pfc {

// Probability measure over the objects of a context. Weights are strictly
// positive and sum to 1 (validated to 1e-12). The uniform case is tracked so
// rule evaluation can run on exact integer counts.
class Measure {
public:
    static Measure uniform(const Context& ctx);
    // normalizes raw weights; throws on non-positive entries
    static Measure from_weights(std::vector<double> raw);
    // uniform unless the context carries an explicit weight column
    static Measure for_context(const Context& ctx);

    double weight(ObjectId g) const { return weights_[g]; }
    std::size_t size() const { return weights_.size(); }
    bool is_uniform() const { return uniform_; }

    double mass(const Bitset& objects) const;

private:
    std::vector<double> weights_;
    bool uniform_ = false;
};

// nu: total measure of the objects satisfying every literal of L.
// An inconsistent L is a caller contract violation: returns 0.0 and bumps
// the contract warning counter.
double probability(const Context& ctx, const Measure& mu, const LiteralSet& lits);

std::int64_t contract_warning_count();

// Conditional probability of `conclusion` given `premise`:
// nu(premise & conclusion) / nu(premise); nullopt when nu(premise) = 0.
std::optional<double> rule_probability(const Context& ctx, const Measure& mu,
                                       const LiteralSet& premise, Literal conclusion);

// Support of a rule as (weighted) evaluation counts. Under a uniform measure
// these are exact object counts and eta == both / premise_mass.
struct RuleSupport {
    std::int64_t n_premise = 0;  // objects satisfying the premise
    std::int64_t n_both = 0;     // objects satisfying premise and conclusion
    double premise_mass = 0.0;
    double both_mass = 0.0;

    bool defined() const { return premise_mass > 0.0; }
    double eta() const { return both_mass / premise_mass; }
};

RuleSupport rule_support(const Context& ctx, const Measure& mu,
                         const LiteralSet& premise, Literal conclusion);

// Strict comparison of two conditional probabilities a.eta() > b.eta(),
// exact (integer cross-multiplication) under a uniform measure. Both supports
// must be defined.
bool eta_greater(const RuleSupport& a, const RuleSupport& b, bool uniform);

} // namespace pfc
