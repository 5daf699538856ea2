#include "pfc/measure.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace pfc {

namespace {
std::atomic<std::int64_t> g_contract_warnings{0};
}

std::int64_t contract_warning_count() { return g_contract_warnings.load(); }

Measure Measure::uniform(const Context& ctx) {
    Measure m;
    if (ctx.object_count() == 0)
        throw std::invalid_argument("Measure: context has no objects");
    m.weights_.assign(ctx.object_count(), 1.0 / static_cast<double>(ctx.object_count()));
    m.uniform_ = true;
    return m;
}

Measure Measure::from_weights(std::vector<double> raw) {
    if (raw.empty()) throw std::invalid_argument("Measure: empty weight vector");
    double total = 0.0;
    bool all_equal = true;
    for (double w : raw) {
        if (!(w > 0.0)) throw std::invalid_argument("Measure: every weight must be positive");
        if (w != raw.front()) all_equal = false;
        total += w;
    }
    Measure m;
    m.weights_.reserve(raw.size());
    for (double w : raw) m.weights_.push_back(w / total);
    m.uniform_ = all_equal;
    double check = 0.0;
    for (double w : m.weights_) check += w;
    if (std::abs(check - 1.0) > 1e-12)
        throw std::invalid_argument("Measure: normalized weights do not sum to 1");
    return m;
}

Measure Measure::for_context(const Context& ctx) {
    if (ctx.has_explicit_weights()) return from_weights(ctx.weights());
    return uniform(ctx);
}

double Measure::mass(const Bitset& objects) const {
    if (uniform_)
        return static_cast<double>(objects.count()) / static_cast<double>(weights_.size());
    double total = 0.0;
    objects.for_each_set([&](std::size_t g) { total += weights_[g]; });
    return total;
}

double probability(const Context& ctx, const Measure& mu, const LiteralSet& lits) {
    if (!lits.consistent()) {
        if (g_contract_warnings.fetch_add(1) == 0)
            std::cerr << "pfc: warning: probability() called with an inconsistent literal set\n";
        return 0.0;
    }
    return mu.mass(ctx.support(lits));
}

std::optional<double> rule_probability(const Context& ctx, const Measure& mu,
                                       const LiteralSet& premise, Literal conclusion) {
    RuleSupport s = rule_support(ctx, mu, premise, conclusion);
    if (!s.defined()) return std::nullopt;
    return s.eta();
}

RuleSupport rule_support(const Context& ctx, const Measure& mu,
                         const LiteralSet& premise, Literal conclusion) {
    Bitset sup = ctx.support(premise);
    RuleSupport r;
    r.n_premise = static_cast<std::int64_t>(sup.count());
    r.premise_mass = mu.mass(sup);
    sup &= ctx.literal_column(conclusion);
    r.n_both = static_cast<std::int64_t>(sup.count());
    r.both_mass = mu.mass(sup);
    return r;
}

bool eta_greater(const RuleSupport& a, const RuleSupport& b, bool uniform) {
    if (uniform)  // a.n_both/a.n_premise > b.n_both/b.n_premise, exactly
        return a.n_both * b.n_premise > b.n_both * a.n_premise;
    return a.both_mass * b.premise_mass > b.both_mass * a.premise_mass;
}

} // namespace pfc
