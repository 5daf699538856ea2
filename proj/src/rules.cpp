#include "pfc/rules.hpp"

#include <algorithm>
#include <stdexcept>

namespace pfc {

const std::vector<std::int32_t> RuleSet::empty_index_{};

CausalRule::CausalRule(LiteralSet prem, Literal concl)
    : premise(std::move(prem)), conclusion(concl) {
    if (premise.contains(conclusion) || premise.contains(conclusion.negated()))
        throw std::invalid_argument("CausalRule: conclusion atom may not appear in the premise");
}

std::string RuleSet::key(const LiteralSet& premise, Literal conclusion) {
    std::string k = std::to_string(conclusion.code());
    for (Literal l : premise) {
        k.push_back(':');
        k += std::to_string(l.code());
    }
    return k;
}

bool RuleSet::add(CausalRule r) {
    auto [it, fresh] = keys_.try_emplace(key(r.premise, r.conclusion),
                                         static_cast<std::int32_t>(rules_.size()));
    if (!fresh) return false;
    const std::int32_t id = it->second;
    by_concl_[r.conclusion.code()].push_back(id);
    for (Literal l : r.premise) by_prem_lit_[l.code()].push_back(id);
    rules_.push_back(std::move(r));
    return true;
}

bool RuleSet::contains(const LiteralSet& premise, Literal conclusion) const {
    return keys_.count(key(premise, conclusion)) != 0;
}

const std::vector<std::int32_t>& RuleSet::by_conclusion(Literal l) const {
    auto it = by_concl_.find(l.code());
    return it == by_concl_.end() ? empty_index_ : it->second;
}

const std::vector<std::int32_t>& RuleSet::by_premise_literal(Literal l) const {
    auto it = by_prem_lit_.find(l.code());
    return it == by_prem_lit_.end() ? empty_index_ : it->second;
}

std::vector<std::int32_t> RuleSet::premise_satisfied_in(const LiteralSet& L) const {
    std::vector<std::int32_t> out;
    for (std::size_t i = 0; i < rules_.size(); ++i)
        if (rules_[i].premise.subset_of(L)) out.push_back(static_cast<std::int32_t>(i));
    return out;
}

void RuleSet::sort_canonical() {
    std::sort(rules_.begin(), rules_.end(), [](const CausalRule& a, const CausalRule& b) {
        if (a.conclusion.code() != b.conclusion.code())
            return a.conclusion.code() < b.conclusion.code();
        return a.premise < b.premise;
    });
    keys_.clear();
    by_concl_.clear();
    by_prem_lit_.clear();
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        const std::int32_t id = static_cast<std::int32_t>(i);
        keys_.emplace(key(rules_[i].premise, rules_[i].conclusion), id);
        by_concl_[rules_[i].conclusion.code()].push_back(id);
        for (Literal l : rules_[i].premise) by_prem_lit_[l.code()].push_back(id);
    }
}

bool is_subrule(const CausalRule& r1, const CausalRule& r2) {
    return r1.conclusion == r2.conclusion && r1.premise.size() < r2.premise.size() &&
           r1.premise.subset_of(r2.premise);
}

bool refines(const Context& ctx, const Measure& mu,
             const CausalRule& stronger, const CausalRule& weaker) {
    if (!is_subrule(weaker, stronger)) return false;
    RuleSupport a = rule_support(ctx, mu, stronger.premise, stronger.conclusion);
    RuleSupport b = rule_support(ctx, mu, weaker.premise, weaker.conclusion);
    if (!a.defined() || !b.defined()) return false;
    return eta_greater(a, b, mu.is_uniform());
}

bool is_causal_rule(const Context& ctx, const Measure& mu,
                    const LiteralSet& premise, Literal conclusion) {
    RuleSupport full = rule_support(ctx, mu, premise, conclusion);
    if (!full.defined()) return false;

    // every strict subset of the premise must give a strictly smaller eta;
    // subsets of a positively supported premise always have support
    const auto& lits = premise.literals();
    const std::size_t k = lits.size();
    for (std::uint32_t mask = 0; mask + 1 < (1u << k); ++mask) {
        std::vector<Literal> sub;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) sub.push_back(lits[i]);
        RuleSupport s = rule_support(ctx, mu, LiteralSet(std::move(sub)), conclusion);
        if (!eta_greater(full, s, mu.is_uniform())) return false;
    }
    return true;
}

} // namespace pfc
