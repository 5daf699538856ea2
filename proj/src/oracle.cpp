#include "pfc/oracle.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include "pfc/fixpoint.hpp"
#include "pfc/miner.hpp"

namespace pfc {

namespace {

// Satisfaction recomputed from the raw incidence and known-attribute masks;
// shares nothing with the literal-column path used by the miner.
bool oracle_sat(const Context& ctx, ObjectId g, Literal l) {
    if (l.negative)
        return ctx.group_known(g, ctx.atom(l.atom).group) && !ctx.incident(g, l.atom);
    return ctx.incident(g, l.atom);
}

bool oracle_sat_all(const Context& ctx, ObjectId g, const std::vector<Literal>& lits) {
    for (Literal l : lits)
        if (!oracle_sat(ctx, g, l)) return false;
    return true;
}

struct OSupport {
    std::int64_t prem_n = 0;
    std::int64_t both_n = 0;
    double prem_m = 0.0;
    double both_m = 0.0;
};

OSupport o_support(const Context& ctx, const Measure& mu, const std::vector<Literal>& premise,
                   Literal concl) {
    OSupport s;
    for (ObjectId g = 0; g < static_cast<ObjectId>(ctx.object_count()); ++g) {
        if (!oracle_sat_all(ctx, g, premise)) continue;
        ++s.prem_n;
        s.prem_m += mu.weight(g);
        if (oracle_sat(ctx, g, concl)) {
            ++s.both_n;
            s.both_m += mu.weight(g);
        }
    }
    if (mu.is_uniform()) {
        // same expression the miner uses, so stored eta values match bitwise
        const double n = static_cast<double>(ctx.object_count());
        s.prem_m = static_cast<double>(s.prem_n) / n;
        s.both_m = static_cast<double>(s.both_n) / n;
    }
    return s;
}

// strict eta(a) > eta(b); integer cross-multiplication under uniform measures
bool o_eta_greater(const OSupport& a, const OSupport& b, bool uniform) {
    if (uniform) return a.both_n * b.prem_n > b.both_n * a.prem_n;
    return a.both_m * b.prem_m > b.both_m * a.prem_m;
}

// consistent premises over atoms other than the conclusion's, sizes 0..cap,
// in ascending literal-code order
void enumerate_premises(const Context& ctx, AtomId concl_atom, std::int32_t cap,
                        AtomId next_atom, std::vector<Literal>& cur,
                        std::vector<std::vector<Literal>>& out) {
    out.push_back(cur);
    if (static_cast<std::int32_t>(cur.size()) >= cap) return;
    for (AtomId a = next_atom; a < static_cast<AtomId>(ctx.atom_count()); ++a) {
        if (a == concl_atom) continue;
        for (bool negative : {false, true}) {
            cur.push_back({a, negative});
            enumerate_premises(ctx, concl_atom, cap, a + 1, cur, out);
            cur.pop_back();
        }
    }
}

struct OracleRule {
    CausalRule rule;
    OSupport sup;
};

void check_budget(const Context& ctx, const OracleBudget& budget) {
    budget.validate();
    if (static_cast<std::int32_t>(ctx.object_count()) > budget.max_objects)
        throw std::invalid_argument("context exceeds the oracle object budget");
    if (static_cast<std::int32_t>(ctx.atom_count()) > budget.max_atoms)
        throw std::invalid_argument("context exceeds the oracle atom budget");
}

std::vector<OracleRule> enumerate_causal(const Context& ctx, const Measure& mu,
                                         const OracleBudget& budget) {
    check_budget(ctx, budget);
    const bool uniform = mu.is_uniform();
    std::vector<OracleRule> out;

    for (std::int32_t code = 0; code < static_cast<std::int32_t>(ctx.literal_count());
         ++code) {
        const Literal concl = Literal::from_code(code);
        std::vector<std::vector<Literal>> premises;
        std::vector<Literal> cur;
        enumerate_premises(ctx, concl.atom, budget.max_premise, 0, cur, premises);

        for (const std::vector<Literal>& premise : premises) {
            const OSupport sup = o_support(ctx, mu, premise, concl);
            if (sup.prem_n == 0) continue;  // no conditional probability, not causal

            bool causal = true;
            const std::size_t k = premise.size();
            std::vector<Literal> sub;
            for (std::uint32_t mask = 0; causal && mask + 1 < (1u << k); ++mask) {
                sub.clear();
                for (std::size_t i = 0; i < k; ++i)
                    if (mask & (1u << i)) sub.push_back(premise[i]);
                if (!o_eta_greater(sup, o_support(ctx, mu, sub, concl), uniform))
                    causal = false;
            }
            if (!causal) continue;

            CausalRule r(LiteralSet(premise), concl);
            r.n_premise = sup.prem_n;
            r.n_both = sup.both_n;
            r.eta = sup.both_m / sup.prem_m;
            r.chain_len = static_cast<std::int32_t>(premise.size());
            out.push_back({std::move(r), sup});
        }
    }
    return out;
}

std::string set_label(const Context& ctx, const LiteralSet& ls) {
    std::string s = "{";
    bool first = true;
    for (Literal l : ls) {
        if (!first) s += ", ";
        s += ctx.literal_label(l);
        first = false;
    }
    return s + "}";
}

std::string intent_key(const LiteralSet& ls) {
    std::string k;
    for (Literal l : ls) {
        k += std::to_string(l.code());
        k += ':';
    }
    return k;
}

} // namespace

void OracleBudget::validate() const {
    if (max_objects < 1 || max_objects > 8)
        throw std::invalid_argument("oracle object budget must lie in [1, 8]");
    if (max_atoms < 1 || max_atoms > 5)
        throw std::invalid_argument("oracle atom budget must lie in [1, 5]");
    if (max_premise < 0 || max_premise > 3)
        throw std::invalid_argument("oracle premise budget must lie in [0, 3]");
}

std::vector<CausalRule> brute_force_causal_rules(const Context& ctx, const Measure& mu,
                                                 const OracleBudget& budget) {
    std::vector<CausalRule> out;
    for (OracleRule& r : enumerate_causal(ctx, mu, budget)) out.push_back(std::move(r.rule));
    return out;
}

std::vector<CausalRule> brute_force_terminals(const Context& ctx, const Measure& mu,
                                              const OracleBudget& budget) {
    const std::vector<OracleRule> causal = enumerate_causal(ctx, mu, budget);
    const bool uniform = mu.is_uniform();
    std::vector<CausalRule> out;
    for (const OracleRule& p : causal) {
        bool refined = false;
        for (const OracleRule& q : causal) {
            if (q.rule.conclusion != p.rule.conclusion) continue;
            if (q.rule.premise.size() <= p.rule.premise.size()) continue;
            if (!p.rule.premise.subset_of(q.rule.premise)) continue;
            if (o_eta_greater(q.sup, p.sup, uniform)) {
                refined = true;
                break;
            }
        }
        if (!refined) out.push_back(p.rule);
    }
    return out;
}

// ============================================================================
// Law verification
// ============================================================================

TheoremReport verify_theorems(const Context& ctx, const Measure& mu,
                              const OracleBudget& budget, RuleSystem system,
                              double epsilon) {
    check_budget(ctx, budget);
    TheoremReport report;

    MinerConfig cfg;
    cfg.mode = MineMode::Exact;
    cfg.max_premise_len = std::max(0, static_cast<std::int32_t>(ctx.atom_count()) - 1);
    cfg.threads = 1;
    RuleSet rules = mine_rules(ctx, mu, cfg);
    if (system == RuleSystem::EtaOne)
        rules = rules.filtered(
            [](const CausalRule& r) { return r.n_both == r.n_premise; });

    // --- all consistent literal sets over the signature (3^atoms) ---
    std::vector<LiteralSet> seeds;
    std::vector<Literal> cur;
    auto gen = [&](auto&& self, AtomId a) -> void {
        if (a == static_cast<AtomId>(ctx.atom_count())) {
            seeds.push_back(LiteralSet(cur));
            return;
        }
        self(self, a + 1);
        for (bool negative : {false, true}) {
            cur.push_back({a, negative});
            self(self, a + 1);
            cur.pop_back();
        }
    };
    gen(gen, 0);

    auto satisfiable = [&](const LiteralSet& ls) {
        for (ObjectId g = 0; g < static_cast<ObjectId>(ctx.object_count()); ++g)
            if (oracle_sat_all(ctx, g, ls.literals())) return true;
        return false;
    };

    // laws 1 and 3: closure of every satisfiable set stays satisfiable and
    // non-contradictory, and the score hill-climb lands on that closure
    for (const LiteralSet& seed : seeds) {
        if (!satisfiable(seed)) continue;
        ++report.seeds_checked;
        const ClosureResult c = closure(rules, seed);
        if (!c.consistent) {
            report.failures.push_back(
                {"closure-consistency",
                 "closure of " + set_label(ctx, seed) + " is contradictory"});
            continue;
        }
        if (!satisfiable(c.literals)) {
            report.failures.push_back(
                {"closure-consistency", "closure of " + set_label(ctx, seed) +
                                            " = " + set_label(ctx, c.literals) +
                                            " has no satisfying object"});
        }
        const FixpointResult fp = consistency_fixpoint(rules, seed, epsilon);
        if (!(fp.literals == c.literals)) {
            report.failures.push_back(
                {"climb-closure-agreement",
                 "from " + set_label(ctx, seed) + ": climb reaches " +
                     set_label(ctx, fp.literals) + ", closure gives " +
                     set_label(ctx, c.literals)});
        }
    }

    // --- law 2: classical concepts embed into prediction fixed points ---
    // Extents of a fixed point are collected from every positive atom subset
    // closing to it; the law says these are exactly the unions of classical
    // concept extents absorbed by the fixed point.
    const std::vector<FormalConcept> concepts = ctx.formal_concepts();
    std::map<std::string, Bitset> ext_predicted;   // fixed point -> objects, via atom subsets
    std::map<std::string, Bitset> ext_classical;   // fixed point -> union of concept extents
    std::map<std::string, LiteralSet> fp_by_key;

    const std::size_t n_atoms = ctx.atom_count();
    for (std::uint32_t mask = 0; mask < (1u << n_atoms); ++mask) {
        std::vector<Literal> lits;
        std::vector<AtomId> atoms;
        for (std::size_t a = 0; a < n_atoms; ++a)
            if (mask & (1u << a)) {
                lits.push_back(pos(static_cast<AtomId>(a)));
                atoms.push_back(static_cast<AtomId>(a));
            }
        const ClosureResult c = closure(rules, LiteralSet(std::move(lits)));
        if (!c.consistent) continue;
        const std::string key = intent_key(c.literals);
        auto [it, fresh] = ext_predicted.emplace(key, Bitset(ctx.object_count()));
        if (fresh) fp_by_key.emplace(key, c.literals);
        for (ObjectId g : ctx.derive_down(atoms)) it->second.set(g);
    }
    report.fixed_points_checked = static_cast<std::int64_t>(ext_predicted.size());

    for (const FormalConcept& fc : concepts) {
        // A concept with no objects has an intent no object can realize; the
        // embedding laws only speak about satisfiable intents, so it is vacuous.
        if (fc.extent.empty()) continue;
        ++report.concepts_checked;
        std::vector<Literal> lits;
        for (AtomId a : fc.intent) lits.push_back(pos(a));
        const LiteralSet intent_pos(std::move(lits));
        const ClosureResult c = closure(rules, intent_pos);
        if (!c.consistent) {
            report.failures.push_back(
                {"concept-embedding", "closure of concept intent " +
                                          set_label(ctx, intent_pos) + " is contradictory"});
            continue;
        }
        if (!intent_pos.subset_of(c.literals)) {
            report.failures.push_back(
                {"concept-embedding", "concept intent " + set_label(ctx, intent_pos) +
                                          " lost literals in its fixed point"});
        }
        const std::string key = intent_key(c.literals);
        auto [it, fresh] = ext_classical.emplace(key, Bitset(ctx.object_count()));
        (void)fresh;
        for (ObjectId g : fc.extent) it->second.set(g);
    }

    for (const auto& [key, predicted] : ext_predicted) {
        Bitset classical(ctx.object_count());
        if (auto it = ext_classical.find(key); it != ext_classical.end())
            classical = it->second;
        if (!(predicted == classical)) {
            report.failures.push_back(
                {"concept-embedding",
                 "fixed point " + set_label(ctx, fp_by_key.at(key)) +
                     " collects an object set different from its classical concepts"});
        }
    }

    return report;
}

} // namespace pfc
