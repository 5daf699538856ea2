#include "pfc/miner.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "pfc/bitset.hpp"
#include "pfc/stats.hpp"

namespace pfc {

namespace {

// compact binary key: 4 little-endian bytes per literal code
std::string codes_key(const std::vector<std::int32_t>& codes) {
    std::string k(codes.size() * 4, '\0');
    for (std::size_t i = 0; i < codes.size(); ++i)
        for (int b = 0; b < 4; ++b)
            k[4 * i + b] = static_cast<char>((codes[i] >> (8 * b)) & 0xff);
    return k;
}

bool atom_decided(const std::vector<std::int32_t>& codes, AtomId atom) {
    for (std::int32_t c : codes)
        if (Literal::from_code(c).atom == atom) return true;
    return false;
}

LiteralSet codes_to_set(const std::vector<std::int32_t>& codes) {
    std::vector<Literal> lits;
    lits.reserve(codes.size());
    for (std::int32_t c : codes) lits.push_back(Literal::from_code(c));
    return LiteralSet(std::move(lits));
}

RuleSupport support_of(const Context& ctx, const Measure& mu, const Bitset& premise_sup,
                       const Bitset& concl_col) {
    RuleSupport s;
    s.n_premise = static_cast<std::int64_t>(premise_sup.count());
    s.n_both = static_cast<std::int64_t>(Bitset::and_count(premise_sup, concl_col));
    if (mu.is_uniform()) {
        const double n = static_cast<double>(ctx.object_count());
        s.premise_mass = static_cast<double>(s.n_premise) / n;
        s.both_mass = static_cast<double>(s.n_both) / n;
    } else {
        s.premise_mass = mu.mass(premise_sup);
        Bitset both = premise_sup;
        both &= concl_col;
        s.both_mass = mu.mass(both);
    }
    return s;
}

CausalRule make_rule(const std::vector<std::int32_t>& codes, Literal concl,
                     const RuleSupport& s) {
    CausalRule r(codes_to_set(codes), concl);
    r.n_premise = s.n_premise;
    r.n_both = s.n_both;
    r.eta = s.eta();
    r.chain_len = static_cast<std::int32_t>(codes.size());
    return r;
}

// ============================================================================
// Exact mode: full premise-lattice enumeration
// ============================================================================

// Causal rules can refine the empty premise by several literals at once, so
// terminality cannot be decided on one-literal chains alone: the lattice of
// consistent positive-support premises is enumerated completely (up to the
// cap) and causality/terminality are decided by exhaustive subset lookups.

struct LatticeNode {
    std::vector<std::int32_t> codes;
    RuleSupport sup;
    bool causal = false;
    bool blocked = false;  // some causal strict superset has strictly larger eta
};

struct Lattice {
    std::vector<LatticeNode> nodes;
    std::unordered_map<std::string, std::int32_t> index;
};

void enumerate_premises(const Context& ctx, const Measure& mu, Literal concl,
                        const Bitset& concl_col, std::int32_t max_len,
                        std::vector<std::int32_t>& codes, const Bitset& sup,
                        std::int32_t first_code, Lattice& lat) {
    lat.index.emplace(codes_key(codes), static_cast<std::int32_t>(lat.nodes.size()));
    lat.nodes.push_back({codes, support_of(ctx, mu, sup, concl_col), false, false});
    if (static_cast<std::int32_t>(codes.size()) >= max_len) return;

    const std::int32_t n_codes = static_cast<std::int32_t>(ctx.literal_count());
    for (std::int32_t c = first_code; c < n_codes; ++c) {
        const Literal lit = Literal::from_code(c);
        if (lit.atom == concl.atom) continue;
        if (atom_decided(codes, lit.atom)) continue;
        Bitset child = sup;
        child &= ctx.literal_column(lit);
        if (!child.any()) continue;  // zero-support premises carry no rule
        codes.push_back(c);
        enumerate_premises(ctx, mu, concl, concl_col, max_len, codes, child, c + 1, lat);
        codes.pop_back();
    }
}

std::vector<CausalRule> mine_exact(const Context& ctx, const Measure& mu, Literal concl,
                                   const MinerConfig& cfg) {
    const Bitset& concl_col = ctx.literal_column(concl);
    Lattice lat;
    {
        std::vector<std::int32_t> codes;
        Bitset everything(ctx.object_count(), true);
        enumerate_premises(ctx, mu, concl, concl_col, cfg.max_premise_len, codes,
                           everything, 0, lat);
    }

    // causality: strictly larger eta than every proper sub-premise
    const bool uniform = mu.is_uniform();
    std::vector<std::int32_t> sub;
    for (LatticeNode& node : lat.nodes) {
        const std::size_t k = node.codes.size();
        node.causal = true;
        for (std::uint32_t mask = 0; node.causal && mask + 1 < (1u << k); ++mask) {
            sub.clear();
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (1u << i)) sub.push_back(node.codes[i]);
            const LatticeNode& s = lat.nodes[lat.index.at(codes_key(sub))];
            if (!eta_greater(node.sup, s.sup, uniform)) node.causal = false;
        }
    }

    // terminality: no causal strict superset wins; sweep supersets downward
    for (const LatticeNode& node : lat.nodes) {
        if (!node.causal) continue;
        const std::size_t k = node.codes.size();
        for (std::uint32_t mask = 0; mask + 1 < (1u << k); ++mask) {
            sub.clear();
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (1u << i)) sub.push_back(node.codes[i]);
            LatticeNode& s = lat.nodes[lat.index.at(codes_key(sub))];
            if (s.causal && eta_greater(node.sup, s.sup, uniform)) s.blocked = true;
        }
    }

    std::vector<CausalRule> out;
    for (const LatticeNode& node : lat.nodes)
        if (node.causal && !node.blocked) out.push_back(make_rule(node.codes, concl, node.sup));
    return out;
}

// ============================================================================
// Fisher mode: statistically gated refinement search
// ============================================================================

struct RefinementTest {
    ContingencyTable table;
    RuleSupport child;
    bool eta_increases = false;
};

// 2x2 table for extending `sup` by `lit`, restricted to objects defined on
// both the candidate's and the conclusion's attribute: rows split by lit,
// columns by the conclusion.
RefinementTest test_refinement(const Context& ctx, const Measure& mu, const Bitset& sup,
                               const RuleSupport& cur, Literal lit, Literal concl) {
    RefinementTest t;
    const Bitset& cpos = ctx.literal_column(concl);
    const Bitset& cneg = ctx.literal_column(concl.negated());
    const Bitset& lpos = ctx.literal_column(lit);
    const Bitset& lneg = ctx.literal_column(lit.negated());
    t.table.n11 = static_cast<std::int64_t>(Bitset::and_count(sup, lpos, cpos));
    t.table.n10 = static_cast<std::int64_t>(Bitset::and_count(sup, lpos, cneg));
    t.table.n01 = static_cast<std::int64_t>(Bitset::and_count(sup, lneg, cpos));
    t.table.n00 = static_cast<std::int64_t>(Bitset::and_count(sup, lneg, cneg));

    Bitset child = sup;
    child &= lpos;
    t.child = support_of(ctx, mu, child, cpos);
    t.eta_increases = t.child.defined() && eta_greater(t.child, cur, mu.is_uniform());
    return t;
}

struct FisherSearch {
    const Context& ctx;
    const Measure& mu;
    Literal concl;
    const MinerConfig& cfg;
    std::unordered_set<std::string> visited;
    std::vector<CausalRule> out;
};

// Smallest final-step Fisher p over all one-literal removals: the canonical
// p-value reported for a stored rule (independent of the admission order that
// happened to discover it).
double canonical_p(FisherSearch& fs, const std::vector<std::int32_t>& codes) {
    double best = 1.0;
    for (std::size_t drop = 0; drop < codes.size(); ++drop) {
        Bitset parent(fs.ctx.object_count(), true);
        for (std::size_t i = 0; i < codes.size(); ++i)
            if (i != drop) parent &= fs.ctx.literal_column(Literal::from_code(codes[i]));
        const RuleSupport psup = support_of(fs.ctx, fs.mu, parent,
                                            fs.ctx.literal_column(fs.concl));
        const RefinementTest t = test_refinement(fs.ctx, fs.mu, parent, psup,
                                                 Literal::from_code(codes[drop]), fs.concl);
        best = std::min(best, fisher_one_sided(t.table));
    }
    return best;
}

void fisher_dfs(FisherSearch& fs, std::vector<std::int32_t>& codes, const Bitset& sup,
                const RuleSupport& cur) {
    if (!fs.visited.insert(codes_key(codes)).second) return;

    struct Child {
        double p;
        std::int32_t code;
        Bitset sup;
        RuleSupport s;
    };
    std::vector<Child> admitted;

    // a premise already certain of its conclusion admits no strict improvement
    const bool saturated = cur.n_both == cur.n_premise;
    if (!saturated && static_cast<std::int32_t>(codes.size()) < fs.cfg.max_premise_len) {
        const std::int32_t n_codes = static_cast<std::int32_t>(fs.ctx.literal_count());
        for (std::int32_t c = 0; c < n_codes; ++c) {
            const Literal lit = Literal::from_code(c);
            if (lit.atom == fs.concl.atom) continue;
            if (atom_decided(codes, lit.atom)) continue;
            const RefinementTest t = test_refinement(fs.ctx, fs.mu, sup, cur, lit, fs.concl);
            if (!t.eta_increases) continue;
            const double p = fisher_one_sided(t.table);
            if (!(p < fs.cfg.alpha)) continue;
            Bitset child = sup;
            child &= fs.ctx.literal_column(lit);
            admitted.push_back({p, c, std::move(child), t.child});
        }
    }

    if (admitted.empty()) {
        if (!codes.empty()) {  // the empty premise was never admitted by a gate
            CausalRule r = make_rule(codes, fs.concl, cur);
            r.p_value = canonical_p(fs, codes);
            fs.out.push_back(std::move(r));
        }
        return;
    }

    if (fs.cfg.beam_width > 0 &&
        static_cast<std::int32_t>(admitted.size()) > fs.cfg.beam_width) {
        std::sort(admitted.begin(), admitted.end(), [](const Child& a, const Child& b) {
            if (a.p != b.p) return a.p < b.p;
            return a.code < b.code;
        });
        admitted.resize(fs.cfg.beam_width);
        std::sort(admitted.begin(), admitted.end(),
                  [](const Child& a, const Child& b) { return a.code < b.code; });
    }

    for (const Child& ch : admitted) {
        codes.push_back(ch.code);
        fisher_dfs(fs, codes, ch.sup, ch.s);
        codes.pop_back();
    }
}

std::vector<CausalRule> mine_fisher(const Context& ctx, const Measure& mu, Literal concl,
                                    const MinerConfig& cfg) {
    FisherSearch fs{ctx, mu, concl, cfg, {}, {}};
    std::vector<std::int32_t> codes;
    Bitset everything(ctx.object_count(), true);
    const RuleSupport root = support_of(ctx, mu, everything, ctx.literal_column(concl));
    fisher_dfs(fs, codes, everything, root);
    return fs.out;
}

// keep only the rules tied for the largest conditional probability
void keep_strongest(std::vector<CausalRule>& rules, bool uniform) {
    if (rules.empty()) return;
    auto sup_of = [](const CausalRule& r) {
        RuleSupport s;
        s.n_premise = r.n_premise;
        s.n_both = r.n_both;
        s.premise_mass = static_cast<double>(r.n_premise);
        s.both_mass = r.eta * static_cast<double>(r.n_premise);
        return s;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < rules.size(); ++i)
        if (eta_greater(sup_of(rules[i]), sup_of(rules[best]), uniform)) best = i;
    const RuleSupport top = sup_of(rules[best]);
    std::vector<CausalRule> kept;
    for (CausalRule& r : rules)
        if (!eta_greater(top, sup_of(r), uniform)) kept.push_back(std::move(r));
    rules = std::move(kept);
}

std::vector<CausalRule> mine_one(const Context& ctx, const Measure& mu, Literal concl,
                                 const MinerConfig& cfg) {
    std::vector<CausalRule> rules = cfg.mode == MineMode::Exact
                                        ? mine_exact(ctx, mu, concl, cfg)
                                        : mine_fisher(ctx, mu, concl, cfg);
    if (cfg.mscr_strict) keep_strongest(rules, mu.is_uniform());
    return rules;
}

void check_preconditions(const Context& ctx, const Measure& mu, const MinerConfig& cfg) {
    cfg.validate();
    if (ctx.object_count() == 0) throw std::invalid_argument("cannot mine an empty context");
    if (mu.size() != ctx.object_count())
        throw std::invalid_argument("measure size does not match the context");
    if (cfg.mode == MineMode::Exact && ctx.atom_count() > 20)
        throw std::invalid_argument(
            "exact mining enumerates the premise lattice and is refused beyond 20 atoms");
    if (cfg.mode == MineMode::Fisher && !mu.is_uniform())
        throw std::invalid_argument("the Fisher gate requires a uniform measure");
}

} // namespace

void MinerConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie strictly between 0 and 1");
    if (max_premise_len < 0) throw std::invalid_argument("max_premise_len must be >= 0");
    if (beam_width < 0) throw std::invalid_argument("beam_width must be >= 0");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

std::vector<CausalRule> mine_conclusion(const Context& ctx, const Measure& mu,
                                        Literal conclusion, const MinerConfig& cfg) {
    check_preconditions(ctx, mu, cfg);
    return mine_one(ctx, mu, conclusion, cfg);
}

RuleSet mine_rules(const Context& ctx, const Measure& mu, const MinerConfig& cfg) {
    check_preconditions(ctx, mu, cfg);

    std::vector<Literal> conclusions;
    for (AtomId a = 0; a < static_cast<AtomId>(ctx.atom_count()); ++a) {
        conclusions.push_back(pos(a));
        conclusions.push_back(neg(a));
    }

    std::size_t n_threads = cfg.threads > 0
                                ? static_cast<std::size_t>(cfg.threads)
                                : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, conclusions.size());

    std::vector<std::vector<CausalRule>> per_concl(conclusions.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < conclusions.size(); ++i)
            per_concl[i] = mine_one(ctx, mu, conclusions[i], cfg);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < conclusions.size(); i = next++)
                per_concl[i] = mine_one(ctx, mu, conclusions[i], cfg);
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    RuleSet rs;
    rs.mode = cfg.mode;
    rs.alpha = cfg.alpha;
    rs.max_premise_len = cfg.max_premise_len;
    for (std::vector<CausalRule>& group : per_concl)
        for (CausalRule& r : group) rs.add(std::move(r));
    rs.sort_canonical();
    return rs;
}

} // namespace pfc
