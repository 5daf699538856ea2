#include "pfc/fixpoint.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>

#include "pfc/stats.hpp"

namespace pfc {

namespace {

std::atomic<std::int64_t> g_violations{0};

std::string intent_key(const LiteralSet& ls) {
    std::string k;
    for (Literal l : ls) {
        k += std::to_string(l.code());
        k += ':';
    }
    return k;
}

// ============================================================================
// Hill-climb engine
// ============================================================================

// Incremental state for repeated climbs over one rule system: per-rule count
// of premise literals missing from the current set, plus dense membership by
// literal code. One pass over the rules yields the score gain of every
// candidate addition (rules one literal short of firing, or firing rules
// whose conclusion slot is still open) and every removal (firing rules whose
// premise or conclusion the removal would break).
class ClimbEngine {
public:
    ClimbEngine(const RuleSet& rules, double epsilon) : rules_(rules) {
        gammas_.reserve(rules.size());
        std::int32_t mc = -1;
        for (const CausalRule& r : rules.rules()) {
            gammas_.push_back(confidence_weight(r.eta, epsilon));
            mc = std::max(mc, r.conclusion.negated().code());
            mc = std::max(mc, r.conclusion.code());
            for (Literal l : r.premise) mc = std::max(mc, l.code());
        }
        base_codes_ = mc + 1;
    }

    void init(const LiteralSet& state) {
        std::size_t n = static_cast<std::size_t>(base_codes_);
        for (Literal l : state)
            n = std::max(n, static_cast<std::size_t>((l.code() | 1) + 1));
        n_codes_ = n;
        in_.assign(n_codes_, 0);
        for (Literal l : state) in_[l.code()] = 1;
        missing_.assign(rules_.size(), 0);
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            std::int32_t m = 0;
            for (Literal l : rules_[i].premise)
                if (!in_[l.code()]) ++m;
            missing_[i] = m;
        }
        score_ = full_score();
    }

    StepResult step() {
        dadd_.assign(n_codes_, 0.0);
        drem_.assign(n_codes_, 0.0);
        eligible_.assign(n_codes_, 0);

        for (std::size_t i = 0; i < rules_.size(); ++i) {
            const CausalRule& r = rules_[i];
            const double g = gammas_[i];
            const std::int32_t cc = r.conclusion.code();
            const std::int32_t nc = r.conclusion.negated().code();
            if (missing_[i] == 0) {
                if (in_[cc]) {
                    // confirmed: breaking the premise or dropping the conclusion costs g
                    for (Literal l : r.premise) drem_[l.code()] -= g;
                    drem_[cc] -= g;
                } else if (in_[nc]) {
                    // refuted: breaking the premise or dropping the contradiction gains g
                    for (Literal l : r.premise) drem_[l.code()] += g;
                    drem_[nc] += g;
                } else {
                    // open prediction: its conclusion is a candidate addition
                    eligible_[cc] = 1;
                    dadd_[cc] += g;
                    dadd_[nc] -= g;
                }
            } else if (missing_[i] == 1) {
                std::int32_t mcode = -1;
                for (Literal l : r.premise)
                    if (!in_[l.code()]) {
                        mcode = l.code();
                        break;
                    }
                // completing the premise settles the rule by the present conclusion slot
                if (in_[cc]) dadd_[mcode] += g;
                else if (in_[nc]) dadd_[mcode] -= g;
            }
        }

        struct Move {
            bool has = false;
            double delta = 0.0;
            std::int32_t code = -1;
        };
        Move add, rem;
        for (std::size_t c = 0; c < n_codes_; ++c) {
            const std::int32_t cc = static_cast<std::int32_t>(c);
            if (in_[c]) {
                if (!rem.has || drem_[c] > rem.delta) rem = {true, drem_[c], cc};
            } else if (eligible_[c] && !in_[c ^ 1]) {
                if (!add.has || dadd_[c] > add.delta) add = {true, dadd_[c], cc};
            }
        }

        // removal wins ties; each applied move must strictly improve the score
        const bool do_rem =
            rem.has && rem.delta > 0.0 && (!add.has || rem.delta >= add.delta);
        const bool do_add =
            !do_rem && add.has && add.delta > 0.0 && (!rem.has || add.delta > rem.delta);

        StepResult res;
        if (!do_rem && !do_add) {
            res.action = StepAction::Fixpoint;
            res.literals = current();
            return res;
        }

        const double before = score_;
        const Move& mv = do_rem ? rem : add;
        const Literal lit = Literal::from_code(mv.code);
        in_[mv.code] = do_rem ? 0 : 1;
        for (std::int32_t ri : rules_.by_premise_literal(lit))
            missing_[ri] += do_rem ? 1 : -1;

        score_ = full_score();
        const bool increased = score_ > before;
        const bool consistent_delta =
            std::abs((score_ - before) - mv.delta) <= 1e-9 * std::max(1.0, std::abs(score_));
        if (!increased || !consistent_delta) ++g_violations;

        res.action = do_rem ? StepAction::Removed : StepAction::Added;
        res.literal = lit;
        res.delta = mv.delta;
        res.literals = current();
        return res;
    }

    double score() const { return score_; }

    LiteralSet current() const {
        std::vector<Literal> lits;
        for (std::size_t c = 0; c < n_codes_; ++c)
            if (in_[c]) lits.push_back(Literal::from_code(static_cast<std::int32_t>(c)));
        return LiteralSet(std::move(lits));
    }

private:
    // score recomputed from membership alone (does not trust missing_)
    double full_score() const {
        double s = 0.0;
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            const CausalRule& r = rules_[i];
            bool held = true;
            for (Literal l : r.premise)
                if (!in_[l.code()]) {
                    held = false;
                    break;
                }
            if (!held) continue;
            if (in_[r.conclusion.code()]) s += gammas_[i];
            else if (in_[r.conclusion.negated().code()]) s -= gammas_[i];
        }
        return s;
    }

    const RuleSet& rules_;
    std::vector<double> gammas_;
    std::int32_t base_codes_ = 0;
    std::size_t n_codes_ = 0;
    std::vector<char> in_;
    std::vector<std::int32_t> missing_;
    std::vector<double> dadd_, drem_;
    std::vector<char> eligible_;
    double score_ = 0.0;
};

std::int64_t auto_step_bound(std::size_t n_codes) {
    return 50 + 10 * static_cast<std::int64_t>(n_codes);
}

FixpointResult climb(ClimbEngine& engine, const LiteralSet& state, std::int64_t max_steps) {
    engine.init(state);
    std::size_t codes = 0;
    for (Literal l : state) codes = std::max(codes, static_cast<std::size_t>(l.code()) + 1);
    const std::int64_t bound = max_steps > 0 ? max_steps : auto_step_bound(codes + 64);

    FixpointResult out;
    for (;;) {
        StepResult sr = engine.step();
        if (sr.action == StepAction::Fixpoint) {
            out.literals = std::move(sr.literals);
            out.score = engine.score();
            return out;
        }
        if (++out.steps > bound)
            throw std::runtime_error("consistency hill-climb exceeded its step bound");
    }
}

} // namespace

// ============================================================================
// Prediction closure
// ============================================================================

ClosureResult predict_step(const RuleSet& rules, const LiteralSet& state) {
    ClosureResult res;
    res.consistent = state.consistent();
    std::vector<Literal> lits(state.begin(), state.end());
    auto has = [&](Literal l) {
        return std::find(lits.begin(), lits.end(), l) != lits.end();
    };
    for (std::int32_t ri : rules.premise_satisfied_in(state)) {
        const Literal c = rules[ri].conclusion;
        if (has(c)) continue;
        if (has(c.negated())) res.consistent = false;
        lits.push_back(c);
        ++res.steps;
    }
    res.literals = res.consistent ? LiteralSet(std::move(lits))
                                  : LiteralSet::flagged_inconsistent(std::move(lits));
    return res;
}

ClosureResult closure(const RuleSet& rules, const LiteralSet& state) {
    ClosureResult res;
    res.consistent = state.consistent();

    std::size_t n_codes = 0;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const CausalRule& r = rules[i];
        n_codes = std::max(n_codes, static_cast<std::size_t>(r.conclusion.code() | 1) + 1);
        for (Literal l : r.premise)
            n_codes = std::max(n_codes, static_cast<std::size_t>(l.code()) + 1);
    }
    for (Literal l : state)
        n_codes = std::max(n_codes, static_cast<std::size_t>(l.code() | 1) + 1);

    std::vector<char> in(n_codes, 0);
    std::vector<Literal> members;
    std::vector<Literal> queue;  // literals whose premise decrements are pending

    auto add_literal = [&](Literal c, bool seeded) {
        if (in[c.code()]) return;
        if (in[c.negated().code()]) res.consistent = false;
        in[c.code()] = 1;
        members.push_back(c);
        queue.push_back(c);
        if (!seeded) ++res.steps;
    };
    for (Literal l : state) add_literal(l, true);

    // missing = premise literals not yet present; each queued literal
    // decrements every rule listing it, so a rule fires exactly when the last
    // one arrives
    std::vector<std::int32_t> missing(rules.size(), 0);
    for (std::size_t i = 0; i < rules.size(); ++i) {
        missing[i] = static_cast<std::int32_t>(rules[i].premise.size());
        if (missing[i] == 0) add_literal(rules[i].conclusion, false);
    }
    std::size_t head = 0;
    while (head < queue.size()) {
        const Literal l = queue[head++];
        for (std::int32_t ri : rules.by_premise_literal(l))
            if (--missing[ri] == 0) add_literal(rules[ri].conclusion, false);
    }

    res.literals = res.consistent ? LiteralSet(std::move(members))
                                  : LiteralSet::flagged_inconsistent(std::move(members));
    return res;
}

// ============================================================================
// Consistency score
// ============================================================================

PredictionState consistency_score(const RuleSet& rules, const LiteralSet& state,
                                  double epsilon) {
    PredictionState ps;
    ps.literals = state;
    for (std::int32_t ri : rules.premise_satisfied_in(state)) {
        const CausalRule& r = rules[ri];
        const double g = confidence_weight(r.eta, epsilon);
        if (state.contains(r.conclusion)) {
            ps.confirmed.push_back(ri);
            ps.score += g;
        } else if (state.contains(r.conclusion.negated())) {
            ps.refuted.push_back(ri);
            ps.score -= g;
        }
    }
    return ps;
}

// ============================================================================
// Hill-climb entry points
// ============================================================================

StepResult consistency_step(const RuleSet& rules, const LiteralSet& state, double epsilon) {
    ClimbEngine engine(rules, epsilon);
    engine.init(state);
    return engine.step();
}

FixpointResult consistency_fixpoint(const RuleSet& rules, LiteralSet state, double epsilon,
                                    std::int64_t max_steps) {
    ClimbEngine engine(rules, epsilon);
    return climb(engine, state, max_steps);
}

std::int64_t fixpoint_violation_count() { return g_violations.load(); }

// ============================================================================
// Clustering
// ============================================================================

std::vector<FixedPointConcept> cluster(const Context& ctx, const RuleSet& rules,
                                       double epsilon, std::int32_t threads) {
    const std::size_t n = ctx.object_count();
    std::vector<LiteralSet> reached(n);

    std::size_t n_threads = threads > 0 ? static_cast<std::size_t>(threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::max<std::size_t>(1, std::min(n_threads, n));

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        ClimbEngine engine(rules, epsilon);
        for (std::size_t g = lo; g < hi; ++g)
            reached[g] =
                climb(engine, ctx.object_intent(static_cast<ObjectId>(g)), 0).literals;
    };

    if (n_threads <= 1) {
        if (n > 0) run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + n_threads - 1) / n_threads;
        for (std::size_t t = 0; t < n_threads; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (std::thread& t : pool) t.join();
    }

    std::unordered_map<std::string, std::size_t> index;
    std::vector<FixedPointConcept> out;
    for (std::size_t g = 0; g < n; ++g) {
        const std::string k = intent_key(reached[g]);
        auto [it, fresh] = index.emplace(k, out.size());
        if (fresh) {
            FixedPointConcept fc;
            fc.intent = reached[g];
            fc.score = consistency_score(rules, fc.intent, epsilon).score;
            out.push_back(std::move(fc));
        }
        out[it->second].seeds.push_back(static_cast<ObjectId>(g));
        out[it->second].extent.push_back(static_cast<ObjectId>(g));
    }

    // an object also belongs to every concept its closure lands on
    for (std::size_t g = 0; g < n; ++g) {
        const ClosureResult c = closure(rules, ctx.object_intent(static_cast<ObjectId>(g)));
        if (!c.consistent) continue;
        const auto it = index.find(intent_key(c.literals));
        if (it == index.end()) continue;
        FixedPointConcept& fc = out[it->second];
        if (!std::binary_search(fc.seeds.begin(), fc.seeds.end(), static_cast<ObjectId>(g)))
            fc.extent.push_back(static_cast<ObjectId>(g));
    }
    for (FixedPointConcept& fc : out) std::sort(fc.extent.begin(), fc.extent.end());

    std::sort(out.begin(), out.end(), [](const FixedPointConcept& a, const FixedPointConcept& b) {
        if (a.seeds.size() != b.seeds.size()) return a.seeds.size() > b.seeds.size();
        return a.intent < b.intent;
    });
    return out;
}

} // namespace pfc
