#include "doctest.h"

#include <random>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "pfc/fixpoint.hpp"
#include "pfc/miner.hpp"
#include "pfc/stats.hpp"
#include "pfc/synthetic.hpp"

using namespace pfc;

namespace {

constexpr double kEps = 1e-4;

struct RuleSpec {
    std::vector<Literal> premise;
    Literal conclusion;
    double eta = 1.0;
};

RuleSet system(const std::vector<RuleSpec>& specs) {
    RuleSet rs;
    for (const RuleSpec& sp : specs) {
        CausalRule r(LiteralSet(sp.premise), sp.conclusion);
        r.eta = sp.eta;
        rs.add(std::move(r));
    }
    rs.sort_canonical();
    return rs;
}

RuleSet toy_terminals(const Context& ctx) {
    MinerConfig cfg;
    cfg.mode = MineMode::Exact;
    cfg.max_premise_len = 3;
    return mine_rules(ctx, Measure::uniform(ctx), cfg);
}

} // namespace

// ============================================================================
// Prediction operator and closure
// ============================================================================

TEST_CASE("one prediction step fires exactly the satisfied premises") {
    const RuleSet chain = system({{{pos(0)}, pos(1), 1.0}, {{pos(1)}, pos(2), 1.0}});

    ClosureResult r = predict_step(chain, LiteralSet({pos(0)}));
    CHECK(r.literals == LiteralSet({pos(0), pos(1)}));  // b's rule is not yet live
    CHECK(r.consistent);
    CHECK(r.steps == 1);

    r = predict_step(chain, LiteralSet({pos(2)}));
    CHECK(r.literals == LiteralSet({pos(2)}));
    CHECK(r.steps == 0);

    // an empty premise is always satisfied
    const RuleSet axiom = system({{{}, pos(0), 1.0}});
    r = predict_step(axiom, LiteralSet{});
    CHECK(r.literals == LiteralSet({pos(0)}));

    // complementary predictions are kept and flagged, not dropped
    const RuleSet clash = system({{{pos(0)}, pos(1), 1.0}, {{pos(2)}, neg(1), 1.0}});
    r = predict_step(clash, LiteralSet({pos(0), pos(2)}));
    CHECK_FALSE(r.consistent);
    CHECK_FALSE(r.literals.consistent());
    CHECK(r.literals.contains(pos(1)));
    CHECK(r.literals.contains(neg(1)));
}

TEST_CASE("closure chases predictions to the least fixed point") {
    const RuleSet chain = system({{{pos(0)}, pos(1), 1.0}, {{pos(1)}, pos(2), 1.0}});

    ClosureResult r = closure(chain, LiteralSet({pos(0)}));
    CHECK(r.literals == LiteralSet({pos(0), pos(1), pos(2)}));
    CHECK(r.consistent);
    CHECK(r.steps == 2);

    r = closure(RuleSet{}, LiteralSet({pos(3)}));
    CHECK(r.literals == LiteralSet({pos(3)}));
    CHECK(r.steps == 0);

    const RuleSet clash = system({{{pos(0)}, pos(1), 1.0}, {{pos(2)}, neg(1), 1.0}});
    r = closure(clash, LiteralSet({pos(0), pos(2)}));
    CHECK_FALSE(r.consistent);

    // every full object description of the toy context is already closed
    const Context ctx = fixtures::toy_context();
    const RuleSet rules = toy_terminals(ctx);
    for (ObjectId g = 0; g < 4; ++g) {
        const LiteralSet intent = ctx.object_intent(g);
        const ClosureResult c = closure(rules, intent);
        CHECK(c.consistent);
        CHECK(c.literals == intent);
        CHECK(c.steps == 0);
    }
}

// ============================================================================
// Consistency score
// ============================================================================

TEST_CASE("score adds confirmed weights and subtracts refuted ones") {
    const RuleSet rs = system({{{pos(0)}, pos(1), 1.0}, {{pos(0)}, pos(2), 0.5}});
    const double g1 = confidence_weight(1.0, kEps);
    const double ghalf = confidence_weight(0.5, kEps);

    PredictionState st = consistency_score(rs, LiteralSet({pos(0), pos(1), neg(2)}), kEps);
    CHECK(st.score == doctest::Approx(g1 - ghalf));
    CHECK(st.confirmed == std::vector<std::int32_t>{0});
    CHECK(st.refuted == std::vector<std::int32_t>{1});

    // open predictions contribute nothing
    st = consistency_score(rs, LiteralSet({pos(0)}), kEps);
    CHECK(st.score == 0.0);
    CHECK(st.confirmed.empty());
    CHECK(st.refuted.empty());

    CHECK(consistency_score(rs, LiteralSet{}, kEps).score == 0.0);
    CHECK(consistency_score(rs, LiteralSet({pos(1)}), kEps).score == 0.0);

    // refuting a near-impossible rule counts in favor of the state
    const RuleSet nil = system({{{pos(0)}, pos(1), 0.0}});
    st = consistency_score(nil, LiteralSet({pos(0), neg(1)}), kEps);
    CHECK(st.score == doctest::Approx(-confidence_weight(0.0, kEps)));
    CHECK(st.score > 0.0);
}

// ============================================================================
// Hill-climb steps
// ============================================================================

TEST_CASE("single climb moves") {
    const double g1 = confidence_weight(1.0, kEps);

    SUBCASE("an open prediction is added") {
        const RuleSet rs = system({{{pos(0)}, pos(1), 1.0}});
        const StepResult s = consistency_step(rs, LiteralSet({pos(0)}), kEps);
        CHECK(s.action == StepAction::Added);
        CHECK(s.literal == pos(1));
        CHECK(s.delta == doctest::Approx(g1));
        CHECK(s.literals == LiteralSet({pos(0), pos(1)}));
    }

    SUBCASE("a confirmed state is a fixed point") {
        const RuleSet rs = system({{{pos(0)}, pos(1), 1.0}});
        const StepResult s = consistency_step(rs, LiteralSet({pos(0), pos(1)}), kEps);
        CHECK(s.action == StepAction::Fixpoint);
        CHECK(s.delta == 0.0);
    }

    SUBCASE("dropping a refuting premise literal beats everything") {
        const RuleSet rs = system({{{pos(0)}, pos(1), 1.0}, {{pos(2)}, neg(1), 1.0}});
        const StepResult s =
            consistency_step(rs, LiteralSet({pos(0), pos(2), pos(1)}), kEps);
        CHECK(s.action == StepAction::Removed);
        CHECK(s.literal == pos(2));
        CHECK(s.delta == doctest::Approx(g1));

        const FixpointResult fp =
            consistency_fixpoint(rs, LiteralSet({pos(0), pos(2), pos(1)}), kEps);
        CHECK(fp.literals == LiteralSet({pos(0), pos(1)}));
        CHECK(fp.score == doctest::Approx(g1));
    }

    SUBCASE("removal wins a tie against an addition") {
        // state {a, c, !d}: adding b and dropping c (or !d) all gain the same
        const RuleSet rs = system({{{pos(0)}, pos(1), 1.0}, {{pos(2)}, pos(3), 1.0}});
        const StepResult s =
            consistency_step(rs, LiteralSet({pos(0), pos(2), neg(3)}), kEps);
        CHECK(s.action == StepAction::Removed);
        CHECK(s.literal == pos(2));  // smallest code among the tied removals
        CHECK(s.delta == doctest::Approx(g1));
    }

    SUBCASE("ties within a kind go to the smallest literal code") {
        const RuleSet rs = system({{{pos(0)}, pos(1), 1.0}, {{pos(0)}, pos(2), 1.0}});
        const StepResult s = consistency_step(rs, LiteralSet({pos(0)}), kEps);
        CHECK(s.action == StepAction::Added);
        CHECK(s.literal == pos(1));
    }

    SUBCASE("an addition may not contradict the state") {
        const RuleSet rs = system({{{pos(0)}, neg(1), 1.0}});
        const StepResult s = consistency_step(rs, LiteralSet({pos(0), pos(1)}), kEps);
        CHECK(s.action == StepAction::Removed);  // never Added neg(1)
    }
}

TEST_CASE("climb agrees with closure from satisfiable states") {
    const Context ctx = fixtures::toy_context();
    const RuleSet rules = toy_terminals(ctx);

    for (ObjectId g = 0; g < 4; ++g) {
        const LiteralSet intent = ctx.object_intent(g);
        const std::vector<Literal>& lits = intent.literals();
        for (std::uint32_t mask = 0; mask < (1u << lits.size()); ++mask) {
            std::vector<Literal> subset;
            for (std::size_t i = 0; i < lits.size(); ++i)
                if (mask & (1u << i)) subset.push_back(lits[i]);
            const LiteralSet seed(subset);
            CAPTURE(g);
            CAPTURE(mask);

            const ClosureResult c = closure(rules, seed);
            REQUIRE(c.consistent);
            const FixpointResult fp = consistency_fixpoint(rules, seed, kEps);
            CHECK(fp.literals == c.literals);
            CHECK(fp.score ==
                  doctest::Approx(consistency_score(rules, c.literals, kEps).score));
        }
    }
}

TEST_CASE("the step bound is a hard error, not a silent truncation") {
    const RuleSet chain = system({{{pos(0)}, pos(1), 1.0}, {{pos(1)}, pos(2), 1.0}});
    CHECK_NOTHROW(consistency_fixpoint(chain, LiteralSet({pos(0)}), kEps, 2));
    CHECK_THROWS_AS(consistency_fixpoint(chain, LiteralSet({pos(0)}), kEps, 1),
                    std::runtime_error);
}

// ============================================================================
// Clustering
// ============================================================================

TEST_CASE("with no rules every object is its own concept") {
    const Context ctx = fixtures::toy_context();
    const std::vector<FixedPointConcept> cs = cluster(ctx, RuleSet{}, kEps);
    REQUIRE(cs.size() == 4);
    for (ObjectId g = 0; g < 4; ++g) {  // tied seed counts fall back to intent order
        CHECK(cs[g].intent == ctx.object_intent(g));
        CHECK(cs[g].seeds == std::vector<ObjectId>{g});
        CHECK(cs[g].extent == std::vector<ObjectId>{g});
        CHECK(cs[g].score == 0.0);
    }
}

TEST_CASE("identical objects share one concept") {
    Schema s;
    s.attributes.push_back({"a", Encoding::Boolean, {}});
    const Context ctx = build_context(
        s, {{"o1", {"1"}, 1.0}, {"o2", {"1"}, 1.0}, {"o3", {"1"}, 1.0}});
    MinerConfig cfg;
    cfg.mode = MineMode::Exact;
    const RuleSet rules = mine_rules(ctx, Measure::uniform(ctx), cfg);

    const std::vector<FixedPointConcept> cs = cluster(ctx, rules, kEps);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].intent == LiteralSet({pos(0)}));
    CHECK(cs[0].seeds == std::vector<ObjectId>{0, 1, 2});
    CHECK(cs[0].extent == cs[0].seeds);
    // confirming (-> a) and refuting the eta-0 rule (-> !a) both score positive
    CHECK(cs[0].score ==
          doctest::Approx(confidence_weight(1.0, kEps) - confidence_weight(0.0, kEps)));
}

TEST_CASE("clustering recovers planted classes") {
    SyntheticSpec spec;
    spec.n_classes = 3;
    spec.copies_per_class = 5;
    spec.n_attributes = 6;
    spec.values_per_attribute = 4;
    const SyntheticData data = generate_synthetic(spec, 11);
    REQUIRE(data.noisy_cells == 0);

    MinerConfig cfg;
    cfg.alpha = 0.01;
    cfg.max_premise_len = 1;
    const RuleSet rules = mine_rules(data.ctx, Measure::uniform(data.ctx), cfg);
    const std::vector<FixedPointConcept> cs = cluster(data.ctx, rules, kEps);

    REQUIRE(cs.size() == 3);
    for (const FixedPointConcept& c : cs) {
        REQUIRE(c.seeds.size() == 5);
        CHECK(c.extent == c.seeds);  // nothing but the seeds closes onto an intent
        const std::int32_t cls = data.labels[c.seeds[0]];
        for (ObjectId g : c.seeds) CHECK(data.labels[g] == cls);

        // the positive literals are exactly the generating prototype
        std::vector<bool> seen(spec.n_attributes, false);
        for (Literal l : c.intent) {
            if (l.negative) continue;
            const Atom& at = data.ctx.atom(l.atom);
            CHECK(at.value == data.prototypes[cls][at.group]);
            seen[at.group] = true;
        }
        for (std::int32_t a = 0; a < spec.n_attributes; ++a) CHECK(seen[a]);
    }

    const std::vector<FixedPointConcept> threaded = cluster(data.ctx, rules, kEps, 4);
    REQUIRE(threaded.size() == cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        CHECK(threaded[i].intent == cs[i].intent);
        CHECK(threaded[i].seeds == cs[i].seeds);
        CHECK(threaded[i].extent == cs[i].extent);
        CHECK(threaded[i].score == cs[i].score);
    }
}

TEST_CASE("no climb move ever failed its recomputed gain") {
    CHECK(fixpoint_violation_count() == 0);
}
