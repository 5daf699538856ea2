#include "doctest.h"

#include <atomic>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "helpers.hpp"
#include "pfc/fixpoint.hpp"
#include "pfc/io.hpp"
#include "pfc/miner.hpp"
#include "pfc/synthetic.hpp"

using namespace pfc;

namespace {

struct TempDir {
    std::filesystem::path dir;

    TempDir() {
        static std::atomic<int> serial{0};
        dir = std::filesystem::temp_directory_path() /
              ("pfc_io_" + std::to_string(::getpid()) + "_" + std::to_string(serial++));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }
    std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

Schema mixed_schema() {
    Schema s;
    s.attributes.push_back({"color", Encoding::OneHot, {"red", "green", "blue"}});
    s.attributes.push_back({"flag", Encoding::Boolean, {}});
    return s;
}

RuleSet toy_rules(const Context& ctx) {
    MinerConfig cfg;
    cfg.mode = MineMode::Exact;
    cfg.max_premise_len = 3;
    return mine_rules(ctx, Measure::uniform(ctx), cfg);
}

} // namespace

// ============================================================================
// Schema files
// ============================================================================

TEST_CASE("schema round trip") {
    TempDir tmp;
    const Schema s = mixed_schema();
    save_schema(s, tmp("schema.txt"));
    const Schema back = load_schema(tmp("schema.txt"));
    REQUIRE(back.attributes.size() == 2);
    CHECK(back.attributes[0].name == "color");
    CHECK(back.attributes[0].encoding == Encoding::OneHot);
    CHECK(back.attributes[0].values == std::vector<std::string>{"red", "green", "blue"});
    CHECK(back.attributes[1].name == "flag");
    CHECK(back.attributes[1].encoding == Encoding::Boolean);
}

TEST_CASE("schema text allows comments and blank lines") {
    TempDir tmp;
    write_text_file(tmp("s.txt"),
                    "# header comment\n"
                    "\n"
                    "size onehot s m l  # trailing note\n"
                    "flag boolean\n");
    const Schema s = load_schema(tmp("s.txt"));
    REQUIRE(s.attributes.size() == 2);
    CHECK(s.attributes[0].values == std::vector<std::string>{"s", "m", "l"});
}

TEST_CASE("schema errors carry the offending line") {
    TempDir tmp;
    auto expect = [&](const std::string& text, const std::string& fragment) {
        write_text_file(tmp("bad.txt"), text);
        const std::string msg = fixtures::thrown_what<std::runtime_error>(
            [&] { load_schema(tmp("bad.txt")); });
        CAPTURE(msg);
        CHECK(msg.find(fragment) != std::string::npos);
    };
    expect("color onehot red\n", "at least two values");
    expect("flag boolean extra\n", "no value list");
    expect("x mystery a b\n", "unknown encoding 'mystery'");
    expect("lonely\n", "missing encoding");
    expect("# nothing but comments\n", "empty schema");
}

// ============================================================================
// Data CSV
// ============================================================================

TEST_CASE("context CSV round trip with missing cells and weights") {
    TempDir tmp;
    const Schema s = mixed_schema();
    const Context ctx = build_context(s, {{"o,1", {"red", "1"}, 1.5},
                                          {"o2", {"", "0"}, 1.0},
                                          {"o3", {"blue", ""}, 2.0}});
    REQUIRE(ctx.has_explicit_weights());

    save_context_csv(ctx, tmp("data.csv"));
    save_schema(s, tmp("schema.txt"));
    const Context back = load_context(tmp("schema.txt"), tmp("data.csv"));

    REQUIRE(back.object_count() == 3);
    CHECK(back.object_names() == ctx.object_names());  // the comma survived quoting
    CHECK(back.has_explicit_weights());
    CHECK(back.weights() == ctx.weights());
    REQUIRE(back.atom_count() == ctx.atom_count());
    for (ObjectId g = 0; g < 3; ++g) {
        for (AtomId m = 0; m < static_cast<AtomId>(ctx.atom_count()); ++m)
            CHECK(back.incident(g, m) == ctx.incident(g, m));
        for (GroupId a = 0; a < static_cast<GroupId>(ctx.group_count()); ++a)
            CHECK(back.group_known(g, a) == ctx.group_known(g, a));
    }

    // round trip without weights omits the weight column
    const Context plain = build_context(s, {{"o1", {"red", "1"}, 1.0}});
    save_context_csv(plain, tmp("plain.csv"));
    CHECK(read_text_file(tmp("plain.csv")).find("weight") == std::string::npos);
}

TEST_CASE("CSV errors carry coordinates") {
    TempDir tmp;
    const Schema s = mixed_schema();
    save_schema(s, tmp("schema.txt"));
    auto expect = [&](const std::string& text, const std::string& fragment) {
        write_text_file(tmp("bad.csv"), text);
        const std::string msg = fixtures::thrown_what<std::runtime_error>(
            [&] { load_context(tmp("schema.txt"), tmp("bad.csv")); });
        CAPTURE(msg);
        CHECK(msg.find(fragment) != std::string::npos);
    };
    expect("name,color,flag\no1,re\"d,1\n", "line 2: stray quote");
    expect("name,color,flag\no1,red\n", "record 1: expected 3 fields, got 2");
    expect("name,color,hue\no1,red,1\n", "does not match schema attribute 'flag'");
    expect("id,color,flag\no1,red,1\n", "first header field must be 'name'");
    expect("name,color,flag,weight\no1,red,1,heavy\n", "record 1: bad weight 'heavy'");
    expect("", "empty data file");
}

// ============================================================================
// Rule dumps
// ============================================================================

TEST_CASE("rule dump round trip is lossless and byte-stable") {
    const Context ctx = fixtures::toy_context();
    const RuleSet rules = toy_rules(ctx);

    const std::string text = rules_to_jsonl(ctx, rules);
    const RuleSet back = parse_rules_jsonl(ctx, text);
    REQUIRE(back.size() == rules.size());
    CHECK(back.mode == rules.mode);
    CHECK(back.alpha == rules.alpha);
    CHECK(back.max_premise_len == rules.max_premise_len);
    for (std::size_t i = 0; i < rules.size(); ++i) {
        CHECK(back[i].premise == rules[i].premise);
        CHECK(back[i].conclusion == rules[i].conclusion);
        CHECK(back[i].n_premise == rules[i].n_premise);
        CHECK(back[i].n_both == rules[i].n_both);
        CHECK(back[i].eta == rules[i].eta);
        CHECK(back[i].p_value == rules[i].p_value);  // null for the exact mode
        CHECK(back[i].chain_len == rules[i].chain_len);
    }
    CHECK(rules_to_jsonl(ctx, back) == text);

    // statistical rules keep their p-values bit for bit
    MinerConfig cfg;
    cfg.alpha = 0.6;
    cfg.max_premise_len = 3;
    const RuleSet fisher = mine_rules(ctx, Measure::uniform(ctx), cfg);
    REQUIRE(fisher.size() > 0);
    const std::string ftext = rules_to_jsonl(ctx, fisher);
    const RuleSet fback = parse_rules_jsonl(ctx, ftext);
    for (std::size_t i = 0; i < fisher.size(); ++i) {
        REQUIRE(fback[i].p_value.has_value());
        CHECK(*fback[i].p_value == *fisher[i].p_value);
    }
    CHECK(rules_to_jsonl(ctx, fback) == ftext);
}

TEST_CASE("rule dump rejects tampered metadata") {
    const Context ctx = fixtures::toy_context();
    const RuleSet rules = toy_rules(ctx);
    std::string text = rules_to_jsonl(ctx, rules);

    const std::string honest = "\"count\":7";
    const std::size_t at = text.find(honest);
    REQUIRE(at != std::string::npos);
    text.replace(at, honest.size(), "\"count\":8");
    CHECK(fixtures::thrown_what<std::runtime_error>([&] { parse_rules_jsonl(ctx, text); })
              .find("count mismatch") != std::string::npos);
    CHECK(fixtures::thrown_what<std::runtime_error>(
              [&] { parse_rules_jsonl(ctx, "{\"kind\":\"other\"}\n"); })
              .find("missing metadata") != std::string::npos);
    CHECK_THROWS_AS(parse_rules_jsonl(ctx, "not json\n"), std::runtime_error);
}

// ============================================================================
// Concept dumps
// ============================================================================

TEST_CASE("concept dump round trip is lossless and byte-stable") {
    const Context ctx = fixtures::toy_context();
    const RuleSet rules = toy_rules(ctx);
    const std::vector<FixedPointConcept> cs = cluster(ctx, rules, 1e-4);
    REQUIRE(cs.size() == 4);  // every toy description is already a fixed point

    const std::string text = concepts_to_jsonl(ctx, cs, 1e-4);
    const std::vector<FixedPointConcept> back = parse_concepts_jsonl(ctx, text);
    REQUIRE(back.size() == cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        CHECK(back[i].intent == cs[i].intent);
        CHECK(back[i].seeds == cs[i].seeds);
        CHECK(back[i].extent == cs[i].extent);
        CHECK(back[i].score == cs[i].score);
    }
    CHECK(concepts_to_jsonl(ctx, back, 1e-4) == text);

    CHECK(fixtures::thrown_what<std::runtime_error>(
              [&] { parse_concepts_jsonl(ctx, "{\"kind\":\"rules\"}\n"); })
              .find("missing metadata") != std::string::npos);
}

TEST_CASE("the report names concepts, seed counts and members") {
    Schema s;
    s.attributes.push_back({"a", Encoding::Boolean, {}});
    const Context ctx = build_context(
        s, {{"o1", {"1"}, 1.0}, {"o2", {"1"}, 1.0}, {"o3", {"1"}, 1.0}});
    MinerConfig cfg;
    cfg.mode = MineMode::Exact;
    const RuleSet rules = mine_rules(ctx, Measure::uniform(ctx), cfg);
    const std::vector<FixedPointConcept> cs = cluster(ctx, rules, 1e-4);

    const std::string report = concepts_report(ctx, cs);
    CHECK(report.find("1 concepts") != std::string::npos);
    CHECK(report.find("== concept 1: 3 objects (3 seeds)") != std::string::npos);
    CHECK(report.find("holds: a=1") != std::string::npos);
    CHECK(report.find("objects: o1 o2 o3") != std::string::npos);
}

// ============================================================================
// Synthetic data generation
// ============================================================================

TEST_CASE("generation is deterministic and honors the distance floor") {
    SyntheticSpec spec;
    spec.n_classes = 4;
    spec.copies_per_class = 3;
    spec.n_attributes = 8;
    spec.values_per_attribute = 5;

    const SyntheticData a = generate_synthetic(spec, 42);
    const SyntheticData b = generate_synthetic(spec, 42);
    CHECK(a.labels == b.labels);
    CHECK(a.prototypes == b.prototypes);
    CHECK(a.noisy_cells == 0);

    TempDir tmp;
    save_context_csv(a.ctx, tmp("a.csv"));
    save_context_csv(b.ctx, tmp("b.csv"));
    CHECK(read_text_file(tmp("a.csv")) == read_text_file(tmp("b.csv")));

    const SyntheticData other = generate_synthetic(spec, 43);
    CHECK(other.prototypes != a.prototypes);

    REQUIRE(a.prototypes.size() == 4);
    for (std::size_t i = 0; i < a.prototypes.size(); ++i)
        for (std::size_t j = i + 1; j < a.prototypes.size(); ++j) {
            std::int32_t hamming = 0;
            for (std::int32_t k = 0; k < spec.n_attributes; ++k)
                if (a.prototypes[i][k] != a.prototypes[j][k]) ++hamming;
            CHECK(hamming >= spec.distance());
        }

    REQUIRE(a.labels.size() == 12);
    for (ObjectId g = 0; g < 12; ++g) {  // noise-free copies equal their prototype
        const std::vector<std::int32_t>& proto = a.prototypes[a.labels[g]];
        for (const AttributeGroup& grp : a.ctx.groups())
            CHECK(a.ctx.incident(g, grp.atoms[proto[grp.id]]));
    }
}

TEST_CASE("noise is counted exactly as cells differing from the prototype") {
    SyntheticSpec spec;
    spec.noise_rate = 0.05;
    const SyntheticData data = generate_synthetic(spec, 3);

    std::int64_t differing = 0;
    for (ObjectId g = 0; g < static_cast<ObjectId>(data.ctx.object_count()); ++g) {
        const std::vector<std::int32_t>& proto = data.prototypes[data.labels[g]];
        for (const AttributeGroup& grp : data.ctx.groups())
            if (!data.ctx.incident(g, grp.atoms[proto[grp.id]])) ++differing;
    }
    CHECK(differing == data.noisy_cells);
    CHECK(data.noisy_cells > 0);
    CHECK(data.noisy_cells < 360 * 24);
    // frozen count for this spec and seed; guards cross-platform drift
    CHECK(data.noisy_cells == 368);  // frozen: ~5% of 8640 cells, minus same-value redraws
}

TEST_CASE("degenerate and invalid recipes") {
    SyntheticSpec one;
    one.n_classes = 1;
    one.copies_per_class = 4;
    one.n_attributes = 5;
    one.values_per_attribute = 3;
    const SyntheticData data = generate_synthetic(one, 9);
    CHECK(data.ctx.object_count() == 4);
    for (ObjectId g = 0; g < 4; ++g) CHECK(data.labels[g] == 0);
    for (ObjectId g = 1; g < 4; ++g) CHECK(data.ctx.row(g) == data.ctx.row(0));

    auto reject = [](auto mutate) {
        SyntheticSpec bad;
        mutate(bad);
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    };
    reject([](SyntheticSpec& s) { s.n_classes = 0; });
    reject([](SyntheticSpec& s) { s.copies_per_class = 0; });
    reject([](SyntheticSpec& s) { s.n_attributes = 0; });
    reject([](SyntheticSpec& s) { s.values_per_attribute = 1; });
    reject([](SyntheticSpec& s) { s.noise_rate = 1.0; });
    reject([](SyntheticSpec& s) { s.noise_rate = -0.1; });
    reject([](SyntheticSpec& s) { s.min_prototype_distance = s.n_attributes + 1; });

    // a distance floor no prototype family can satisfy
    SyntheticSpec cramped;
    cramped.n_classes = 50;
    cramped.copies_per_class = 1;
    cramped.n_attributes = 2;
    cramped.values_per_attribute = 2;
    cramped.min_prototype_distance = 2;
    CHECK_THROWS_AS(generate_synthetic(cramped, 1), std::runtime_error);
}

// ============================================================================
// Plumbing
// ============================================================================

TEST_CASE("text file helpers") {
    TempDir tmp;
    write_text_file(tmp("t.txt"), "hello\nworld\n");
    CHECK(read_text_file(tmp("t.txt")) == "hello\nworld\n");
    CHECK(fixtures::thrown_what<std::runtime_error>(
              [&] { read_text_file(tmp("absent.txt")); })
              .find("cannot open") != std::string::npos);
}

TEST_CASE("run configuration validates and converts") {
    RunConfig rc;
    CHECK_NOTHROW(rc.validate());
    rc.epsilon = 0.0;
    CHECK_THROWS_AS(rc.validate(), std::invalid_argument);
    rc = RunConfig{};
    rc.alpha = 1.0;
    CHECK_THROWS_AS(rc.validate(), std::invalid_argument);

    rc = RunConfig{};
    rc.mode = MineMode::Exact;
    rc.alpha = 0.2;
    rc.max_premise_len = 4;
    rc.beam_width = 7;
    rc.mscr_strict = true;
    rc.threads = 2;
    const MinerConfig mc = rc.miner();
    CHECK(mc.mode == MineMode::Exact);
    CHECK(mc.alpha == 0.2);
    CHECK(mc.max_premise_len == 4);
    CHECK(mc.beam_width == 7);
    CHECK(mc.mscr_strict == true);
    CHECK(mc.threads == 2);
}
