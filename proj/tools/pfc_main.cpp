#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pfc/fixpoint.hpp"
#include "pfc/io.hpp"
#include "pfc/miner.hpp"
#include "pfc/oracle.hpp"
#include "pfc/synthetic.hpp"

namespace fs = std::filesystem;
using namespace pfc;

namespace {

// --threads wins, then PFC_THREADS, then all cores
std::int32_t resolve_threads(const CLI::Option* opt, std::int32_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("PFC_THREADS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("PFC_THREADS is not an integer: '" +
                                        std::string(env) + "'");
        }
    }
    return value;
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string out_dir;
    std::uint64_t seed = 1;
    SyntheticSpec spec;
};

int run_generate(const GenerateArgs& a) {
    const SyntheticData data = generate_synthetic(a.spec, a.seed);
    fs::create_directories(a.out_dir);

    save_schema(data.ctx.schema(), a.out_dir + "/schema.txt");
    save_context_csv(data.ctx, a.out_dir + "/data.csv");

    std::string labels = "name,label\n";
    for (std::size_t g = 0; g < data.ctx.object_count(); ++g)
        labels += data.ctx.object_names()[g] + "," + std::to_string(data.labels[g]) + "\n";
    write_text_file(a.out_dir + "/labels.csv", labels);

    std::string protos = "class";
    for (const AttributeSpec& attr : data.ctx.schema().attributes)
        protos += "," + attr.name;
    protos += '\n';
    for (std::size_t c = 0; c < data.prototypes.size(); ++c) {
        protos += std::to_string(c);
        for (std::int32_t v : data.prototypes[c])
            protos += ",v" + std::to_string(v);
        protos += '\n';
    }
    write_text_file(a.out_dir + "/prototypes.csv", protos);

    std::cout << "wrote " << data.ctx.object_count() << " objects ("
              << a.spec.n_classes << " classes x " << a.spec.copies_per_class
              << " copies, " << a.spec.n_attributes << " attributes, "
              << data.noisy_cells << " noisy cells) to " << a.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// mine
// ---------------------------------------------------------------------------

struct MineArgs {
    std::string schema_path, data_path, out_path;
    std::string mode = "fisher";
    RunConfig cfg;
};

int run_mine(const MineArgs& a) {
    a.cfg.validate();
    const Context ctx = load_context(a.schema_path, a.data_path);
    const Measure mu = Measure::for_context(ctx);
    RunConfig cfg = a.cfg;
    cfg.mode = a.mode == "exact" ? MineMode::Exact : MineMode::Fisher;
    const RuleSet rules = mine_rules(ctx, mu, cfg.miner());
    save_rules(ctx, rules, a.out_path);
    std::cout << "mined " << rules.size() << " terminal rules (" << a.mode << ", "
              << ctx.object_count() << " objects, " << ctx.atom_count() << " atoms) to "
              << a.out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------

struct ClusterArgs {
    std::string schema_path, data_path, rules_path, out_path, report_path;
    RunConfig cfg;
};

int run_cluster(const ClusterArgs& a) {
    a.cfg.validate();
    const Context ctx = load_context(a.schema_path, a.data_path);
    const RuleSet rules = load_rules(ctx, a.rules_path);
    const std::vector<FixedPointConcept> cs =
        cluster(ctx, rules, a.cfg.epsilon, a.cfg.threads);
    save_concepts(ctx, cs, a.cfg.epsilon, a.out_path);
    if (!a.report_path.empty())
        write_text_file(a.report_path, concepts_report(ctx, cs));
    std::cout << "found " << cs.size() << " concepts over " << ctx.object_count()
              << " objects with " << rules.size() << " rules; wrote " << a.out_path
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyArgs {
    std::string schema_path, data_path, rules_path, concepts_path, out_path;
    RunConfig cfg;
};

int run_classify(const ClassifyArgs& a) {
    a.cfg.validate();
    const Context ctx = load_context(a.schema_path, a.data_path);
    const RuleSet rules = load_rules(ctx, a.rules_path);
    const std::vector<FixedPointConcept> cs = load_concepts(ctx, a.concepts_path);

    std::string out = "name,concept\n";
    std::size_t assigned = 0;
    for (ObjectId g = 0; g < static_cast<ObjectId>(ctx.object_count()); ++g) {
        const FixpointResult fp =
            consistency_fixpoint(rules, ctx.object_intent(g), a.cfg.epsilon);
        std::int64_t which = -1;
        for (std::size_t i = 0; i < cs.size(); ++i)
            if (cs[i].intent == fp.literals) {
                which = static_cast<std::int64_t>(i) + 1;
                break;
            }
        out += ctx.object_names()[g];
        out += ',';
        if (which > 0) {
            out += std::to_string(which);
            ++assigned;
        }
        out += '\n';
    }
    write_text_file(a.out_path, out);
    std::cout << "assigned " << assigned << "/" << ctx.object_count()
              << " objects to concepts; wrote " << a.out_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string schema_path, data_path;
    std::string system = "eta1";
    OracleBudget budget;
    double epsilon = 1e-4;
};

int run_verify(const VerifyArgs& a) {
    const Context ctx = load_context(a.schema_path, a.data_path);
    const Measure mu = Measure::for_context(ctx);
    const RuleSystem system = a.system == "full" ? RuleSystem::Full : RuleSystem::EtaOne;
    const TheoremReport report = verify_theorems(ctx, mu, a.budget, system, a.epsilon);

    std::cout << "seeds checked: " << report.seeds_checked
              << "\nconcepts checked: " << report.concepts_checked
              << "\nfixed points checked: " << report.fixed_points_checked << "\n";
    for (const char* law :
         {"closure-consistency", "climb-closure-agreement", "concept-embedding"}) {
        std::size_t n = 0;
        for (const TheoremReport::Failure& f : report.failures)
            if (f.law == law) ++n;
        std::cout << (n == 0 ? "[PASS] " : "[FAIL] ") << law;
        if (n > 0) std::cout << " (" << n << " counterexamples)";
        std::cout << "\n";
    }
    for (const TheoremReport::Failure& f : report.failures)
        std::cout << "  " << f.law << ": " << f.detail << "\n";
    if (report.all_passed()) {
        std::cout << "all laws hold\n";
        return 0;
    }
    std::cout << report.failures.size() << " law violations\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"probabilistic causal rules and fixed-point concepts over categorical data"};
    app.set_version_flag("--version", "pfc 0.1.0");
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* cgen = app.add_subcommand("generate", "write a labeled synthetic dataset");
    cgen->add_option("--out", gen.out_dir, "output directory")->required();
    cgen->add_option("--seed", gen.seed, "generator seed");
    cgen->add_option("--classes", gen.spec.n_classes, "number of classes");
    cgen->add_option("--copies", gen.spec.copies_per_class, "objects per class");
    cgen->add_option("--attributes", gen.spec.n_attributes, "attribute count");
    cgen->add_option("--values", gen.spec.values_per_attribute, "values per attribute");
    cgen->add_option("--noise", gen.spec.noise_rate, "per-cell resample probability");
    cgen->add_option("--min-distance", gen.spec.min_prototype_distance,
                     "minimum pairwise prototype Hamming distance (-1: half the attributes)");

    MineArgs mine;
    CLI::App* cmine = app.add_subcommand("mine", "mine terminal causal rules");
    cmine->add_option("--schema", mine.schema_path, "schema file")->required();
    cmine->add_option("--data", mine.data_path, "data CSV")->required();
    cmine->add_option("--out", mine.out_path, "rules JSONL output")->required();
    cmine->add_option("--mode", mine.mode, "exact | fisher")
        ->check(CLI::IsMember({"exact", "fisher"}));
    cmine->add_option("--alpha", mine.cfg.alpha, "Fisher gate significance level");
    cmine->add_option("--max-premise", mine.cfg.max_premise_len, "premise literal cap");
    cmine->add_option("--beam", mine.cfg.beam_width, "beam width (0: unbounded)");
    cmine->add_flag("--mscr-strict", mine.cfg.mscr_strict,
                    "keep only maximal-probability terminals per conclusion");
    CLI::Option* mine_threads =
        cmine->add_option("--threads", mine.cfg.threads, "worker threads (0: all cores)");

    ClusterArgs clus;
    CLI::App* cclus = app.add_subcommand("cluster", "group objects by shared fixed points");
    cclus->add_option("--schema", clus.schema_path, "schema file")->required();
    cclus->add_option("--data", clus.data_path, "data CSV")->required();
    cclus->add_option("--rules", clus.rules_path, "rules JSONL")->required();
    cclus->add_option("--out", clus.out_path, "concepts JSONL output")->required();
    cclus->add_option("--report", clus.report_path, "optional human-readable report");
    cclus->add_option("--epsilon", clus.cfg.epsilon, "confidence weight epsilon");
    CLI::Option* clus_threads =
        cclus->add_option("--threads", clus.cfg.threads, "worker threads (0: all cores)");

    ClassifyArgs cls;
    CLI::App* ccls = app.add_subcommand("classify", "assign objects to known concepts");
    ccls->add_option("--schema", cls.schema_path, "schema file")->required();
    ccls->add_option("--data", cls.data_path, "data CSV")->required();
    ccls->add_option("--rules", cls.rules_path, "rules JSONL")->required();
    ccls->add_option("--concepts", cls.concepts_path, "concepts JSONL")->required();
    ccls->add_option("--out", cls.out_path, "assignment CSV output")->required();
    ccls->add_option("--epsilon", cls.cfg.epsilon, "confidence weight epsilon");

    VerifyArgs ver;
    CLI::App* cver = app.add_subcommand("verify", "check the fixed-point laws exhaustively");
    cver->add_option("--schema", ver.schema_path, "schema file")->required();
    cver->add_option("--data", ver.data_path, "data CSV")->required();
    cver->add_option("--system", ver.system, "eta1 | full")
        ->check(CLI::IsMember({"eta1", "full"}));
    cver->add_option("--budget-objects", ver.budget.max_objects, "object budget")
        ->check(CLI::Range(1, 8));
    cver->add_option("--budget-atoms", ver.budget.max_atoms, "atom budget")
        ->check(CLI::Range(1, 5));
    cver->add_option("--budget-premise", ver.budget.max_premise, "premise budget")
        ->check(CLI::Range(0, 3));
    cver->add_option("--epsilon", ver.epsilon, "confidence weight epsilon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version vs. usage error
    }

    try {
        if (cgen->parsed()) return run_generate(gen);
        if (cmine->parsed()) {
            mine.cfg.threads = resolve_threads(mine_threads, mine.cfg.threads);
            return run_mine(mine);
        }
        if (cclus->parsed()) {
            clus.cfg.threads = resolve_threads(clus_threads, clus.cfg.threads);
            return run_cluster(clus);
        }
        if (ccls->parsed()) return run_classify(cls);
        if (cver->parsed()) return run_verify(ver);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
