#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfc/context.hpp"
#include "pfc/fixpoint.hpp"
#include "pfc/miner.hpp"
#include "pfc/rules.hpp"

namespace pfc {

// Validated bundle of run parameters shared by the CLI subcommands.
struct RunConfig {
    MineMode mode = MineMode::Fisher;
    double alpha = 0.01;
    double epsilon = 1e-4;
    std::int32_t max_premise_len = 5;
    std::int32_t beam_width = 0;
    bool mscr_strict = false;
    std::int32_t threads = 0;  // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument
    MinerConfig miner() const;
};

// ============================================================================
// Schema text format: one attribute per line,
//   <name> onehot <value> <value> ...
//   <name> boolean
// '#' starts a comment; names and values are whitespace-free tokens.
// ============================================================================

Schema load_schema(const std::string& path);
void save_schema(const Schema& schema, const std::string& path);

// ============================================================================
// Data CSV: header "name,<attr>,...[,weight]" matching the schema order;
// empty cells are missing values.
// ============================================================================

std::vector<RawRow> load_rows(const Schema& schema, const std::string& path);
Context load_context(const std::string& schema_path, const std::string& csv_path);
void save_context_csv(const Context& ctx, const std::string& path);

// ============================================================================
// Rule and concept dumps: JSON lines with a leading metadata record. Dumps of
// equal inputs are byte-identical; parse_* reproduce the original objects.
// ============================================================================

std::string rules_to_jsonl(const Context& ctx, const RuleSet& rules);
RuleSet parse_rules_jsonl(const Context& ctx, const std::string& text);
void save_rules(const Context& ctx, const RuleSet& rules, const std::string& path);
RuleSet load_rules(const Context& ctx, const std::string& path);

std::string concepts_to_jsonl(const Context& ctx, const std::vector<FixedPointConcept>& cs,
                              double epsilon);
std::vector<FixedPointConcept> parse_concepts_jsonl(const Context& ctx,
                                                    const std::string& text);
void save_concepts(const Context& ctx, const std::vector<FixedPointConcept>& cs,
                   double epsilon, const std::string& path);
std::vector<FixedPointConcept> load_concepts(const Context& ctx, const std::string& path);

// human-readable cluster summary: positives spelled out per attribute
std::string concepts_report(const Context& ctx, const std::vector<FixedPointConcept>& cs);

// ============================================================================
// misc file helpers
// ============================================================================

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace pfc
