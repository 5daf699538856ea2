#include "pfc/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace pfc {

using ordered_json = nlohmann::ordered_json;

namespace {

// shortest round-tripping decimal form of a double
std::string num(double v) { return ordered_json(v).dump(); }

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::string& origin) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    std::size_t line_no = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
                if (c == '\n') ++line_no;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty())
                    throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                                             ": stray quote inside a field");
                quoted = true;
                any = true;
                break;
            case ',':
                end_field();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                if (any || !field.empty() || !row.empty()) end_row();
                ++line_no;
                break;
            default:
                field += c;
                any = true;
        }
    }
    if (quoted)
        throw std::runtime_error(origin + ": unterminated quoted field");
    if (any || !field.empty() || !row.empty()) end_row();
    return rows;
}

std::string group_cell(const Context& ctx, ObjectId g, const AttributeGroup& grp) {
    if (!ctx.group_known(g, grp.id)) return "";
    if (grp.encoding == Encoding::Boolean)
        return ctx.incident(g, grp.atoms[0]) ? "1" : "0";
    for (std::size_t v = 0; v < grp.atoms.size(); ++v)
        if (ctx.incident(g, grp.atoms[v])) return grp.values[v];
    return "";
}

std::vector<std::string> labels_of(const Context& ctx, const LiteralSet& ls) {
    std::vector<std::string> out;
    for (Literal l : ls) out.push_back(ctx.literal_label(l));
    return out;
}

LiteralSet set_of(const Context& ctx, const std::vector<std::string>& labels) {
    std::vector<Literal> lits;
    for (const std::string& s : labels) lits.push_back(ctx.parse_literal(s));
    return LiteralSet(std::move(lits));
}

ordered_json parse_json_line(const std::string& line, const std::string& origin,
                             std::size_t line_no) {
    try {
        return ordered_json::parse(line);
    } catch (const std::exception& e) {
        throw std::runtime_error(origin + " line " + std::to_string(line_no) + ": " +
                                 e.what());
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
    return lines;
}

} // namespace

// ============================================================================
// RunConfig
// ============================================================================

void RunConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie strictly between 0 and 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie strictly between 0 and 1");
    if (max_premise_len < 0) throw std::invalid_argument("max_premise_len must be >= 0");
    if (beam_width < 0) throw std::invalid_argument("beam_width must be >= 0");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

MinerConfig RunConfig::miner() const {
    MinerConfig cfg;
    cfg.mode = mode;
    cfg.alpha = alpha;
    cfg.max_premise_len = max_premise_len;
    cfg.beam_width = beam_width;
    cfg.mscr_strict = mscr_strict;
    cfg.threads = threads;
    return cfg;
}

// ============================================================================
// Schema
// ============================================================================

Schema load_schema(const std::string& path) {
    const std::string text = read_text_file(path);
    Schema schema;
    std::size_t line_no = 0;
    for (const std::string& raw : split_lines(text)) {
        ++line_no;
        const std::string line = raw.substr(0, raw.find('#'));
        const std::vector<std::string> toks = tokenize(line);
        if (toks.empty()) continue;
        AttributeSpec attr;
        attr.name = toks[0];
        if (toks.size() < 2)
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": missing encoding for attribute '" + attr.name + "'");
        if (toks[1] == "boolean") {
            attr.encoding = Encoding::Boolean;
            if (toks.size() > 2)
                throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                         ": boolean attributes take no value list");
        } else if (toks[1] == "onehot") {
            attr.encoding = Encoding::OneHot;
            attr.values.assign(toks.begin() + 2, toks.end());
            if (attr.values.size() < 2)
                throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                         ": onehot attribute '" + attr.name +
                                         "' needs at least two values");
        } else {
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": unknown encoding '" + toks[1] + "'");
        }
        schema.attributes.push_back(std::move(attr));
    }
    if (schema.attributes.empty()) throw std::runtime_error(path + ": empty schema");
    return schema;
}

void save_schema(const Schema& schema, const std::string& path) {
    std::string out = "# attribute  encoding  values...\n";
    for (const AttributeSpec& attr : schema.attributes) {
        out += attr.name;
        out += attr.encoding == Encoding::Boolean ? " boolean" : " onehot";
        for (const std::string& v : attr.values) {
            out += ' ';
            out += v;
        }
        out += '\n';
    }
    write_text_file(path, out);
}

// ============================================================================
// Context CSV
// ============================================================================

std::vector<RawRow> load_rows(const Schema& schema, const std::string& path) {
    const auto table = parse_csv(read_text_file(path), path);
    if (table.empty()) throw std::runtime_error(path + ": empty data file");

    const std::vector<std::string>& header = table[0];
    const std::size_t n_attrs = schema.attributes.size();
    bool has_weight = false;
    if (header.size() == n_attrs + 2 && header.back() == "weight") has_weight = true;
    else if (header.size() != n_attrs + 1)
        throw std::runtime_error(path + ": header has " + std::to_string(header.size()) +
                                 " fields, schema expects " + std::to_string(n_attrs + 1) +
                                 " (name + attributes) or an extra trailing 'weight'");
    if (header[0] != "name")
        throw std::runtime_error(path + ": first header field must be 'name'");
    for (std::size_t a = 0; a < n_attrs; ++a)
        if (header[a + 1] != schema.attributes[a].name)
            throw std::runtime_error(path + ": header field '" + header[a + 1] +
                                     "' does not match schema attribute '" +
                                     schema.attributes[a].name + "'");

    std::vector<RawRow> rows;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const std::vector<std::string>& rec = table[i];
        if (rec.size() != header.size())
            throw std::runtime_error(path + " record " + std::to_string(i) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(rec.size()));
        RawRow row;
        row.name = rec[0];
        row.cells.assign(rec.begin() + 1, rec.begin() + 1 + n_attrs);
        if (has_weight) {
            try {
                row.weight = std::stod(rec.back());
            } catch (const std::exception&) {
                throw std::runtime_error(path + " record " + std::to_string(i) +
                                         ": bad weight '" + rec.back() + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Context load_context(const std::string& schema_path, const std::string& csv_path) {
    const Schema schema = load_schema(schema_path);
    return build_context(schema, load_rows(schema, csv_path));
}

void save_context_csv(const Context& ctx, const std::string& path) {
    std::string out = "name";
    for (const AttributeGroup& grp : ctx.groups()) {
        out += ',';
        out += csv_quote(grp.name);
    }
    if (ctx.has_explicit_weights()) out += ",weight";
    out += '\n';
    for (ObjectId g = 0; g < static_cast<ObjectId>(ctx.object_count()); ++g) {
        out += csv_quote(ctx.object_names()[g]);
        for (const AttributeGroup& grp : ctx.groups()) {
            out += ',';
            out += csv_quote(group_cell(ctx, g, grp));
        }
        if (ctx.has_explicit_weights()) {
            out += ',';
            out += num(ctx.weights()[g]);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

// ============================================================================
// Rule dumps
// ============================================================================

std::string rules_to_jsonl(const Context& ctx, const RuleSet& rules) {
    ordered_json head;
    head["kind"] = "rules";
    head["mode"] = rules.mode == MineMode::Exact ? "exact" : "fisher";
    head["alpha"] = rules.alpha;
    head["max_premise_len"] = rules.max_premise_len;
    head["count"] = rules.size();
    std::string out = head.dump() + "\n";

    for (std::size_t i = 0; i < rules.size(); ++i) {
        const CausalRule& r = rules[i];
        ordered_json j;
        j["premise"] = labels_of(ctx, r.premise);
        j["conclusion"] = ctx.literal_label(r.conclusion);
        j["n_premise"] = r.n_premise;
        j["n_both"] = r.n_both;
        j["eta"] = r.eta;
        if (r.p_value) j["p_value"] = *r.p_value;
        else j["p_value"] = nullptr;
        j["chain_len"] = r.chain_len;
        out += j.dump() + "\n";
    }
    return out;
}

RuleSet parse_rules_jsonl(const Context& ctx, const std::string& text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw std::runtime_error("rule dump: empty input");
    const ordered_json head = parse_json_line(lines[0], "rule dump", 1);
    if (head.value("kind", "") != "rules")
        throw std::runtime_error("rule dump: missing metadata record");

    RuleSet rs;
    rs.mode = head.value("mode", "exact") == "fisher" ? MineMode::Fisher : MineMode::Exact;
    rs.alpha = head.value("alpha", 0.01);
    rs.max_premise_len = head.value("max_premise_len", 0);

    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const ordered_json j = parse_json_line(lines[i], "rule dump", i + 1);
        CausalRule r(set_of(ctx, j.at("premise").get<std::vector<std::string>>()),
                     ctx.parse_literal(j.at("conclusion").get<std::string>()));
        r.n_premise = j.at("n_premise").get<std::int64_t>();
        r.n_both = j.at("n_both").get<std::int64_t>();
        r.eta = j.at("eta").get<double>();
        if (!j.at("p_value").is_null()) r.p_value = j.at("p_value").get<double>();
        r.chain_len = j.at("chain_len").get<std::int32_t>();
        rs.add(std::move(r));
    }
    if (rs.size() != head.at("count").get<std::size_t>())
        throw std::runtime_error("rule dump: count mismatch against metadata");
    return rs;
}

void save_rules(const Context& ctx, const RuleSet& rules, const std::string& path) {
    write_text_file(path, rules_to_jsonl(ctx, rules));
}

RuleSet load_rules(const Context& ctx, const std::string& path) {
    return parse_rules_jsonl(ctx, read_text_file(path));
}

// ============================================================================
// Concept dumps
// ============================================================================

std::string concepts_to_jsonl(const Context& ctx, const std::vector<FixedPointConcept>& cs,
                              double epsilon) {
    ordered_json head;
    head["kind"] = "concepts";
    head["epsilon"] = epsilon;
    head["count"] = cs.size();
    std::string out = head.dump() + "\n";
    for (const FixedPointConcept& c : cs) {
        ordered_json j;
        j["intent"] = labels_of(ctx, c.intent);
        j["seeds"] = c.seeds;
        j["extent"] = c.extent;
        std::vector<std::string> names;
        for (ObjectId g : c.extent) names.push_back(ctx.object_names()[g]);
        j["objects"] = names;
        j["score"] = c.score;
        out += j.dump() + "\n";
    }
    return out;
}

std::vector<FixedPointConcept> parse_concepts_jsonl(const Context& ctx,
                                                    const std::string& text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw std::runtime_error("concept dump: empty input");
    const ordered_json head = parse_json_line(lines[0], "concept dump", 1);
    if (head.value("kind", "") != "concepts")
        throw std::runtime_error("concept dump: missing metadata record");

    std::vector<FixedPointConcept> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const ordered_json j = parse_json_line(lines[i], "concept dump", i + 1);
        FixedPointConcept c;
        c.intent = set_of(ctx, j.at("intent").get<std::vector<std::string>>());
        c.seeds = j.at("seeds").get<std::vector<ObjectId>>();
        c.extent = j.at("extent").get<std::vector<ObjectId>>();
        c.score = j.at("score").get<double>();
        out.push_back(std::move(c));
    }
    if (out.size() != head.at("count").get<std::size_t>())
        throw std::runtime_error("concept dump: count mismatch against metadata");
    return out;
}

void save_concepts(const Context& ctx, const std::vector<FixedPointConcept>& cs,
                   double epsilon, const std::string& path) {
    write_text_file(path, concepts_to_jsonl(ctx, cs, epsilon));
}

std::vector<FixedPointConcept> load_concepts(const Context& ctx, const std::string& path) {
    return parse_concepts_jsonl(ctx, read_text_file(path));
}

std::string concepts_report(const Context& ctx, const std::vector<FixedPointConcept>& cs) {
    std::ostringstream os;
    os << cs.size() << " concepts\n";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const FixedPointConcept& c = cs[i];
        os << "\n== concept " << (i + 1) << ": " << c.extent.size() << " objects ("
           << c.seeds.size() << " seeds), score " << num(c.score) << " ==\n";
        std::size_t negatives = 0;
        os << "  holds:";
        for (Literal l : c.intent) {
            if (l.negative) {
                ++negatives;
                continue;
            }
            os << ' ' << ctx.literal_label(l);
        }
        os << "\n  excluded values: " << negatives << "\n  objects:";
        for (ObjectId g : c.extent) os << ' ' << ctx.object_names()[g];
        os << '\n';
    }
    return os.str();
}

// ============================================================================
// files
// ============================================================================

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace pfc
