#include "pfc/context.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace pfc {

// ---------------------------------------------------------------------------
// LiteralSet
// ---------------------------------------------------------------------------

LiteralSet::LiteralSet(std::vector<Literal> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (std::size_t i = 1; i < lits_.size(); ++i)
        if (lits_[i].atom == lits_[i - 1].atom)
            throw std::invalid_argument("LiteralSet: complementary pair on atom " +
                                        std::to_string(lits_[i].atom));
}

LiteralSet LiteralSet::flagged_inconsistent(std::vector<Literal> lits) {
    LiteralSet s;
    s.lits_ = std::move(lits);
    std::sort(s.lits_.begin(), s.lits_.end());
    s.lits_.erase(std::unique(s.lits_.begin(), s.lits_.end()), s.lits_.end());
    s.consistent_ = false;
    return s;
}

bool LiteralSet::contains(Literal l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool LiteralSet::subset_of(const LiteralSet& other) const {
    return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
}

void LiteralSet::insert(Literal l) {
    auto it = std::lower_bound(lits_.begin(), lits_.end(), l);
    if (it != lits_.end() && *it == l) return;
    if (consistent_ && contains(l.negated()))
        throw std::invalid_argument("LiteralSet::insert would create a complementary pair");
    lits_.insert(it, l);
}

void LiteralSet::erase(Literal l) {
    auto it = std::lower_bound(lits_.begin(), lits_.end(), l);
    if (it != lits_.end() && *it == l) lits_.erase(it);
}

bool operator<(const LiteralSet& a, const LiteralSet& b) {
    return std::lexicographical_compare(a.lits_.begin(), a.lits_.end(),
                                        b.lits_.begin(), b.lits_.end());
}

// ---------------------------------------------------------------------------
// build_context
// ---------------------------------------------------------------------------

Context build_context(const Schema& schema, const std::vector<RawRow>& rows) {
    Context ctx;
    ctx.schema_ = schema;

    for (std::size_t ai = 0; ai < schema.attributes.size(); ++ai) {
        const AttributeSpec& spec = schema.attributes[ai];
        if (spec.name.empty())
            throw std::invalid_argument("schema: attribute " + std::to_string(ai) + " has no name");
        AttributeGroup g;
        g.id = static_cast<GroupId>(ai);
        g.name = spec.name;
        g.encoding = spec.encoding;
        if (spec.encoding == Encoding::Boolean) {
            g.values = {"0", "1"};
            Atom m;
            m.id = static_cast<AtomId>(ctx.atoms_.size());
            m.group = g.id;
            m.value = 1;
            m.label = g.name + "=1";
            g.atoms.push_back(m.id);
            ctx.atoms_.push_back(std::move(m));
        } else {
            if (spec.values.empty())
                throw std::invalid_argument("schema: attribute '" + spec.name + "' lists no values");
            g.values = spec.values;
            for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
                Atom m;
                m.id = static_cast<AtomId>(ctx.atoms_.size());
                m.group = g.id;
                m.value = static_cast<std::int32_t>(vi);
                m.label = g.name + "=" + spec.values[vi];
                g.atoms.push_back(m.id);
                ctx.atoms_.push_back(std::move(m));
            }
        }
        ctx.groups_.push_back(std::move(g));
    }

    // per-group value lookup
    std::vector<std::unordered_map<std::string, std::int32_t>> value_index(ctx.groups_.size());
    for (const auto& g : ctx.groups_)
        for (std::size_t vi = 0; vi < g.values.size(); ++vi)
            value_index[g.id][g.values[vi]] = static_cast<std::int32_t>(vi);

    const std::size_t natoms = ctx.atoms_.size();
    const std::size_t ngroups = ctx.groups_.size();
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
        const RawRow& row = rows[ri];
        if (row.cells.size() != ngroups)
            throw std::invalid_argument("row " + std::to_string(ri) + " ('" + row.name + "'): expected " +
                                        std::to_string(ngroups) + " cells, got " +
                                        std::to_string(row.cells.size()));
        if (!(row.weight > 0.0))
            throw std::invalid_argument("row " + std::to_string(ri) + " ('" + row.name +
                                        "'): weight must be positive");
        Bitset r(natoms), k(ngroups);
        for (std::size_t ci = 0; ci < ngroups; ++ci) {
            const std::string& cell = row.cells[ci];
            if (cell.empty()) continue;  // missing value: no evidence either way
            auto it = value_index[ci].find(cell);
            if (it == value_index[ci].end())
                throw std::invalid_argument("row " + std::to_string(ri) + ", column '" +
                                            ctx.groups_[ci].name + "': value '" + cell +
                                            "' not in schema");
            k.set(ci);
            if (ctx.groups_[ci].encoding == Encoding::Boolean) {
                if (it->second == 1) r.set(ctx.groups_[ci].atoms[0]);
            } else {
                r.set(ctx.groups_[ci].atoms[it->second]);
            }
        }
        ctx.object_names_.push_back(row.name);
        ctx.weights_.push_back(row.weight);
        if (row.weight != 1.0) ctx.has_explicit_weights_ = true;
        ctx.rows_.push_back(std::move(r));
        ctx.known_.push_back(std::move(k));
    }

    // literal columns: positive = incidence, negative = known group minus incidence
    const std::size_t nobj = ctx.object_names_.size();
    ctx.columns_.assign(natoms * 2, Bitset(nobj));
    for (std::size_t g = 0; g < nobj; ++g) {
        for (AtomId m = 0; m < static_cast<AtomId>(natoms); ++m) {
            if (ctx.rows_[g].test(m))
                ctx.columns_[pos(m).code()].set(g);
            else if (ctx.known_[g].test(ctx.atoms_[m].group))
                ctx.columns_[neg(m).code()].set(g);
        }
    }
    return ctx;
}

// ---------------------------------------------------------------------------
// Context queries
// ---------------------------------------------------------------------------

std::string Context::literal_label(Literal l) const {
    return (l.negative ? "!" : "") + atoms_[l.atom].label;
}

Literal Context::parse_literal(const std::string& label) const {
    std::string s = label;
    bool negative = false;
    if (!s.empty() && s[0] == '!') {
        negative = true;
        s.erase(s.begin());
    }
    for (const Atom& m : atoms_)
        if (m.label == s) return {m.id, negative};
    throw std::invalid_argument("unknown literal label '" + label + "'");
}

bool Context::satisfies(ObjectId g, Literal l) const {
    return columns_[l.code()].test(g);
}

bool Context::satisfies(ObjectId g, const LiteralSet& ls) const {
    for (Literal l : ls)
        if (!satisfies(g, l)) return false;
    return true;
}

Bitset Context::support(const LiteralSet& ls) const {
    Bitset s(object_count(), true);
    for (Literal l : ls) s &= columns_[l.code()];
    return s;
}

std::int64_t Context::support_count(const LiteralSet& ls) const {
    return static_cast<std::int64_t>(support(ls).count());
}

LiteralSet Context::object_intent(ObjectId g) const {
    std::vector<Literal> lits;
    for (const Atom& m : atoms_) {
        if (rows_[g].test(m.id))
            lits.push_back(pos(m.id));
        else if (known_[g].test(m.group))
            lits.push_back(neg(m.id));
    }
    return LiteralSet(std::move(lits));
}

std::vector<AtomId> Context::derive_up(const std::vector<ObjectId>& objs) const {
    Bitset common(atom_count(), true);
    for (ObjectId g : objs) common &= rows_[g];
    std::vector<AtomId> out;
    common.for_each_set([&](std::size_t m) { out.push_back(static_cast<AtomId>(m)); });
    return out;
}

std::vector<ObjectId> Context::derive_down(const std::vector<AtomId>& atoms) const {
    Bitset s(object_count(), true);
    for (AtomId m : atoms) s &= columns_[pos(m).code()];
    std::vector<ObjectId> out;
    s.for_each_set([&](std::size_t g) { out.push_back(static_cast<ObjectId>(g)); });
    return out;
}

std::vector<ObjectId> Context::derive_down(const LiteralSet& ls) const {
    Bitset s = support(ls);
    std::vector<ObjectId> out;
    s.for_each_set([&](std::size_t g) { out.push_back(static_cast<ObjectId>(g)); });
    return out;
}

// ---------------------------------------------------------------------------
// classical concepts (canonical lectic closure enumeration)
// ---------------------------------------------------------------------------

namespace {

// closure B -> (B down) up, atom sets as 20-bit masks
std::uint32_t classical_closure(const Context& ctx, std::uint32_t bset) {
    const std::size_t n = ctx.atom_count();
    Bitset ext(ctx.object_count(), true);
    for (std::size_t m = 0; m < n; ++m)
        if (bset >> m & 1) ext &= ctx.literal_column(pos(static_cast<AtomId>(m)));
    std::uint32_t closed = (n == 32) ? ~0u : ((1u << n) - 1);
    bool any = false;
    ext.for_each_set([&](std::size_t g) {
        any = true;
        std::uint32_t row = 0;
        ctx.row(static_cast<ObjectId>(g)).for_each_set([&](std::size_t m) { row |= 1u << m; });
        closed &= row;
    });
    if (!any) return (n == 32) ? ~0u : ((1u << n) - 1);  // empty extent -> full intent
    return closed;
}

} // namespace

std::vector<FormalConcept> Context::formal_concepts(std::size_t max_concepts) const {
    const std::size_t n = atom_count();
    if (n > 20)
        throw std::invalid_argument("formal_concepts: refusing signature with more than 20 atoms");

    auto emit = [&](std::uint32_t bset, std::vector<FormalConcept>& out) {
        if (out.size() >= max_concepts)
            throw std::overflow_error("formal_concepts: concept count exceeds cap of " +
                                      std::to_string(max_concepts));
        FormalConcept c;
        for (std::size_t m = 0; m < n; ++m)
            if (bset >> m & 1) c.intent.push_back(static_cast<AtomId>(m));
        c.extent = derive_down(c.intent);
        out.push_back(std::move(c));
    };

    std::vector<FormalConcept> out;
    std::uint32_t a = classical_closure(*this, 0);
    emit(a, out);
    const std::uint32_t full = (n == 0) ? 0 : ((1u << n) - 1);
    while (a != full) {
        bool advanced = false;
        for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
            const std::uint32_t bit = 1u << i;
            if (a & bit) continue;
            std::uint32_t below = a & (bit - 1);
            std::uint32_t b = classical_closure(*this, below | bit);
            // lectic successor test: the closure may add atoms only at i or above
            if ((b & (bit - 1)) == below) {
                a = b;
                emit(a, out);
                advanced = true;
                break;
            }
        }
        if (!advanced) break;  // unreachable for correct lectic enumeration
    }
    return out;
}

} // namespace pfc
