#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfc/bitset.hpp"

namespace pfc {

using AtomId = std::int32_t;
using ObjectId = std::int32_t;
using GroupId = std::int32_t;

// One boolean feature of the signature: "attribute = value".
struct Atom {
    AtomId id = -1;
    GroupId group = -1;       // owning attribute
    std::int32_t value = -1;  // index into the attribute's value list
    std::string label;        // "attr=value"
};

// Signed atom. Canonical order: by atom id, positive before negative,
// so the dense code is atom*2 + (negative ? 1 : 0).
struct Literal {
    AtomId atom = -1;
    bool negative = false;

    std::int32_t code() const { return atom * 2 + (negative ? 1 : 0); }
    Literal negated() const { return {atom, !negative}; }
    static Literal from_code(std::int32_t c) { return {c / 2, (c & 1) != 0}; }

    friend bool operator==(const Literal&, const Literal&) = default;
    friend bool operator<(const Literal& a, const Literal& b) { return a.code() < b.code(); }
};

inline Literal pos(AtomId a) { return {a, false}; }
inline Literal neg(AtomId a) { return {a, true}; }

// Sorted, duplicate-free set of literals. Consistent (no atom with both signs)
// unless explicitly flagged otherwise; closure results may carry the flag.
class LiteralSet {
public:
    LiteralSet() = default;
    explicit LiteralSet(std::vector<Literal> lits);   // sorts, dedupes, validates

    static LiteralSet flagged_inconsistent(std::vector<Literal> lits);

    bool contains(Literal l) const;
    bool subset_of(const LiteralSet& other) const;
    bool consistent() const { return consistent_; }
    bool empty() const { return lits_.empty(); }
    std::size_t size() const { return lits_.size(); }

    // insert keeping order; inserting the complement of a member throws unless
    // the set is already flagged inconsistent
    void insert(Literal l);
    void erase(Literal l);

    const std::vector<Literal>& literals() const { return lits_; }
    auto begin() const { return lits_.begin(); }
    auto end() const { return lits_.end(); }

    friend bool operator==(const LiteralSet&, const LiteralSet&) = default;
    // lexicographic on literal codes; used for deterministic output orders
    friend bool operator<(const LiteralSet& a, const LiteralSet& b);

private:
    std::vector<Literal> lits_;
    bool consistent_ = true;
};

enum class Encoding { OneHot, Boolean };

struct AttributeSpec {
    std::string name;
    Encoding encoding = Encoding::OneHot;
    std::vector<std::string> values;  // boolean attributes implicitly use {0,1}
};

struct Schema {
    std::vector<AttributeSpec> attributes;
};

struct AttributeGroup {
    GroupId id = -1;
    std::string name;
    Encoding encoding = Encoding::OneHot;
    std::vector<std::string> values;
    std::vector<AtomId> atoms;  // one per value (one-hot) or exactly one (boolean)
};

// One input row: object name + one cell per schema attribute ("" = missing).
struct RawRow {
    std::string name;
    std::vector<std::string> cells;
    double weight = 1.0;
};

struct FormalConcept {
    std::vector<ObjectId> extent;
    std::vector<AtomId> intent;
    friend bool operator==(const FormalConcept&, const FormalConcept&) = default;
};

// Immutable categorical context: objects x atoms incidence plus a per-object
// mask of which attributes are known. Atom ids follow schema order, so a
// schema + rows pair always rebuilds the identical signature.
class Context {
public:
    std::size_t object_count() const { return object_names_.size(); }
    std::size_t atom_count() const { return atoms_.size(); }
    std::size_t group_count() const { return groups_.size(); }
    std::size_t literal_count() const { return atoms_.size() * 2; }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const Atom& atom(AtomId a) const { return atoms_[a]; }
    const std::vector<AttributeGroup>& groups() const { return groups_; }
    const std::vector<std::string>& object_names() const { return object_names_; }
    const std::vector<double>& weights() const { return weights_; }

    std::string literal_label(Literal l) const;
    // inverse of literal_label; throws std::invalid_argument on unknown labels
    Literal parse_literal(const std::string& label) const;

    bool incident(ObjectId g, AtomId m) const { return rows_[g].test(m); }
    bool group_known(ObjectId g, GroupId a) const { return known_[g].test(a); }
    const Bitset& row(ObjectId g) const { return rows_[g]; }

    // truth of a signed atom for an object; an object missing the attribute
    // satisfies neither sign
    bool satisfies(ObjectId g, Literal l) const;
    bool satisfies(ObjectId g, const LiteralSet& ls) const;

    // objects satisfying a literal, as a bitset over objects
    const Bitset& literal_column(Literal l) const { return columns_[l.code()]; }
    Bitset support(const LiteralSet& ls) const;
    std::int64_t support_count(const LiteralSet& ls) const;

    // full signed intent of an object; unknown attributes contribute nothing
    LiteralSet object_intent(ObjectId g) const;

    // A -> common atoms (empty A -> every atom)
    std::vector<AtomId> derive_up(const std::vector<ObjectId>& objs) const;
    // B -> objects carrying every atom of B (empty B -> every object)
    std::vector<ObjectId> derive_down(const std::vector<AtomId>& atoms) const;
    // signed variant: objects satisfying every literal
    std::vector<ObjectId> derive_down(const LiteralSet& ls) const;

    // all classical concepts in canonical closure order; requires atom_count <= 20
    // and throws std::overflow_error when the count would exceed max_concepts
    std::vector<FormalConcept> formal_concepts(std::size_t max_concepts = 1u << 20) const;

    const Schema& schema() const { return schema_; }
    bool has_explicit_weights() const { return has_explicit_weights_; }

private:
    friend Context build_context(const Schema& schema, const std::vector<RawRow>& rows);

    Schema schema_;
    std::vector<Atom> atoms_;
    std::vector<AttributeGroup> groups_;
    std::vector<std::string> object_names_;
    std::vector<double> weights_;  // raw weights as given (1.0 default)
    bool has_explicit_weights_ = false;
    std::vector<Bitset> rows_;     // object -> atoms
    std::vector<Bitset> known_;    // object -> groups
    std::vector<Bitset> columns_;  // literal code -> objects satisfying it
};

// Validates cells against the schema; errors carry row/column coordinates.
// Duplicate rows are kept (they weight the measure).
Context build_context(const Schema& schema, const std::vector<RawRow>& rows);

} // namespace pfc
