#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "incmeter/formula.hpp"

namespace incmeter {

/// Finite set of distinct formulas. Distinctness is canonical-string
/// equality; iteration order is insertion order.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    explicit KnowledgeBase(std::vector<Formula> formulas);

    /// Adds `f` unless an equal formula is already present.
    /// Returns true if the formula was inserted.
    bool add(Formula f);

    bool contains(const Formula& f) const { return keys_.count(f.str()) > 0; }

    const std::vector<Formula>& formulas() const { return formulas_; }
    std::size_t size() const { return formulas_.size(); }
    bool empty() const { return formulas_.empty(); }

    auto begin() const { return formulas_.begin(); }
    auto end() const { return formulas_.end(); }

    friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
        return a.formulas_ == b.formulas_;
    }

private:
    std::vector<Formula> formulas_;
    std::unordered_set<std::string> keys_;
};

/// Parses a ';'-separated list of formulas into a KnowledgeBase.
KnowledgeBase parse_kb(std::string_view text);

/// Distinct atoms across all members, sorted by name.
std::vector<Atom> atoms_of(const KnowledgeBase& kb);
std::vector<Atom> atoms_of(const std::vector<Formula>& formulas);

/// Total truth assignment over some atom set.
class Interpretation {
public:
    Interpretation() = default;
    Interpretation(std::initializer_list<std::pair<std::string, bool>> assignments);

    void set(const std::string& atom, bool value) { assignment_[atom] = value; }

    /// Throws MissingAtomError if `atom` is unassigned.
    bool value(const std::string& atom) const;
    bool assigns(const std::string& atom) const { return assignment_.count(atom) > 0; }

    const std::map<std::string, bool>& assignment() const { return assignment_; }

private:
    std::map<std::string, bool> assignment_;
};

/// Standard propositional satisfaction. Throws MissingAtomError if `w`
/// does not cover the formula's atoms.
bool satisfies(const Interpretation& w, const Formula& f);

/// A set of formulas is satisfied iff every member is.
bool satisfies(const Interpretation& w, const std::vector<Formula>& formulas);
bool satisfies(const Interpretation& w, const KnowledgeBase& kb);

/// Interpretations are enumerated over exactly this many atoms at most;
/// beyond it is_consistent throws AtomCapError.
inline constexpr std::size_t kDefaultAtomCap = 24;

/// True iff some interpretation over atoms_of(X) satisfies every formula.
/// Enumerates all 2^|atoms| interpretations, stopping at the first model.
/// The empty set is consistent.
bool is_consistent(const std::vector<Formula>& formulas,
                   std::size_t atom_cap = kDefaultAtomCap);
bool is_consistent(const KnowledgeBase& kb, std::size_t atom_cap = kDefaultAtomCap);

namespace detail {

/// Formula compiled against a fixed atom ordering: atoms are bit positions
/// in an assignment word. Used by the enumeration loops.
struct CompiledFormula {
    struct Op {
        // 0 = literal, 1 = and, 2 = or
        int kind;
        std::uint32_t bit;     // literal: atom bit index
        bool negated;          // literal
        std::vector<Op> children;
    };
    Op root;

    bool eval(std::uint32_t assignment) const { return eval_node(root, assignment); }

private:
    static bool eval_node(const Op& op, std::uint32_t assignment);
};

CompiledFormula compile(const Formula& f, const std::vector<Atom>& atom_order);

} // namespace detail

} // namespace incmeter
