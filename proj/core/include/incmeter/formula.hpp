#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "incmeter/errors.hpp"

namespace incmeter {

/// A propositional variable. Names are a lowercase letter followed by
/// lowercase letters, digits or underscores.
struct Atom {
    std::string name;

    explicit Atom(std::string n);

    static bool valid_name(std::string_view name);

    friend bool operator==(const Atom& a, const Atom& b) { return a.name == b.name; }
    friend bool operator<(const Atom& a, const Atom& b) { return a.name < b.name; }
};

/// An atom or its negation. Negation never applies to anything deeper.
struct Literal {
    Atom atom;
    bool negated = false;

    std::string str() const { return negated ? "!" + atom.name : atom.name; }

    friend bool operator==(const Literal& a, const Literal& b) {
        return a.negated == b.negated && a.atom == b.atom;
    }
};

enum class Connective { And, Or };

/// Immutable formula tree: a literal, or an And/Or node with >= 2 children.
/// Same-connective nesting is flattened on construction, so an And node
/// never has an And child (likewise Or). Copies are cheap (shared nodes).
class Formula {
public:
    static Formula lit(Literal l);
    static Formula lit(Atom a, bool negated = false);

    /// Conjunction of `children`, flattened. A single child is returned
    /// as-is; empty input is invalid.
    static Formula conj(std::vector<Formula> children);
    static Formula disj(std::vector<Formula> children);

    bool is_literal() const;
    const Literal& literal() const;
    Connective connective() const;
    const std::vector<Formula>& children() const;

    /// Canonical text form; parse_formula(str()) reconstructs this tree.
    std::string str() const;

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula combine(Connective op, std::vector<Formula> children);

    std::shared_ptr<const Node> node_;
};

/// Parses the concrete syntax
///
///   disj := conj ('|' conj)*
///   conj := unit ('&' unit)*
///   unit := ['!'] atom | '(' disj ')'
///
/// '&' binds tighter than '|'; '!' applies to atoms only; whitespace is
/// insignificant. Throws ParseError with the offending byte offset.
Formula parse_formula(std::string_view text);

/// Canonical serialization: literals as `a`/`!a`, children joined by
/// ` & `/` | `, a child parenthesized iff its connective differs from the
/// parent's. Inverse of parse_formula.
std::string serialize_formula(const Formula& f);

/// Distinct atoms of `f`, sorted by name.
std::vector<Atom> atoms_of(const Formula& f);

} // namespace incmeter
