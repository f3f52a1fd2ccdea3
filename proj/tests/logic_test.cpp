#include <doctest.h>

#include <algorithm>

#include "incmeter/knowledge_base.hpp"
#include "test_support.hpp"

using namespace incmeter;
using test::F;
using test::kb_of;

TEST_CASE("parser respects precedence: & binds tighter than |") {
    Formula f = F("a & !b | c");
    REQUIRE(!f.is_literal());
    CHECK(f.connective() == Connective::Or);
    REQUIRE(f.children().size() == 2);
    const Formula& left = f.children()[0];
    CHECK(left.connective() == Connective::And);
    CHECK(left.children()[0].literal().atom.name == "a");
    CHECK(left.children()[1].literal().negated);
    CHECK(f.children()[1].literal().atom.name == "c");
}

TEST_CASE("parser flattens same-connective chains") {
    Formula f = F("!b & f & !g & h");
    CHECK(f.connective() == Connective::And);
    REQUIRE(f.children().size() == 4);
    for (const Formula& child : f.children()) CHECK(child.is_literal());
    CHECK(f.children()[0].literal().negated);
    CHECK(f.children()[3].literal().atom.name == "h");
}

TEST_CASE("negation of a compound is rejected") {
    CHECK_THROWS_AS(F("!(a & b)"), ParseError);
    try {
        F("!(a & b)");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::NegatedCompound);
        CHECK(e.position() == 0);
    }
    // '!' must be followed by an atom, never another '!'
    CHECK_THROWS_AS(F("!!a"), ParseError);
}

TEST_CASE("syntax errors carry positions") {
    try {
        F("a & ");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.kind() == ParseError::Kind::Syntax);
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(F(""), ParseError);
    CHECK_THROWS_AS(F("A"), ParseError);
    CHECK_THROWS_AS(F("a | (b & c"), ParseError);
    CHECK_THROWS_AS(F("a b"), ParseError);
    CHECK_NOTHROW(F("  a   &\tb "));
}

TEST_CASE("canonical serialization") {
    Formula f = Formula::disj({Formula::conj({F("a"), F("!b")}), F("c")});
    CHECK(f.str() == "a & !b | c");
    CHECK(F("!g").str() == "!g");
    Formula g = Formula::conj({Formula::disj({F("a"), F("b")}), F("c")});
    CHECK(g.str() == "(a | b) & c");
    CHECK(serialize_formula(g) == g.str());
}

TEST_CASE("parse/serialize round-trips on the worked examples") {
    for (const char* text : {"a & !b | c", "!b & f & !g & h", "(a | b) & c",
                             "a | c & d & !g | !g", "!a & b & d & g | h"}) {
        Formula f = F(text);
        CHECK(f.str() == text);
        CHECK(parse_formula(f.str()) == f);
    }
    // Redundant parentheses are accepted on input and dropped canonically.
    CHECK(F("a | (c & d & !g) | !g") == F("a | c & d & !g | !g"));
    CHECK(F("(!a & b & d & g) | h").str() == "!a & b & d & g | h");
}

TEST_CASE("round-trip holds on generated formulas") {
    Rng rng(2024);
    std::vector<Atom> pool = make_atom_pool(6);
    for (int i = 0; i < 300; ++i) {
        Formula f = generate_formula(rng, pool, 10);
        Formula back = parse_formula(serialize_formula(f));
        CHECK(back == f);
        CHECK(back.str() == f.str());
    }
}

TEST_CASE("construction from already-flattened children changes nothing") {
    Formula f = F("a & b & c | d");
    // Rebuild from its own parts.
    std::vector<Formula> parts(f.children().begin(), f.children().end());
    Formula rebuilt = Formula::disj(std::move(parts));
    CHECK(rebuilt == f);

    Formula nested = Formula::conj({Formula::conj({F("a"), F("b")}), F("c")});
    CHECK(nested == F("a & b & c"));
    CHECK(nested.children().size() == 3);
}

TEST_CASE("atoms_of") {
    CHECK(test::keys_of({}) == std::vector<std::string>{});
    auto names = [](const std::vector<Atom>& atoms) {
        std::vector<std::string> out;
        for (const Atom& a : atoms) out.push_back(a.name);
        return out;
    };
    CHECK(names(atoms_of(kb_of({"a", "!b & c", "d"}))) ==
          std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(names(atoms_of(kb_of({"a", "!a"}))) == std::vector<std::string>{"a"});
    CHECK(names(atoms_of(KnowledgeBase{})).empty());
    CHECK(names(atoms_of(F("x | x & y"))) == std::vector<std::string>{"x", "y"});
}

TEST_CASE("knowledge bases deduplicate by canonical string") {
    KnowledgeBase kb;
    CHECK(kb.add(F("a & b")));
    CHECK(!kb.add(F("a  &  b")));
    CHECK(kb.add(F("b & a"))); // syntactic identity, not semantic
    CHECK(kb.size() == 2);
}

TEST_CASE("satisfies implements standard semantics") {
    Interpretation w{{"a", true}, {"b", false}};
    CHECK(satisfies(w, F("a & !b")));
    CHECK(!satisfies(w, F("b")));

    Interpretation w2{{"a", true}};
    CHECK(!satisfies(w2, kb_of({"a", "!a"})));

    Interpretation w3{{"d", false}, {"e", true}};
    CHECK(satisfies(w3, F("d | e")));
}

TEST_CASE("satisfies rejects partial interpretations") {
    Interpretation w{{"a", true}};
    CHECK_THROWS_AS(satisfies(w, F("a & b")), MissingAtomError);
    try {
        satisfies(w, F("a & b"));
    } catch (const MissingAtomError& e) {
        CHECK(e.atom() == "b");
    }
}

TEST_CASE("is_consistent on the worked examples") {
    CHECK(!is_consistent(kb_of({"a", "!a"})));
    CHECK(is_consistent(kb_of({"a", "!b & c", "d"})));
    CHECK(is_consistent(KnowledgeBase{}));
    CHECK(!is_consistent(kb_of({"a & !a"})));
}

TEST_CASE("is_consistent guards the atom cap") {
    KnowledgeBase kb;
    std::vector<Atom> pool = make_atom_pool(25);
    std::vector<Formula> lits;
    for (const Atom& a : pool) lits.push_back(Formula::lit(a));
    kb.add(Formula::conj(std::move(lits)));
    CHECK_THROWS_AS(is_consistent(kb), AtomCapError);
    CHECK_NOTHROW(is_consistent(kb, 25));
}

namespace {

// Naive model counter over the public Interpretation API; independent of
// the bit-twiddling path inside is_consistent.
std::size_t count_models(const KnowledgeBase& kb) {
    std::vector<Atom> atoms = atoms_of(kb);
    std::size_t models = 0;
    const std::size_t total = std::size_t{1} << atoms.size();
    for (std::size_t bits = 0; bits < total; ++bits) {
        Interpretation w;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            w.set(atoms[i].name, (bits >> i) & 1);
        }
        if (satisfies(w, kb)) ++models;
    }
    return models;
}

} // namespace

TEST_CASE("consistency agrees with a naive model counter") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        KnowledgeBase kb = test::random_kb(rng, 6, 5, 6);
        CHECK(is_consistent(kb) == (count_models(kb) > 0));
    }
}

TEST_CASE("subsets of consistent sets stay consistent") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        KnowledgeBase kb = test::random_kb(rng, 5, 6);
        if (!is_consistent(kb)) continue;
        std::vector<Formula> subset;
        for (const Formula& f : kb) {
            if (rng.bernoulli(0.5)) subset.push_back(f);
        }
        CHECK(is_consistent(subset));
    }
}

TEST_CASE("parse_kb splits on semicolons") {
    KnowledgeBase kb = parse_kb("a & !a");
    CHECK(kb.size() == 1);
    KnowledgeBase kb2 = parse_kb(" a ; !a ; a | b ");
    CHECK(kb2.size() == 3);
    CHECK(kb2.formulas()[2].str() == "a | b");
}
