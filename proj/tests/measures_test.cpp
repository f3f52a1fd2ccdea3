#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "incmeter/measures.hpp"
#include "test_support.hpp"

using namespace incmeter;
using test::F;
using test::kb_of;

namespace {

std::set<std::set<std::string>> as_string_sets(const MisSet& mis) {
    std::set<std::set<std::string>> out;
    for (const auto& subset : mis.subsets) {
        std::set<std::string> keys;
        for (const Formula& f : subset) keys.insert(f.str());
        out.insert(std::move(keys));
    }
    return out;
}

const std::vector<std::string> kPaperExampleKb = {"a", "b", "!b", "c", "!c", "d | e"};

} // namespace

TEST_CASE("MIS enumeration on the two-conflict example") {
    MisSet mis = enumerate_mis(kb_of(kPaperExampleKb));
    CHECK(as_string_sets(mis) ==
          std::set<std::set<std::string>>{{"b", "!b"}, {"c", "!c"}});

    auto prob = test::keys_of(problematic(kb_of(kPaperExampleKb)));
    CHECK(prob == std::vector<std::string>{"b", "!b", "c", "!c"});
}

TEST_CASE("MIS enumeration on a single contradiction") {
    MisSet mis = enumerate_mis(kb_of({"a", "!a"}));
    CHECK(as_string_sets(mis) == std::set<std::set<std::string>>{{"a", "!a"}});
}

TEST_CASE("consistent KBs have no MIS") {
    CHECK(enumerate_mis(kb_of({"a", "!b & c", "d"})).empty());
    CHECK(enumerate_mis(KnowledgeBase{}).empty());
    CHECK(problematic(kb_of({"a | b"})).empty());
}

TEST_CASE("brute-force oracle reproduces the worked examples") {
    CHECK(as_string_sets(enumerate_mis_bruteforce(kb_of({"a", "!a"}))) ==
          std::set<std::set<std::string>>{{"a", "!a"}});
    CHECK(as_string_sets(enumerate_mis_bruteforce(kb_of(kPaperExampleKb))) ==
          std::set<std::set<std::string>>{{"b", "!b"}, {"c", "!c"}});
}

TEST_CASE("brute-force oracle rejects oversized KBs") {
    KnowledgeBase kb;
    std::vector<Atom> pool = make_atom_pool(9);
    Rng rng(1);
    while (kb.size() < 17) kb.add(generate_formula(rng, pool, 10));
    CHECK_THROWS_AS(enumerate_mis_bruteforce(kb), SizeCapError);
}

TEST_CASE("enumeration agrees with the brute-force oracle on random KBs") {
    Rng rng(123);
    for (int i = 0; i < 200; ++i) {
        KnowledgeBase kb = test::random_kb(rng, 6, 8);
        CHECK(as_string_sets(enumerate_mis(kb)) ==
              as_string_sets(enumerate_mis_bruteforce(kb)));
    }
}

TEST_CASE("every enumerated MIS is minimal") {
    Rng rng(321);
    for (int i = 0; i < 100; ++i) {
        KnowledgeBase kb = test::random_kb(rng, 5, 7);
        for (const auto& subset : enumerate_mis(kb).subsets) {
            CHECK(!is_consistent(subset));
            for (std::size_t drop = 0; drop < subset.size(); ++drop) {
                std::vector<Formula> smaller;
                for (std::size_t j = 0; j < subset.size(); ++j) {
                    if (j != drop) smaller.push_back(subset[j]);
                }
                CHECK(is_consistent(smaller));
            }
        }
    }
}

TEST_CASE("MisSet ordering is by cardinality, then serialization") {
    // {a,!a} (pair) comes before the 3-element conflict regardless of
    // member positions in the KB.
    KnowledgeBase kb = kb_of({"!a | b", "!b & c", "a", "!a"});
    MisSet mis = enumerate_mis(kb);
    REQUIRE(mis.size() == 2);
    CHECK(mis.subsets[0].size() == 2);
    CHECK(mis.subsets[1].size() == 3);
}

TEST_CASE("problematic of {a, !a, b}") {
    CHECK(test::keys_of(problematic(kb_of({"a", "!a", "b"}))) ==
          std::vector<std::string>{"a", "!a"});
}

TEST_CASE("i_mi on the introduction KBs") {
    CHECK(i_mi(kb_of({"a", "!a"})).value == 1);
    // a -> b written as !a | b; the grammar has no implication.
    CHECK(i_mi(kb_of({"a", "!a", "!a | b", "!b & c"})).value == 2);
    CHECK(i_mi(kb_of({"a", "b | c"})).value == 0);
}

TEST_CASE("i_mi of the nine-atom generator example") {
    KnowledgeBase kb = kb_of({
        "a | (c & d & !g) | !g",
        "a & b & d & !f & h",
        "!b & f & !g & h",
        "!b & !h & i",
        "(!a & b & d & g) | h",
        "!f & g",
    });
    CHECK(i_mi(kb).value == 5);
}

TEST_CASE("i_at counts atoms of the problematic set") {
    CHECK(i_at(kb_of(kPaperExampleKb)).value == 2); // atoms {b, c}
    CHECK(i_at(kb_of({"a", "!a"})).value == 1);
    CHECK(i_at(kb_of({"a", "!b & c"})).value == 0);
    CHECK(i_at(kb_of({"a", "!a"})).measure == Measure::AT);
}

TEST_CASE("measure postulates hold on random KBs") {
    Rng rng(55);
    std::vector<Atom> pool = make_atom_pool(5);
    for (int i = 0; i < 100; ++i) {
        KnowledgeBase kb = test::random_kb(rng, 5, 6);
        const auto mi = i_mi(kb).value;
        const auto at = i_at(kb).value;

        CHECK(at <= atoms_of(kb).size());
        if (is_consistent(kb)) {
            CHECK(mi == 0);
            CHECK(at == 0);
        }

        // Adding a fresh formula never removes an existing MIS.
        Formula extra = generate_formula(rng, pool, 6);
        if (kb.contains(extra)) continue;
        KnowledgeBase larger = kb;
        larger.add(extra);
        CHECK(i_mi(larger).value >= mi);
        CHECK(i_at(larger).value >= at);
    }
}

TEST_CASE("value_entropy on hand values") {
    CHECK(value_entropy(std::vector<double>{1, 1, 2, 2}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(value_entropy(std::vector<double>{5, 5, 5}) == doctest::Approx(0.0));
    CHECK(value_entropy(std::vector<double>{0, 1, 2, 3}) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK_THROWS_AS(value_entropy(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("value_entropy is non-negative and maximal for distinct values") {
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 20));
        std::vector<double> values;
        for (std::size_t j = 0; j < n; ++j) {
            values.push_back(static_cast<double>(rng.uniform_int(0, 5)));
        }
        CHECK(value_entropy(values) >= 0.0);

        std::vector<double> distinct;
        for (std::size_t j = 0; j < n; ++j) distinct.push_back(static_cast<double>(j));
        CHECK(value_entropy(distinct) ==
              doctest::Approx(std::log(static_cast<double>(n))).epsilon(1e-12));
    }
}

TEST_CASE("dataset_stats summarizes labels and the heuristic count") {
    Dataset dataset;
    LabeledInstance first;
    first.kb = kb_of({"a"});
    first.label_mi = 0;
    first.label_at = 0;
    LabeledInstance second;
    second.kb = kb_of({"a", "!a"});
    second.label_mi = 3; // stats read stored labels as-is
    second.label_at = 1;
    dataset.instances = {first, second};

    DatasetStats stats = dataset_stats(dataset);
    CHECK(stats.instance_count == 2);
    CHECK(stats.mi_max == 3);
    CHECK(stats.mi_min == 0);
    CHECK(stats.mi_entropy == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(stats.at_max == 1);
    CHECK(stats.flagged_consistent == 1); // {a} yes, {a, !a} no
    CHECK(stats.flagged_consistent <= stats.instance_count);
}
