#include <doctest.h>

#include <set>
#include <sstream>

#include "incmeter/dataset_io.hpp"
#include "incmeter/measures.hpp"
#include "test_support.hpp"

using namespace incmeter;

namespace {

std::size_t literal_occurrences(const Formula& f) {
    if (f.is_literal()) return 1;
    std::size_t n = 0;
    for (const Formula& child : f.children()) n += literal_occurrences(child);
    return n;
}

std::string dataset_text(const Dataset& dataset) {
    std::ostringstream out;
    save_dataset(dataset, out);
    return out.str();
}

} // namespace

TEST_CASE("max_lits=1 always yields a bare literal") {
    Rng rng(5);
    std::vector<Atom> pool = make_atom_pool(3);
    for (int i = 0; i < 50; ++i) {
        CHECK(generate_formula(rng, pool, 1).is_literal());
    }
}

TEST_CASE("generated formulas respect the literal budget") {
    Rng rng(6);
    std::vector<Atom> pool = make_atom_pool(9);
    for (int i = 0; i < 300; ++i) {
        const std::size_t n = literal_occurrences(generate_formula(rng, pool, 10));
        CHECK(n >= 1);
        CHECK(n <= 10);
    }
}

TEST_CASE("formula generation is deterministic under the seed") {
    std::vector<Atom> pool = make_atom_pool(6);
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(generate_formula(a, pool, 10).str() == generate_formula(b, pool, 10).str());
    }
}

TEST_CASE("generated KBs respect configuration bounds") {
    GenConfig config;
    config.atom_pool = 3;
    config.max_formulas = 5;
    Rng rng(17);
    const std::set<std::string> pool_names = {"a", "b", "c"};
    for (int i = 0; i < 100; ++i) {
        KnowledgeBase kb = generate_kb(rng, config);
        CHECK(kb.size() >= 1);
        CHECK(kb.size() <= 5);
        std::set<std::string> keys;
        for (const Formula& f : kb) {
            CHECK(keys.insert(f.str()).second); // distinct members
            CHECK(literal_occurrences(f) <= 10);
        }
        for (const Atom& a : atoms_of(kb)) CHECK(pool_names.count(a.name) == 1);
    }
}

TEST_CASE("duplicate rejection gives up on tiny configuration spaces") {
    GenConfig config;
    config.atom_pool = 1;
    config.max_formulas = 10;
    config.max_literal_occurrences = 1;
    Rng rng(3);
    KnowledgeBase kb = generate_kb(rng, config);
    CHECK(kb.size() <= 2); // only "a" and "!a" exist
}

TEST_CASE("datasets are a pure function of the config") {
    GenConfig config;
    config.atom_pool = 3;
    config.max_formulas = 5;
    config.n_instances = 30;
    config.seed = 7;
    CHECK(dataset_text(generate_dataset(config)) ==
          dataset_text(generate_dataset(config)));

    config.seed = 8;
    CHECK(dataset_text(generate_dataset(config)) !=
          dataset_text(generate_dataset(GenConfig{3, 5, 10, 30, 7})));
}

TEST_CASE("labels are exact and bounded by the pool") {
    GenConfig config;
    config.atom_pool = 4;
    config.max_formulas = 6;
    config.n_instances = 40;
    config.seed = 99;
    Dataset dataset = generate_dataset(config);
    REQUIRE(dataset.size() == 40);
    for (const LabeledInstance& inst : dataset.instances) {
        CHECK(inst.label_at <= config.atom_pool);
    }
    // Spot-check against the independent brute-force oracle.
    for (std::size_t i = 0; i < 10; ++i) {
        const LabeledInstance& inst = dataset.instances[i * 4];
        MisSet oracle = enumerate_mis_bruteforce(inst.kb);
        CHECK(inst.label_mi == oracle.size());
        std::set<std::string> atoms;
        for (const auto& subset : oracle.subsets) {
            for (const Formula& f : subset) {
                for (const Atom& a : atoms_of(f)) atoms.insert(a.name);
            }
        }
        CHECK(inst.label_at == atoms.size());
    }
}

TEST_CASE("save/load round-trips") {
    GenConfig config;
    config.atom_pool = 3;
    config.max_formulas = 5;
    config.n_instances = 25;
    config.seed = 13;
    Dataset dataset = generate_dataset(config);

    std::stringstream buffer;
    save_dataset(dataset, buffer);
    Dataset loaded = load_dataset(buffer, true);

    REQUIRE(loaded.size() == dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        CHECK(loaded.instances[i].kb == dataset.instances[i].kb);
        CHECK(loaded.instances[i].label_mi == dataset.instances[i].label_mi);
        CHECK(loaded.instances[i].label_at == dataset.instances[i].label_at);
    }
}

TEST_CASE("schema errors name the offending line") {
    std::stringstream missing_kb;
    missing_kb << R"({"kb": ["a"], "i_mi": 0, "i_at": 0})" << '\n'
               << R"({"i_mi": 0, "i_at": 0})" << '\n';
    try {
        load_dataset(missing_kb);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("kb") != std::string::npos);
    }

    std::stringstream bad_json;
    bad_json << "not json\n";
    CHECK_THROWS_AS(load_dataset(bad_json), SchemaError);

    std::stringstream negative;
    negative << R"({"kb": ["a"], "i_mi": -1, "i_at": 0})" << '\n';
    CHECK_THROWS_AS(load_dataset(negative), SchemaError);
}

TEST_CASE("verification catches corrupted labels") {
    std::stringstream wrong;
    wrong << R"({"kb": ["a", "!a"], "i_mi": 0, "i_at": 0})" << '\n';
    CHECK_NOTHROW(load_dataset(wrong));
    wrong.clear();
    wrong.seekg(0);
    try {
        load_dataset(wrong, true);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.line() == 1);
    }
}
