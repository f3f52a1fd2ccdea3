#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "incmeter/datagen.hpp"
#include "incmeter/encoding.hpp"
#include "test_support.hpp"

using namespace incmeter;
using test::kb_of;

namespace {

Dataset tiny_dataset(const std::vector<std::vector<std::string>>& kbs) {
    Dataset dataset;
    for (const auto& texts : kbs) {
        dataset.instances.push_back(label_instance(kb_of(texts)));
    }
    return dataset;
}

Dataset random_dataset(std::uint32_t atoms, std::uint32_t max_formulas,
                       std::uint32_t n, std::uint64_t seed) {
    GenConfig config;
    config.atom_pool = atoms;
    config.max_formulas = max_formulas;
    config.n_instances = n;
    config.seed = seed;
    return generate_dataset(config);
}

} // namespace

TEST_CASE("vocabulary lists formulas in first-occurrence order") {
    Dataset d1 = tiny_dataset({{"a", "!a"}});
    Dataset d2 = tiny_dataset({{"!a", "b"}});
    const Dataset* both[] = {&d1, &d2};
    Vocabulary vocab = build_vocabulary(both);
    CHECK(vocab.entries() == std::vector<std::string>{"a", "!a", "b"});
    CHECK(vocab.find("!a") == 1u);
    CHECK(!vocab.find("c").has_value());

    // Rebuilding from the same inputs gives the identical ordering.
    CHECK(build_vocabulary(both).entries() == vocab.entries());
}

TEST_CASE("disjoint datasets contribute the sum of their distinct formulas") {
    Dataset d1 = tiny_dataset({{"a", "b"}, {"a"}});
    Dataset d2 = tiny_dataset({{"c & d"}, {"!c"}});
    const Dataset* both[] = {&d1, &d2};
    CHECK(build_vocabulary(both).size() == 4);
}

TEST_CASE("encode_kb sets exactly the membership bits") {
    Vocabulary vocab;
    vocab.intern("a");
    vocab.intern("!a");
    vocab.intern("b");
    FeatureVector row = encode_kb(kb_of({"a", "!a"}), vocab, FlagSchema{});
    CHECK(row.kb_bits_on == std::vector<std::uint32_t>{0, 1});
    CHECK(row.kb_bit(0));
    CHECK(row.kb_bit(1));
    CHECK(!row.kb_bit(2));
}

TEST_CASE("encode_kb rejects formulas outside the vocabulary") {
    Vocabulary vocab;
    vocab.intern("a");
    CHECK_THROWS_AS(encode_kb(kb_of({"a", "b"}), vocab, FlagSchema{}),
                    UnknownFormulaError);
}

TEST_CASE("consistency heuristic fires exactly on polarity-clean KBs") {
    CHECK(consistency_flag(kb_of({"a", "!b & c", "d"})) == 1);
    // Sound but not complete: consistent KB with both polarities of a.
    KnowledgeBase kb = kb_of({"a | b", "!a"});
    CHECK(consistency_flag(kb) == 0);
    CHECK(is_consistent(kb));
    CHECK(consistency_flag(KnowledgeBase{}) == 1);
}

TEST_CASE("encoded row width follows the flag schema") {
    Dataset dataset = random_dataset(3, 5, 50, 21);

    EncodedDataset plain = encode_dataset(dataset, Measure::AT, {.flags = false});
    CHECK(plain.width() == plain.vocabulary.size());
    CHECK(plain.schema.flag_columns() == 0);

    EncodedDataset flagged = encode_dataset(dataset, Measure::AT, {.flags = true});
    std::set<std::size_t> atom_counts;
    for (const LabeledInstance& inst : dataset.instances) {
        atom_counts.insert(atoms_of(inst.kb).size());
    }
    CHECK(flagged.width() == flagged.vocabulary.size() + 1 + atom_counts.size());

    // The upper-bound family is AT-only.
    EncodedDataset mi = encode_dataset(dataset, Measure::MI, {.flags = true});
    CHECK(mi.schema.upper_bound_values.empty());
    CHECK(mi.width() == mi.vocabulary.size() + 1);
}

TEST_CASE("worked flag examples") {
    Dataset dataset = tiny_dataset({{"a", "!b & c", "d"}, {"a", "!a"}});
    EncodedDataset encoded = encode_dataset(dataset, Measure::AT, {.flags = true});
    CHECK(encoded.rows[0].consistent == 1);
    CHECK(encoded.rows[1].consistent == 0);
    REQUIRE(encoded.rows[1].upper_bound.has_value());
    CHECK(*encoded.rows[1].upper_bound == 1);

    auto on = encoded.flag_columns_on(encoded.rows[1]);
    // upper_bound_1 is the first upper-bound column (values sorted: 1, 4).
    REQUIRE(encoded.schema.upper_bound_values ==
            std::vector<std::uint32_t>{1, 4});
    CHECK(on == std::vector<std::uint32_t>{
                    static_cast<std::uint32_t>(encoded.upper_bound_column(0))});
}

TEST_CASE("at most one upper-bound bit per row") {
    Dataset dataset = random_dataset(6, 8, 80, 5);
    EncodedDataset encoded = encode_dataset(dataset, Measure::AT, {.flags = true});
    for (const FeatureVector& row : encoded.rows) {
        std::size_t ub_bits = 0;
        for (std::uint32_t col : encoded.flag_columns_on(row)) {
            if (col >= encoded.upper_bound_column(0)) ++ub_bits;
        }
        CHECK(ub_bits == 1);
    }
}

TEST_CASE("heuristic soundness and label coherence on random KBs") {
    Dataset dataset = random_dataset(4, 6, 300, 77);
    EncodedDataset encoded = encode_dataset(dataset, Measure::AT, {.flags = true});
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const LabeledInstance& inst = dataset.instances[i];
        if (encoded.rows[i].consistent == 1) {
            CHECK(is_consistent(inst.kb));
            CHECK(inst.label_mi == 0);
            CHECK(inst.label_at == 0);
        }
        if (encoded.rows[i].upper_bound) {
            CHECK(inst.label_at <= *encoded.rows[i].upper_bound);
        }
    }
}

TEST_CASE("consistency column total matches dataset_stats") {
    Dataset dataset = random_dataset(3, 5, 200, 8);
    EncodedDataset encoded = encode_dataset(dataset, Measure::MI, {.flags = true});
    std::size_t column_sum = 0;
    for (const FeatureVector& row : encoded.rows) column_sum += row.consistent;
    CHECK(column_sum == dataset_stats(dataset).flagged_consistent);
}

TEST_CASE("encoding is injective on KBs over a fixed vocabulary") {
    Dataset dataset = random_dataset(4, 5, 120, 31);
    EncodedDataset encoded = encode_dataset(dataset, Measure::MI, {.flags = false});
    std::set<std::vector<std::uint32_t>> seen;
    std::set<std::vector<std::string>> distinct_kbs;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        std::vector<std::string> keys = test::keys_of(dataset.instances[i].kb.formulas());
        std::sort(keys.begin(), keys.end());
        if (distinct_kbs.insert(std::move(keys)).second) {
            CHECK(seen.insert(encoded.rows[i].kb_bits_on).second);
        }
    }
}

TEST_CASE("CSV export writes the documented layout") {
    Dataset dataset = tiny_dataset({{"a", "!a"}, {"b"}});
    EncodedDataset encoded = encode_dataset(dataset, Measure::AT, {.flags = true});
    const std::string csv = "encoding_test_out.csv";
    const std::string sidecar = "encoding_test_out.vocab.json";
    write_encoded_csv(encoded, csv, sidecar);

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header.find("f0,f1,f2,consistent,upper_bound_1,label") == 0);
    std::string row;
    std::getline(in, row);
    CHECK(row == "1,1,0,0,1,1"); // {a,!a}: bits, flag 0, ub_1 set, i_at 1
    std::getline(in, row);
    CHECK(row == "0,0,1,1,1,0");

    std::ifstream side(sidecar);
    REQUIRE(side.good());
    nlohmann::json meta = nlohmann::json::parse(side);
    CHECK(meta["formula_columns"] ==
          nlohmann::json(std::vector<std::string>{"a", "!a", "b"}));
    std::remove(csv.c_str());
    std::remove(sidecar.c_str());
}

TEST_CASE("fingerprint tracks vocabulary and schema changes") {
    Vocabulary v1;
    v1.intern("a");
    Vocabulary v2;
    v2.intern("a");
    v2.intern("b");
    FlagSchema plain;
    FlagSchema flagged;
    flagged.consistency = true;
    CHECK(encoding_fingerprint(v1, plain) == encoding_fingerprint(v1, plain));
    CHECK(encoding_fingerprint(v1, plain) != encoding_fingerprint(v2, plain));
    CHECK(encoding_fingerprint(v1, plain) != encoding_fingerprint(v1, flagged));
}
