#include "incmeter/encoding.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace incmeter {

std::uint32_t Vocabulary::intern(const std::string& key) {
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(entries_.size());
    entries_.push_back(key);
    index_.emplace(key, id);
    return id;
}

std::optional<std::uint32_t> Vocabulary::find(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool FeatureVector::kb_bit(std::uint32_t j) const {
    return std::binary_search(kb_bits_on.begin(), kb_bits_on.end(), j);
}

namespace {

void collect_polarities(const Formula& f, std::set<std::string>& positive,
                        std::set<std::string>& negative) {
    if (f.is_literal()) {
        const Literal& l = f.literal();
        (l.negated ? negative : positive).insert(l.atom.name);
        return;
    }
    for (const Formula& child : f.children()) {
        collect_polarities(child, positive, negative);
    }
}

} // namespace

std::uint8_t consistency_flag(const KnowledgeBase& kb) {
    std::set<std::string> positive, negative;
    for (const Formula& f : kb.formulas()) {
        collect_polarities(f, positive, negative);
    }
    for (const std::string& name : positive) {
        if (negative.count(name)) return 0;
    }
    return 1;
}

Vocabulary build_vocabulary(std::span<const Dataset* const> datasets) {
    Vocabulary vocab;
    for (const Dataset* dataset : datasets) {
        for (const LabeledInstance& inst : dataset->instances) {
            for (const Formula& f : inst.kb.formulas()) vocab.intern(f.str());
        }
    }
    return vocab;
}

Vocabulary build_vocabulary(const Dataset& dataset) {
    const Dataset* ptr = &dataset;
    return build_vocabulary(std::span<const Dataset* const>(&ptr, 1));
}

FeatureVector encode_kb(const KnowledgeBase& kb, const Vocabulary& vocab,
                        const FlagSchema& schema) {
    FeatureVector row;
    row.kb_bits_on.reserve(kb.size());
    for (const Formula& f : kb.formulas()) {
        std::string key = f.str();
        auto idx = vocab.find(key);
        if (!idx) throw UnknownFormulaError(key);
        row.kb_bits_on.push_back(*idx);
    }
    std::sort(row.kb_bits_on.begin(), row.kb_bits_on.end());
    if (schema.consistency) row.consistent = consistency_flag(kb);
    if (!schema.upper_bound_values.empty()) {
        row.upper_bound = static_cast<std::uint32_t>(atoms_of(kb).size());
    }
    return row;
}

std::vector<std::uint32_t> EncodedDataset::flag_columns_on(
    const FeatureVector& row) const {
    std::vector<std::uint32_t> on;
    if (schema.consistency && row.consistent) {
        on.push_back(static_cast<std::uint32_t>(consistency_column()));
    }
    if (row.upper_bound) {
        auto it = std::lower_bound(schema.upper_bound_values.begin(),
                                   schema.upper_bound_values.end(), *row.upper_bound);
        if (it != schema.upper_bound_values.end() && *it == *row.upper_bound) {
            on.push_back(static_cast<std::uint32_t>(
                upper_bound_column(it - schema.upper_bound_values.begin())));
        }
    }
    return on;
}

std::vector<double> EncodedDataset::dense_row(std::size_t i) const {
    const FeatureVector& row = rows[i];
    std::vector<double> dense(width(), 0.0);
    for (std::uint32_t j : row.kb_bits_on) dense[j] = 1.0;
    for (std::uint32_t j : flag_columns_on(row)) dense[j] = 1.0;
    return dense;
}

EncodedDataset encode_dataset(const Dataset& dataset, Measure target,
                              const EncodeOptions& options) {
    return encode_dataset(dataset, target, build_vocabulary(dataset), options);
}

EncodedDataset encode_dataset(const Dataset& dataset, Measure target,
                              Vocabulary vocabulary, const EncodeOptions& options) {
    EncodedDataset encoded;
    encoded.vocabulary = std::move(vocabulary);
    encoded.target = target;
    encoded.schema.consistency = options.flags;
    if (options.flags && target == Measure::AT) {
        std::set<std::uint32_t> observed;
        for (const LabeledInstance& inst : dataset.instances) {
            observed.insert(static_cast<std::uint32_t>(atoms_of(inst.kb).size()));
        }
        encoded.schema.upper_bound_values.assign(observed.begin(), observed.end());
    }
    encoded.rows.reserve(dataset.size());
    encoded.labels.reserve(dataset.size());
    for (const LabeledInstance& inst : dataset.instances) {
        encoded.rows.push_back(encode_kb(inst.kb, encoded.vocabulary, encoded.schema));
        encoded.labels.push_back(static_cast<double>(
            target == Measure::MI ? inst.label_mi : inst.label_at));
    }
    return encoded;
}

void write_encoded_csv(const EncodedDataset& encoded, const std::string& csv_path,
                       const std::string& sidecar_path) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot open " + csv_path);
    for (std::size_t j = 0; j < encoded.vocabulary.size(); ++j) {
        out << 'f' << j << ',';
    }
    if (encoded.schema.consistency) out << "consistent,";
    for (std::uint32_t x : encoded.schema.upper_bound_values) {
        out << "upper_bound_" << x << ',';
    }
    out << "label\n";
    for (std::size_t i = 0; i < encoded.rows.size(); ++i) {
        std::vector<double> dense = encoded.dense_row(i);
        for (double v : dense) out << static_cast<int>(v) << ',';
        out << encoded.labels[i] << '\n';
    }

    nlohmann::ordered_json sidecar;
    sidecar["formula_columns"] = encoded.vocabulary.entries();
    sidecar["consistency_flag"] = encoded.schema.consistency;
    sidecar["upper_bound_values"] = encoded.schema.upper_bound_values;
    std::ofstream side(sidecar_path);
    if (!side) throw std::runtime_error("cannot open " + sidecar_path);
    side << sidecar.dump(2) << '\n';
}

std::uint64_t encoding_fingerprint(const Vocabulary& vocab, const FlagSchema& schema) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const std::string& entry : vocab.entries()) {
        mix(entry.data(), entry.size());
        mix("\n", 1);
    }
    mix(schema.consistency ? "C1" : "C0", 2);
    for (std::uint32_t x : schema.upper_bound_values) mix(&x, sizeof(x));
    return h;
}

} // namespace incmeter
