#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "incmeter/dataset.hpp"
#include "incmeter/measures.hpp"

namespace incmeter {

/// Ordered list of distinct canonical formula strings; a KB is encoded as
/// its membership vector over these entries.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Appends `key` unless present; returns its column index.
    std::uint32_t intern(const std::string& key);

    std::optional<std::uint32_t> find(const std::string& key) const;
    const std::vector<std::string>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::string> entries_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Which flag-feature families are present and how they map to columns.
/// Column layout of a full row: vocabulary bits, then the consistency flag
/// (if enabled), then one upper_bound_<x> column per value in
/// upper_bound_values (ascending).
struct FlagSchema {
    bool consistency = false;
    std::vector<std::uint32_t> upper_bound_values;

    std::size_t flag_columns() const {
        return (consistency ? 1 : 0) + upper_bound_values.size();
    }
    friend bool operator==(const FlagSchema&, const FlagSchema&) = default;
};

/// Sparse row: indices of set vocabulary bits plus flag values.
/// kb_bit(j) = 1 iff vocabulary entry j is a member of the encoded KB.
struct FeatureVector {
    std::vector<std::uint32_t> kb_bits_on; // sorted vocabulary indices
    std::uint8_t consistent = 0;           // meaningful if schema.consistency
    std::optional<std::uint32_t> upper_bound; // |atoms_of(K)| if family enabled

    bool kb_bit(std::uint32_t j) const;
};

/// 1 iff no atom occurs somewhere positively and somewhere negated across
/// the KB's literal occurrences. Purely syntactic: sound for consistency,
/// not complete, and never calls the solver.
std::uint8_t consistency_flag(const KnowledgeBase& kb);

/// All distinct canonical formula strings across the datasets, in
/// first-occurrence order.
Vocabulary build_vocabulary(std::span<const Dataset* const> datasets);
Vocabulary build_vocabulary(const Dataset& dataset);

/// Encodes one KB against a vocabulary and flag schema. Every member of
/// `kb` must be in `vocab`, else UnknownFormulaError. If the upper-bound
/// family is enabled but |atoms_of(kb)| is not among the schema's values,
/// no upper-bound bit is set.
FeatureVector encode_kb(const KnowledgeBase& kb, const Vocabulary& vocab,
                        const FlagSchema& schema);

struct EncodeOptions {
    bool flags = true; // consistency flag; upper-bound too when target is AT
};

/// Rows, labels and schema for one dataset and target measure. The
/// upper-bound family is only ever enabled for the AT target.
struct EncodedDataset {
    Vocabulary vocabulary;
    FlagSchema schema;
    Measure target = Measure::MI;
    std::vector<FeatureVector> rows;
    std::vector<double> labels;

    std::size_t width() const { return vocabulary.size() + schema.flag_columns(); }
    std::size_t consistency_column() const { return vocabulary.size(); }
    std::size_t upper_bound_column(std::size_t k) const {
        return vocabulary.size() + (schema.consistency ? 1 : 0) + k;
    }

    /// Column indices (beyond the vocabulary) set in `row`.
    std::vector<std::uint32_t> flag_columns_on(const FeatureVector& row) const;

    /// Dense copy of one row, width() wide.
    std::vector<double> dense_row(std::size_t i) const;
};

EncodedDataset encode_dataset(const Dataset& dataset, Measure target,
                              const EncodeOptions& options = {});

/// Same, but against a fixed vocabulary (e.g. shared across datasets).
EncodedDataset encode_dataset(const Dataset& dataset, Measure target,
                              Vocabulary vocabulary, const EncodeOptions& options);

/// CSV export: header f0..fn-1, `consistent`, `upper_bound_<x>`..., `label`;
/// the sidecar JSON maps the f-columns back to formula strings.
void write_encoded_csv(const EncodedDataset& encoded, const std::string& csv_path,
                       const std::string& sidecar_path);

/// 64-bit FNV-1a fingerprint of the vocabulary entries and flag schema.
/// Stored with model checkpoints to detect encoding mismatches.
std::uint64_t encoding_fingerprint(const Vocabulary& vocab, const FlagSchema& schema);

} // namespace incmeter
