#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "incmeter/dataset.hpp"
#include "incmeter/knowledge_base.hpp"

namespace incmeter {

/// All minimal inconsistent subsets of a knowledge base. Members keep the
/// source KB's formula order; the list is ordered by cardinality, then by
/// canonical serialization.
struct MisSet {
    std::vector<std::vector<Formula>> subsets;

    std::size_t size() const { return subsets.size(); }
    bool empty() const { return subsets.empty(); }
};

/// Exact MIS enumeration by ascending subset cardinality: any size-s subset
/// that is a superset of an already-found MIS is skipped, the rest are
/// checked for consistency; an inconsistent survivor is minimal by
/// construction. Throws AtomCapError through the consistency check.
MisSet enumerate_mis(const KnowledgeBase& kb, std::size_t atom_cap = kDefaultAtomCap);

/// Independent oracle: checks all 2^|K| subsets with is_consistent and
/// filters for inclusion-minimality pairwise. Requires |K| <= 16.
MisSet enumerate_mis_bruteforce(const KnowledgeBase& kb,
                                std::size_t atom_cap = kDefaultAtomCap);

/// Formulas occurring in at least one MIS, in KB order.
std::vector<Formula> problematic(const KnowledgeBase& kb,
                                 std::size_t atom_cap = kDefaultAtomCap);

enum class Measure { MI, AT };

struct MeasureValue {
    Measure measure;
    std::uint64_t value;
};

/// Number of minimal inconsistent subsets.
MeasureValue i_mi(const KnowledgeBase& kb, std::size_t atom_cap = kDefaultAtomCap);

/// Number of distinct atoms occurring in problematic formulas.
MeasureValue i_at(const KnowledgeBase& kb, std::size_t atom_cap = kDefaultAtomCap);

/// Entropy of the value distribution: H = -sum_v (f_v/n) ln(f_v/n) over the
/// unique values v with frequency f_v. Throws std::invalid_argument on
/// empty input.
double value_entropy(std::span<const double> values);

/// Per-measure spread statistics of a labeled dataset plus the number of
/// instances the syntactic consistency heuristic flags.
struct DatasetStats {
    std::size_t instance_count = 0;
    double mi_max = 0, mi_min = 0, mi_entropy = 0;
    double at_max = 0, at_min = 0, at_entropy = 0;
    std::size_t flagged_consistent = 0;
};

DatasetStats dataset_stats(const Dataset& dataset);

} // namespace incmeter
