#include "incmeter/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "incmeter/encoding.hpp"

namespace incmeter {

namespace {

// Model masks keep one bit per interpretation; beyond this many atoms the
// tables get too large and subsets are checked by plain enumeration.
constexpr std::size_t kModelMaskAtomLimit = 20;

/// One bit per interpretation of the KB's atom set, set iff the formula
/// holds under it. Subset consistency is then a word-wise intersection.
std::vector<std::vector<std::uint64_t>> build_model_masks(
    const std::vector<Formula>& formulas, const std::vector<Atom>& atoms) {
    const std::uint64_t total = 1ull << atoms.size();
    const std::size_t words = static_cast<std::size_t>((total + 63) / 64);
    std::vector<std::vector<std::uint64_t>> masks(formulas.size(),
                                                  std::vector<std::uint64_t>(words, 0));
    for (std::size_t i = 0; i < formulas.size(); ++i) {
        detail::CompiledFormula cf = detail::compile(formulas[i], atoms);
        for (std::uint64_t w = 0; w < total; ++w) {
            if (cf.eval(static_cast<std::uint32_t>(w))) {
                masks[i][w >> 6] |= 1ull << (w & 63);
            }
        }
    }
    return masks;
}

bool subset_consistent_masks(std::uint64_t subset,
                             const std::vector<std::vector<std::uint64_t>>& masks,
                             std::size_t words) {
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t acc = ~0ull;
        for (std::uint64_t rest = subset; rest != 0; rest &= rest - 1) {
            acc &= masks[static_cast<std::size_t>(std::countr_zero(rest))][w];
            if (acc == 0) break;
        }
        if (acc != 0) return true;
    }
    return false;
}

std::vector<Formula> subset_formulas(const KnowledgeBase& kb, std::uint64_t subset) {
    std::vector<Formula> out;
    for (std::uint64_t rest = subset; rest != 0; rest &= rest - 1) {
        out.push_back(kb.formulas()[static_cast<std::size_t>(std::countr_zero(rest))]);
    }
    return out;
}

MisSet finalize_mis(const KnowledgeBase& kb, std::vector<std::uint64_t> found) {
    struct Entry {
        std::uint64_t mask;
        std::vector<std::string> keys;
    };
    std::vector<Entry> entries;
    entries.reserve(found.size());
    for (std::uint64_t mask : found) {
        std::vector<std::string> keys;
        for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
            keys.push_back(
                kb.formulas()[static_cast<std::size_t>(std::countr_zero(rest))].str());
        }
        entries.push_back({mask, std::move(keys)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.keys.size() != b.keys.size()) return a.keys.size() < b.keys.size();
        return a.keys < b.keys;
    });
    MisSet result;
    result.subsets.reserve(entries.size());
    for (const Entry& e : entries) {
        result.subsets.push_back(subset_formulas(kb, e.mask));
    }
    return result;
}

} // namespace

MisSet enumerate_mis(const KnowledgeBase& kb, std::size_t atom_cap) {
    const std::size_t m = kb.size();
    if (m == 0) return {};
    if (m > 63) {
        throw std::invalid_argument("enumerate_mis: more than 63 formulas");
    }
    std::vector<Atom> atoms = atoms_of(kb);
    if (atoms.size() > atom_cap) throw AtomCapError(atoms.size(), atom_cap);

    const bool use_masks = atoms.size() <= kModelMaskAtomLimit;
    std::vector<std::vector<std::uint64_t>> masks;
    std::size_t words = 0;
    if (use_masks) {
        masks = build_model_masks(kb.formulas(), atoms);
        words = masks.front().size();
    }

    std::vector<std::uint64_t> found;
    const std::uint64_t full = (m == 64) ? ~0ull : (1ull << m) - 1;
    for (std::size_t s = 1; s <= m; ++s) {
        // Gosper's hack: all m-bit masks with popcount s, ascending.
        std::uint64_t subset = (1ull << s) - 1;
        while (subset <= full) {
            bool covered = false;
            for (std::uint64_t mis : found) {
                if ((subset & mis) == mis) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                bool consistent =
                    use_masks ? subset_consistent_masks(subset, masks, words)
                              : is_consistent(subset_formulas(kb, subset), atom_cap);
                if (!consistent) found.push_back(subset);
            }
            std::uint64_t low = subset & (~subset + 1);
            std::uint64_t ripple = subset + low;
            if (ripple > full || ripple < subset) break;
            subset = ripple | (((subset ^ ripple) / low) >> 2);
        }
    }
    return finalize_mis(kb, std::move(found));
}

MisSet enumerate_mis_bruteforce(const KnowledgeBase& kb, std::size_t atom_cap) {
    constexpr std::size_t kSizeCap = 16;
    const std::size_t m = kb.size();
    if (m > kSizeCap) throw SizeCapError(m, kSizeCap);
    if (m == 0) return {};
    std::vector<Atom> atoms = atoms_of(kb);
    if (atoms.size() > atom_cap) throw AtomCapError(atoms.size(), atom_cap);

    std::vector<std::uint64_t> inconsistent;
    const std::uint64_t total = 1ull << m;
    for (std::uint64_t subset = 1; subset < total; ++subset) {
        if (!is_consistent(subset_formulas(kb, subset), atom_cap)) {
            inconsistent.push_back(subset);
        }
    }
    std::vector<std::uint64_t> minimal;
    for (std::uint64_t a : inconsistent) {
        bool has_proper_subset = false;
        for (std::uint64_t b : inconsistent) {
            if (b != a && (a & b) == b) {
                has_proper_subset = true;
                break;
            }
        }
        if (!has_proper_subset) minimal.push_back(a);
    }
    return finalize_mis(kb, std::move(minimal));
}

std::vector<Formula> problematic(const KnowledgeBase& kb, std::size_t atom_cap) {
    MisSet mis = enumerate_mis(kb, atom_cap);
    std::set<std::string> keys;
    for (const auto& subset : mis.subsets) {
        for (const Formula& f : subset) keys.insert(f.str());
    }
    std::vector<Formula> out;
    for (const Formula& f : kb.formulas()) {
        if (keys.count(f.str())) out.push_back(f);
    }
    return out;
}

MeasureValue i_mi(const KnowledgeBase& kb, std::size_t atom_cap) {
    return {Measure::MI, enumerate_mis(kb, atom_cap).size()};
}

MeasureValue i_at(const KnowledgeBase& kb, std::size_t atom_cap) {
    return {Measure::AT, atoms_of(problematic(kb, atom_cap)).size()};
}

double value_entropy(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("value_entropy: empty input");
    std::map<double, std::size_t> counts;
    for (double v : values) ++counts[v];
    const double n = static_cast<double>(values.size());
    double h = 0.0;
    for (const auto& [value, count] : counts) {
        const double p = static_cast<double>(count) / n;
        h -= p * std::log(p);
    }
    return h + 0.0; // avoid -0.0
}

DatasetStats dataset_stats(const Dataset& dataset) {
    DatasetStats stats;
    stats.instance_count = dataset.instances.size();
    if (dataset.instances.empty()) return stats;

    std::vector<double> mi, at;
    mi.reserve(dataset.size());
    at.reserve(dataset.size());
    for (const LabeledInstance& inst : dataset.instances) {
        mi.push_back(static_cast<double>(inst.label_mi));
        at.push_back(static_cast<double>(inst.label_at));
        if (consistency_flag(inst.kb) == 1) ++stats.flagged_consistent;
    }
    auto [mi_min, mi_max] = std::minmax_element(mi.begin(), mi.end());
    auto [at_min, at_max] = std::minmax_element(at.begin(), at.end());
    stats.mi_min = *mi_min;
    stats.mi_max = *mi_max;
    stats.at_min = *at_min;
    stats.at_max = *at_max;
    stats.mi_entropy = value_entropy(mi);
    stats.at_entropy = value_entropy(at);
    return stats;
}

} // namespace incmeter
