#pragma once

#include <vector>

#include "incmeter/dataset.hpp"
#include "incmeter/rng.hpp"

namespace incmeter {

/// Atom name for pool position `i`: a..z, then a1, a2, ...
Atom pool_atom(std::uint32_t i);
std::vector<Atom> make_atom_pool(std::uint32_t size);

/// Random formula with k literal occurrences, k uniform in [1, max_lits]:
/// atoms uniform over the pool, each negated with probability 1/2, combined
/// by a uniformly random binary tree (Remy's algorithm) whose internal
/// nodes are And/Or with probability 1/2 each, then flattened.
Formula generate_formula(Rng& rng, const std::vector<Atom>& pool,
                         std::uint32_t max_lits);

/// Random KB: m uniform in [1, max_formulas] distinct formulas. Duplicates
/// (by canonical string) are resampled; after 100 consecutive rejections
/// the KB is accepted with fewer formulas.
KnowledgeBase generate_kb(Rng& rng, const GenConfig& config);

/// Deterministic function of `config` (instance i uses the sub-stream
/// derive_seed(config.seed, i)); labels are the exact measure values.
Dataset generate_dataset(const GenConfig& config);

/// The KBs of generate_dataset without labels, in the same order.
std::vector<KnowledgeBase> generate_kbs(const GenConfig& config);

/// Labels a KB with the exact measures.
LabeledInstance label_instance(KnowledgeBase kb);

} // namespace incmeter
