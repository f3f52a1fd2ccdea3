#pragma once

#include <string>
#include <vector>

#include "incmeter/datagen.hpp"
#include "incmeter/knowledge_base.hpp"

namespace incmeter::test {

inline Formula F(const std::string& text) { return parse_formula(text); }

inline KnowledgeBase kb_of(const std::vector<std::string>& texts) {
    KnowledgeBase kb;
    for (const auto& t : texts) kb.add(parse_formula(t));
    return kb;
}

inline std::vector<std::string> keys_of(const std::vector<Formula>& formulas) {
    std::vector<std::string> keys;
    keys.reserve(formulas.size());
    for (const Formula& f : formulas) keys.push_back(f.str());
    return keys;
}

/// Random KB over `atoms` atoms with up to `max_formulas` formulas.
inline KnowledgeBase random_kb(Rng& rng, std::uint32_t atoms,
                               std::uint32_t max_formulas,
                               std::uint32_t max_lits = 10) {
    GenConfig config;
    config.atom_pool = atoms;
    config.max_formulas = max_formulas;
    config.max_literal_occurrences = max_lits;
    config.n_instances = 1;
    return generate_kb(rng, config);
}

} // namespace incmeter::test
