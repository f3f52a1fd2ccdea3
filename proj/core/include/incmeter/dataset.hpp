#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "incmeter/knowledge_base.hpp"

namespace incmeter {

/// Generator parameters. The paper's nine configurations combine
/// atom_pool in {3,6,9} with max_formulas in {5,10,15}; any positive
/// values are accepted.
struct GenConfig {
    std::uint32_t atom_pool = 3;
    std::uint32_t max_formulas = 5;
    std::uint32_t max_literal_occurrences = 10;
    std::uint32_t n_instances = 1000;
    std::uint64_t seed = 0;

    void validate() const {
        if (atom_pool == 0 || max_formulas == 0 || n_instances == 0 ||
            max_literal_occurrences == 0) {
            throw std::invalid_argument("GenConfig counts must be positive");
        }
    }
};

/// A knowledge base with its exact measure values as labels.
struct LabeledInstance {
    KnowledgeBase kb;
    std::uint64_t label_mi = 0;
    std::uint64_t label_at = 0;
};

struct Dataset {
    GenConfig config;
    std::vector<LabeledInstance> instances;

    std::size_t size() const { return instances.size(); }
};

} // namespace incmeter
