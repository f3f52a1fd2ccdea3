#include "incmeter/datagen.hpp"

#include <string>

#include "incmeter/measures.hpp"

namespace incmeter {

Atom pool_atom(std::uint32_t i) {
    if (i < 26) return Atom(std::string(1, static_cast<char>('a' + i)));
    return Atom("a" + std::to_string(i - 25));
}

std::vector<Atom> make_atom_pool(std::uint32_t size) {
    std::vector<Atom> pool;
    pool.reserve(size);
    for (std::uint32_t i = 0; i < size; ++i) pool.push_back(pool_atom(i));
    return pool;
}

namespace {

/// Remy's algorithm: grows a uniformly random plane binary tree one leaf at
/// a time by grafting the new leaf at a uniformly chosen node, on a
/// uniformly chosen side. Leaves are filled with `lits` left to right and
/// internal nodes get And/Or with probability 1/2.
Formula random_tree(Rng& rng, const std::vector<Literal>& lits) {
    const std::size_t k = lits.size();
    if (k == 1) return Formula::lit(lits[0]);

    struct Node {
        int left = -1, right = -1; // -1 children mean leaf
        bool is_leaf() const { return left < 0; }
    };
    std::vector<Node> nodes;
    nodes.push_back({}); // single leaf tree
    int root = 0;
    for (std::size_t t = 1; t < k; ++t) {
        int target = static_cast<int>(rng.uniform_u64(nodes.size()));
        bool new_on_left = rng.bernoulli(0.5);
        int moved = static_cast<int>(nodes.size());
        nodes.push_back(nodes[target]); // old subtree keeps its children
        int leaf = static_cast<int>(nodes.size());
        nodes.push_back({});
        nodes[target].left = new_on_left ? leaf : moved;
        nodes[target].right = new_on_left ? moved : leaf;
    }

    // Assign literals to leaves in left-to-right order, operators per node.
    std::size_t next_lit = 0;
    auto build = [&](auto&& self, int idx) -> Formula {
        const Node& node = nodes[idx];
        if (node.is_leaf()) return Formula::lit(lits[next_lit++]);
        std::vector<Formula> children;
        children.push_back(self(self, node.left));
        children.push_back(self(self, node.right));
        return rng.bernoulli(0.5) ? Formula::conj(std::move(children))
                                  : Formula::disj(std::move(children));
    };
    return build(build, root);
}

} // namespace

Formula generate_formula(Rng& rng, const std::vector<Atom>& pool,
                         std::uint32_t max_lits) {
    if (pool.empty()) throw std::invalid_argument("generate_formula: empty atom pool");
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, max_lits));
    std::vector<Literal> lits;
    lits.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Atom& atom = pool[rng.uniform_u64(pool.size())];
        lits.push_back(Literal{atom, rng.bernoulli(0.5)});
    }
    return random_tree(rng, lits);
}

KnowledgeBase generate_kb(Rng& rng, const GenConfig& config) {
    config.validate();
    std::vector<Atom> pool = make_atom_pool(config.atom_pool);
    const auto m = static_cast<std::size_t>(rng.uniform_int(1, config.max_formulas));
    KnowledgeBase kb;
    int consecutive_rejections = 0;
    while (kb.size() < m) {
        if (kb.add(generate_formula(rng, pool, config.max_literal_occurrences))) {
            consecutive_rejections = 0;
        } else if (++consecutive_rejections == 100) {
            break; // tiny configuration space; accept a smaller KB
        }
    }
    return kb;
}

std::vector<KnowledgeBase> generate_kbs(const GenConfig& config) {
    config.validate();
    std::vector<KnowledgeBase> kbs;
    kbs.reserve(config.n_instances);
    for (std::uint32_t i = 0; i < config.n_instances; ++i) {
        Rng rng(derive_seed(config.seed, i));
        kbs.push_back(generate_kb(rng, config));
    }
    return kbs;
}

LabeledInstance label_instance(KnowledgeBase kb) {
    LabeledInstance inst;
    inst.label_mi = i_mi(kb).value;
    inst.label_at = i_at(kb).value;
    inst.kb = std::move(kb);
    return inst;
}

Dataset generate_dataset(const GenConfig& config) {
    Dataset dataset;
    dataset.config = config;
    dataset.instances.reserve(config.n_instances);
    for (KnowledgeBase& kb : generate_kbs(config)) {
        dataset.instances.push_back(label_instance(std::move(kb)));
    }
    return dataset;
}

} // namespace incmeter
