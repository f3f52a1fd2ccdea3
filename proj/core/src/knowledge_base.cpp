#include "incmeter/knowledge_base.hpp"

#include <algorithm>
#include <set>

namespace incmeter {

KnowledgeBase::KnowledgeBase(std::vector<Formula> formulas) {
    for (auto& f : formulas) add(std::move(f));
}

bool KnowledgeBase::add(Formula f) {
    std::string key = f.str();
    if (!keys_.insert(std::move(key)).second) return false;
    formulas_.push_back(std::move(f));
    return true;
}

KnowledgeBase parse_kb(std::string_view text) {
    KnowledgeBase kb;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view part = text.substr(start, end - start);
        std::size_t a = part.find_first_not_of(" \t\r\n");
        if (a != std::string_view::npos) {
            std::size_t b = part.find_last_not_of(" \t\r\n");
            kb.add(parse_formula(part.substr(a, b - a + 1)));
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    return kb;
}

std::vector<Atom> atoms_of(const std::vector<Formula>& formulas) {
    std::set<std::string> names;
    for (const Formula& f : formulas) {
        for (const Atom& a : atoms_of(f)) names.insert(a.name);
    }
    std::vector<Atom> atoms;
    atoms.reserve(names.size());
    for (const auto& n : names) atoms.push_back(Atom(n));
    return atoms;
}

std::vector<Atom> atoms_of(const KnowledgeBase& kb) { return atoms_of(kb.formulas()); }

Interpretation::Interpretation(
    std::initializer_list<std::pair<std::string, bool>> assignments) {
    for (const auto& [atom, value] : assignments) assignment_[atom] = value;
}

bool Interpretation::value(const std::string& atom) const {
    auto it = assignment_.find(atom);
    if (it == assignment_.end()) throw MissingAtomError(atom);
    return it->second;
}

bool satisfies(const Interpretation& w, const Formula& f) {
    if (f.is_literal()) {
        const Literal& l = f.literal();
        return w.value(l.atom.name) != l.negated;
    }
    if (f.connective() == Connective::And) {
        for (const Formula& child : f.children()) {
            if (!satisfies(w, child)) return false;
        }
        return true;
    }
    for (const Formula& child : f.children()) {
        if (satisfies(w, child)) return true;
    }
    return false;
}

bool satisfies(const Interpretation& w, const std::vector<Formula>& formulas) {
    for (const Formula& f : formulas) {
        if (!satisfies(w, f)) return false;
    }
    return true;
}

bool satisfies(const Interpretation& w, const KnowledgeBase& kb) {
    return satisfies(w, kb.formulas());
}

namespace detail {

bool CompiledFormula::eval_node(const Op& op, std::uint32_t assignment) {
    switch (op.kind) {
    case 0:
        return (((assignment >> op.bit) & 1u) != 0) != op.negated;
    case 1:
        for (const Op& child : op.children) {
            if (!eval_node(child, assignment)) return false;
        }
        return true;
    default:
        for (const Op& child : op.children) {
            if (eval_node(child, assignment)) return true;
        }
        return false;
    }
}

namespace {

CompiledFormula::Op compile_node(const Formula& f, const std::vector<Atom>& order) {
    CompiledFormula::Op op;
    if (f.is_literal()) {
        op.kind = 0;
        const Literal& l = f.literal();
        auto it = std::lower_bound(order.begin(), order.end(), l.atom);
        op.bit = static_cast<std::uint32_t>(it - order.begin());
        op.negated = l.negated;
        return op;
    }
    op.kind = f.connective() == Connective::And ? 1 : 2;
    op.children.reserve(f.children().size());
    for (const Formula& child : f.children()) {
        op.children.push_back(compile_node(child, order));
    }
    return op;
}

} // namespace

CompiledFormula compile(const Formula& f, const std::vector<Atom>& atom_order) {
    return CompiledFormula{compile_node(f, atom_order)};
}

} // namespace detail

bool is_consistent(const std::vector<Formula>& formulas, std::size_t atom_cap) {
    if (formulas.empty()) return true;
    std::vector<Atom> atoms = atoms_of(formulas);
    if (atoms.size() > atom_cap) throw AtomCapError(atoms.size(), atom_cap);

    std::vector<detail::CompiledFormula> compiled;
    compiled.reserve(formulas.size());
    for (const Formula& f : formulas) compiled.push_back(detail::compile(f, atoms));

    const std::uint64_t total = 1ull << atoms.size();
    for (std::uint64_t w = 0; w < total; ++w) {
        bool model = true;
        for (const auto& cf : compiled) {
            if (!cf.eval(static_cast<std::uint32_t>(w))) {
                model = false;
                break;
            }
        }
        if (model) return true;
    }
    return false;
}

bool is_consistent(const KnowledgeBase& kb, std::size_t atom_cap) {
    return is_consistent(kb.formulas(), atom_cap);
}

} // namespace incmeter
