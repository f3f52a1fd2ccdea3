#include "incmeter/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <variant>

namespace incmeter {

namespace {

bool lower_alpha(char c) { return c >= 'a' && c <= 'z'; }
bool ident_tail(char c) { return lower_alpha(c) || (c >= '0' && c <= '9') || c == '_'; }

} // namespace

Atom::Atom(std::string n) : name(std::move(n)) {
    if (!valid_name(name)) {
        throw std::invalid_argument("invalid atom name: '" + name + "'");
    }
}

bool Atom::valid_name(std::string_view name) {
    if (name.empty() || !lower_alpha(name.front())) return false;
    return std::all_of(name.begin() + 1, name.end(), ident_tail);
}

struct Formula::Node {
    struct Compound {
        Connective op;
        std::vector<Formula> children;
    };
    std::variant<Literal, Compound> value;
};

Formula Formula::lit(Literal l) {
    return Formula(std::make_shared<const Node>(Node{std::move(l)}));
}

Formula Formula::lit(Atom a, bool negated) { return lit(Literal{std::move(a), negated}); }

Formula Formula::combine(Connective op, std::vector<Formula> children) {
    if (children.empty()) {
        throw std::invalid_argument("And/Or requires at least one child");
    }
    if (children.size() == 1) return std::move(children.front());

    // Splice in children carrying the same connective; they are already
    // flattened themselves, so one level suffices.
    std::vector<Formula> flat;
    flat.reserve(children.size());
    for (auto& child : children) {
        if (!child.is_literal() && child.connective() == op) {
            auto& sub = std::get<Node::Compound>(child.node_->value).children;
            flat.insert(flat.end(), sub.begin(), sub.end());
        } else {
            flat.push_back(std::move(child));
        }
    }
    return Formula(std::make_shared<const Node>(Node{Node::Compound{op, std::move(flat)}}));
}

Formula Formula::conj(std::vector<Formula> children) {
    return combine(Connective::And, std::move(children));
}

Formula Formula::disj(std::vector<Formula> children) {
    return combine(Connective::Or, std::move(children));
}

bool Formula::is_literal() const { return std::holds_alternative<Literal>(node_->value); }

const Literal& Formula::literal() const { return std::get<Literal>(node_->value); }

Connective Formula::connective() const {
    return std::get<Node::Compound>(node_->value).op;
}

const std::vector<Formula>& Formula::children() const {
    return std::get<Node::Compound>(node_->value).children;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.is_literal() != b.is_literal()) return false;
    if (a.is_literal()) return a.literal() == b.literal();
    if (a.connective() != b.connective()) return false;
    const auto& ca = a.children();
    const auto& cb = b.children();
    return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

namespace {

void write_formula(const Formula& f, std::string& out) {
    if (f.is_literal()) {
        out += f.literal().str();
        return;
    }
    const char* sep = f.connective() == Connective::And ? " & " : " | ";
    bool first = true;
    for (const Formula& child : f.children()) {
        if (!first) out += sep;
        first = false;
        // A compound child always carries the other connective (same-op
        // nesting is flattened). '&' binds tighter than '|', so only an Or
        // child under an And parent needs parentheses.
        bool parens = !child.is_literal() && f.connective() == Connective::And;
        if (parens) out += '(';
        write_formula(child, out);
        if (parens) out += ')';
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Formula run() {
        Formula f = parse_disj();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(ParseError::Kind::Syntax,
                         "syntax error at offset " + std::to_string(pos_) + ": " + what,
                         pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool consume(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Formula parse_disj() {
        std::vector<Formula> parts;
        parts.push_back(parse_conj());
        while (consume('|')) parts.push_back(parse_conj());
        return Formula::disj(std::move(parts));
    }

    Formula parse_conj() {
        std::vector<Formula> parts;
        parts.push_back(parse_unit());
        while (consume('&')) parts.push_back(parse_unit());
        return Formula::conj(std::move(parts));
    }

    Formula parse_unit() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected atom, '!' or '('");
        std::size_t start = pos_;
        if (consume('!')) {
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '(') {
                throw ParseError(ParseError::Kind::NegatedCompound,
                                 "negation of compound at offset " +
                                     std::to_string(start) +
                                     ": '!' may only precede an atom",
                                 start);
            }
            return Formula::lit(parse_atom(), true);
        }
        if (consume('(')) {
            Formula inner = parse_disj();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        return Formula::lit(parse_atom(), false);
    }

    Atom parse_atom() {
        skip_ws();
        if (pos_ >= text_.size() || !lower_alpha(text_[pos_])) {
            fail("expected atom");
        }
        std::size_t start = pos_;
        ++pos_;
        while (pos_ < text_.size() && ident_tail(text_[pos_])) ++pos_;
        return Atom(std::string(text_.substr(start, pos_ - start)));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void collect_atoms(const Formula& f, std::set<std::string>& names) {
    if (f.is_literal()) {
        names.insert(f.literal().atom.name);
        return;
    }
    for (const Formula& child : f.children()) collect_atoms(child, names);
}

} // namespace

std::string Formula::str() const {
    std::string out;
    write_formula(*this, out);
    return out;
}

Formula parse_formula(std::string_view text) { return Parser(text).run(); }

std::string serialize_formula(const Formula& f) { return f.str(); }

std::vector<Atom> atoms_of(const Formula& f) {
    std::set<std::string> names;
    collect_atoms(f, names);
    std::vector<Atom> atoms;
    atoms.reserve(names.size());
    for (const auto& n : names) atoms.push_back(Atom(n));
    return atoms;
}

} // namespace incmeter
