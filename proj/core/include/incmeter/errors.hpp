#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace incmeter {

/// Formula text rejected by the parser. `position` is the 0-based byte
/// offset of the offending character.
class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, NegatedCompound };

    ParseError(Kind kind, std::string message, std::size_t position)
        : std::runtime_error(std::move(message)), kind_(kind), position_(position) {}

    Kind kind() const { return kind_; }
    std::size_t position() const { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

/// An interpretation was queried for an atom it does not assign.
class MissingAtomError : public std::runtime_error {
public:
    explicit MissingAtomError(const std::string& atom)
        : std::runtime_error("interpretation does not assign atom '" + atom + "'"),
          atom_(atom) {}

    const std::string& atom() const { return atom_; }

private:
    std::string atom_;
};

/// Consistency check refused: the atom set is too large to enumerate.
class AtomCapError : public std::runtime_error {
public:
    AtomCapError(std::size_t atom_count, std::size_t cap)
        : std::runtime_error("refusing to enumerate " + std::to_string(atom_count) +
                             " atoms (cap " + std::to_string(cap) + ")"),
          atom_count_(atom_count), cap_(cap) {}

    std::size_t atom_count() const { return atom_count_; }
    std::size_t cap() const { return cap_; }

private:
    std::size_t atom_count_;
    std::size_t cap_;
};

/// Brute-force subset enumeration refused: too many formulas.
class SizeCapError : public std::runtime_error {
public:
    SizeCapError(std::size_t size, std::size_t cap)
        : std::runtime_error("brute-force enumeration of " + std::to_string(size) +
                             " formulas exceeds cap " + std::to_string(cap)),
          size_(size), cap_(cap) {}

    std::size_t size() const { return size_; }
    std::size_t cap() const { return cap_; }

private:
    std::size_t size_;
    std::size_t cap_;
};

/// Malformed dataset file. `line` is 1-based.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string message, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + std::move(message)),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// A knowledge base member is absent from the encoding vocabulary.
class UnknownFormulaError : public std::runtime_error {
public:
    explicit UnknownFormulaError(const std::string& formula)
        : std::runtime_error("formula not in vocabulary: " + formula), formula_(formula) {}

    const std::string& formula() const { return formula_; }

private:
    std::string formula_;
};

/// Matrix/vector dimensions do not line up.
class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training loss became non-finite.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace incmeter
