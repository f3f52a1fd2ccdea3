#pragma once

#include <iosfwd>
#include <string>

#include "incmeter/dataset.hpp"

namespace incmeter {

/// JSON Lines, one instance per line:
///   {"kb": ["a | !b", ...], "i_mi": 2, "i_at": 1}
void save_dataset(const Dataset& dataset, const std::string& path);
void save_dataset(const Dataset& dataset, std::ostream& out);

/// Loads a JSON Lines dataset. Malformed lines raise SchemaError with the
/// 1-based line number. With `verify`, labels are recomputed exactly and
/// any mismatch is an error. The returned config is inferred from the file
/// (atom pool size, max formula count); its seed is 0.
Dataset load_dataset(const std::string& path, bool verify = false);
Dataset load_dataset(std::istream& in, bool verify = false);

} // namespace incmeter
