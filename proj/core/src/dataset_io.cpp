#include "incmeter/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "incmeter/measures.hpp"

namespace incmeter {

void save_dataset(const Dataset& dataset, std::ostream& out) {
    for (const LabeledInstance& inst : dataset.instances) {
        nlohmann::ordered_json line;
        auto& kb = line["kb"] = nlohmann::json::array();
        for (const Formula& f : inst.kb.formulas()) kb.push_back(f.str());
        line["i_mi"] = inst.label_mi;
        line["i_at"] = inst.label_at;
        out << line.dump() << '\n';
    }
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save_dataset(dataset, out);
}

Dataset load_dataset(std::istream& in, bool verify) {
    Dataset dataset;
    std::set<std::string> atom_names;
    std::size_t max_formulas = 1;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;

        nlohmann::json line = nlohmann::json::parse(text, nullptr, false);
        if (line.is_discarded()) throw SchemaError("not valid JSON", line_no);
        if (!line.is_object()) throw SchemaError("expected a JSON object", line_no);
        if (!line.contains("kb")) throw SchemaError("missing field \"kb\"", line_no);
        if (!line["kb"].is_array()) throw SchemaError("field \"kb\" must be an array", line_no);
        if (!line.contains("i_mi")) throw SchemaError("missing field \"i_mi\"", line_no);
        if (!line.contains("i_at")) throw SchemaError("missing field \"i_at\"", line_no);
        if (!line["i_mi"].is_number_unsigned() || !line["i_at"].is_number_unsigned()) {
            throw SchemaError("labels must be non-negative integers", line_no);
        }

        LabeledInstance inst;
        for (const auto& entry : line["kb"]) {
            if (!entry.is_string()) {
                throw SchemaError("\"kb\" entries must be strings", line_no);
            }
            Formula f = [&] {
                try {
                    return parse_formula(entry.get<std::string>());
                } catch (const ParseError& e) {
                    throw SchemaError(std::string("bad formula: ") + e.what(), line_no);
                }
            }();
            if (!inst.kb.add(std::move(f))) {
                throw SchemaError("duplicate formula in \"kb\"", line_no);
            }
        }
        inst.label_mi = line["i_mi"].get<std::uint64_t>();
        inst.label_at = line["i_at"].get<std::uint64_t>();

        if (verify) {
            const std::uint64_t mi = i_mi(inst.kb).value;
            const std::uint64_t at = i_at(inst.kb).value;
            if (mi != inst.label_mi || at != inst.label_at) {
                std::ostringstream msg;
                msg << "label mismatch: file has i_mi=" << inst.label_mi
                    << " i_at=" << inst.label_at << ", recomputed i_mi=" << mi
                    << " i_at=" << at;
                throw SchemaError(msg.str(), line_no);
            }
        }

        for (const Atom& a : atoms_of(inst.kb)) atom_names.insert(a.name);
        max_formulas = std::max(max_formulas, inst.kb.size());
        dataset.instances.push_back(std::move(inst));
    }

    // Informational config; the file carries no generator parameters.
    dataset.config.atom_pool = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(atom_names.size()));
    dataset.config.max_formulas = static_cast<std::uint32_t>(max_formulas);
    dataset.config.n_instances =
        std::max<std::uint32_t>(1, static_cast<std::uint32_t>(dataset.instances.size()));
    dataset.config.seed = 0;
    return dataset;
}

Dataset load_dataset(const std::string& path, bool verify) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_dataset(in, verify);
}

} // namespace incmeter
