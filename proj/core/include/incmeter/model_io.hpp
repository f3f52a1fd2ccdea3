#pragma once

#include <string>
#include <variant>

#include "incmeter/linear.hpp"
#include "incmeter/measures.hpp"
#include "incmeter/mlp.hpp"

namespace incmeter {

/// A trained model plus the context needed to use it safely later: the
/// target measure and a fingerprint of the vocabulary/flag schema it was
/// trained against.
struct ModelCheckpoint {
    std::variant<LinearModel, MlpModel> model;
    Measure target = Measure::MI;
    std::uint64_t encoding_fingerprint = 0;
    TrainSpec train_spec; // meaningful for MLP checkpoints
};

void save_model(const ModelCheckpoint& checkpoint, const std::string& path);
ModelCheckpoint load_model(const std::string& path);

} // namespace incmeter
