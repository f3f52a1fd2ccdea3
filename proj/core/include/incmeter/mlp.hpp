#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <vector>

#include "incmeter/encoding.hpp"
#include "incmeter/rng.hpp"

namespace incmeter {

/// Three dense layers; tanh after the first two, linear scalar output.
/// During training 20% of the first two layers' activations are dropped
/// (inverted scaling, so inference needs no rescaling).
struct MlpModel {
    // Row-major: encoded inputs are sparse 0/1 rows, so the forward pass
    // sums w1 rows of active features.
    using InputWeights =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    InputWeights w1;    // input x hidden
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2; // hidden x hidden
    Eigen::VectorXd b2;
    Eigen::VectorXd w3; // hidden
    double b3 = 0.0;
    double dropout_rate = 0.2;

    Eigen::Index input_width() const { return w1.rows(); }
    Eigen::Index hidden_size() const { return w1.cols(); }
};

/// Seeded uniform init in +-sqrt(6/(fan_in+fan_out)) per layer, zero biases.
MlpModel make_mlp(Eigen::Index input_width, Eigen::Index hidden, std::uint64_t seed);

struct MlpActivations {
    Eigen::VectorXd t1, h1, t2, h2; // tanh outputs and post-dropout values
};

/// Single-row forward pass. With training=true, dropout masks are drawn
/// from `rng` (required); inference is deterministic.
double mlp_forward(const MlpModel& model, const Eigen::VectorXd& x, bool training,
                   Rng* rng = nullptr, MlpActivations* cache = nullptr);

enum class LossMode { L1, L1PlusConstraints };

/// How Eq.-style constraint terms weight the prediction loss: scaled by the
/// batch means of the flag features (the literal reading), or applied per
/// instance as |e_k| * (1 + sum of that row's flags).
enum class ConstraintWeighting { BatchMean, PerInstance };

struct LossResult {
    double value = 0.0;
    Eigen::VectorXd grad; // d loss / d predictions
};

/// Constraint-augmented L1 loss. `heuristic_features[i]` is the batch's
/// binary feature block (rows x J_i) for heuristic i. With batch-mean
/// weighting the total is L1 * (1 + sum of all feature means); with no
/// heuristics (or all-zero flags) it reduces to plain L1 exactly.
LossResult custom_loss(const Eigen::VectorXd& predictions,
                       const Eigen::VectorXd& targets,
                       const std::vector<Eigen::MatrixXd>& heuristic_features,
                       ConstraintWeighting weighting = ConstraintWeighting::BatchMean);

/// Binary feature blocks of the schema's heuristics (consistency, then
/// upper-bound) for the given rows; used by the constraint loss.
std::vector<Eigen::MatrixXd> heuristic_features(const EncodedDataset& data,
                                                std::span<const std::size_t> rows);

struct TrainSpec {
    LossMode loss = LossMode::L1;
    ConstraintWeighting weighting = ConstraintWeighting::BatchMean;
    double learning_rate = 0.002;
    double weight_decay = 0.03;
    int hidden_size = 64;
    int max_epochs = 200;
    int patience = 10; // epochs without validation-MAE improvement
    int batch_size = 32;
    std::uint64_t seed = 0;
};

struct EpochRecord {
    double train_loss = 0.0;
    double val_mae = 0.0;
};

struct TrainingLog {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0; // 0-based index into epochs
    double best_val_mae = 0.0;
};

struct TrainResult {
    MlpModel model; // parameters of the best-validation epoch
    TrainingLog log;
};

/// Mini-batch AdamW with decoupled weight decay (weights only), early
/// stopping on validation MAE with the spec's patience. Throws
/// DivergenceError if the loss becomes non-finite.
TrainResult train_mlp(const EncodedDataset& data,
                      std::span<const std::size_t> train_rows,
                      std::span<const std::size_t> val_rows, const TrainSpec& spec);

/// Spec-style overload: separate train/validation encodings sharing one
/// vocabulary and schema.
TrainResult train_mlp(const EncodedDataset& train, const EncodedDataset& val,
                      const TrainSpec& spec);

Eigen::VectorXd predict(const MlpModel& model, const EncodedDataset& data,
                        std::span<const std::size_t> rows);
Eigen::VectorXd predict(const MlpModel& model, const Eigen::MatrixXd& x);

struct MlpGradients {
    MlpModel::InputWeights w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::VectorXd b2;
    Eigen::VectorXd w3;
    double b3 = 0.0;
};

/// Loss and full parameter gradients on a dense batch, dropout off.
/// Backbone of the finite-difference gradient checks.
double mlp_loss_and_gradients(const MlpModel& model, const Eigen::MatrixXd& x,
                              const Eigen::VectorXd& y,
                              const std::vector<Eigen::MatrixXd>& heuristics,
                              ConstraintWeighting weighting, MlpGradients& grads);

} // namespace incmeter
