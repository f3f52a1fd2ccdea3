#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "incmeter/datagen.hpp"
#include "incmeter/encoding.hpp"
#include "incmeter/linear.hpp"
#include "incmeter/mlp.hpp"

namespace incmeter {

enum class ModelKind { Ols, Ridge, Lasso, Mlp };
enum class Variant { Plain, Flags, FlagsConstraints };

std::string to_string(ModelKind kind);
std::string to_string(Variant variant);
std::string to_string(Measure measure);
ModelKind parse_model_kind(const std::string& text);
Variant parse_variant(const std::string& text);
Measure parse_measure(const std::string& text);

/// One grid-search point; fields apply to the model kind that uses them.
struct HyperPoint {
    std::optional<double> alpha;
    std::optional<double> learning_rate;
    std::optional<double> weight_decay;
    std::optional<int> hidden;

    std::string label() const;
};

struct Grid {
    std::vector<HyperPoint> points;

    /// Full search ranges: regularization strength 1e-5..1e4 for
    /// Ridge/Lasso; learning rate {1e-3,2e-3,3e-3} x weight decay
    /// {.01,.03,.05} x hidden {32,64,128} for the MLP.
    static Grid search_defaults(ModelKind kind);

    /// One mid value per hyperparameter.
    static Grid mid(ModelKind kind);
};

struct ExperimentConfig {
    Measure target = Measure::AT;
    ModelKind model = ModelKind::Mlp;
    Variant variant = Variant::Flags;
    int folds = 10;
    Grid grid; // empty points -> search_defaults(model)
    std::uint64_t seed = 0;
    bool refit = false; // refit chosen point on subtrain+validation
    TrainSpec train_base;
};

struct FoldResult {
    int fold = 0;
    double test_mae = 0.0;
    HyperPoint chosen;
    double train_seconds = 0.0;   // all grid fits for this fold
    double predict_seconds = 0.0; // test-set prediction
};

struct CvReport {
    std::vector<FoldResult> folds;
    double mean_mae = 0.0;
    double std_mae = 0.0; // sample standard deviation over fold MAEs
};

/// Shuffled 10-fold partition with per-fold validation split: test folds
/// are disjoint and cover 0..n-1 (remainder spread one per fold); the
/// validation set has the fold's test size and is drawn from the shuffled
/// remainder; subtrain is the rest. Throws on folds that would be empty.
struct FoldPlan {
    std::vector<std::vector<std::size_t>> test;
    std::vector<std::vector<std::size_t>> validation;
    std::vector<std::vector<std::size_t>> subtrain;
};
FoldPlan plan_folds(std::size_t n, int folds, std::uint64_t seed);

using PredictFn =
    std::function<Eigen::VectorXd(const EncodedDataset&, std::span<const std::size_t>)>;

/// Fits one hyperparameter point on `train_rows` (validation rows are for
/// early stopping where applicable) and returns a predictor.
using FitterFn = std::function<PredictFn(
    const EncodedDataset&, std::span<const std::size_t> train_rows,
    std::span<const std::size_t> val_rows, const HyperPoint&, std::uint64_t seed)>;

/// CV engine: per fold, fits every grid point on subtrain, selects the
/// best validation MAE, and applies that model to the test fold (as
/// trained on subtrain; with cfg.refit it is refit on subtrain+validation
/// first). Deterministic given (data, cfg).
CvReport cv_with_fitter(const EncodedDataset& data, const ExperimentConfig& cfg,
                        const FitterFn& fitter);

/// Standard fitter for cfg.model/variant.
FitterFn make_fitter(const ExperimentConfig& cfg);

/// Encodes the dataset (flags per cfg.variant, vocabulary over the whole
/// dataset) and runs cv_with_fitter.
CvReport run_cv(const Dataset& dataset, const ExperimentConfig& cfg);

struct BenchEntry {
    GenConfig config;
    std::size_t instances = 0;
    double solver_seconds = 0.0;  // exact labeling of every instance
    double train_seconds = 0.0;   // encode + one mid-grid MLP fit
    double predict_seconds = 0.0; // predictions for every instance
};
struct BenchReport {
    std::vector<BenchEntry> entries;
};

/// Solver-vs-learner wall times per generator configuration (mid-grid
/// hyperparameters, 90/10 train/validation split for early stopping).
BenchReport run_bench(std::span<const GenConfig> configs, Variant variant,
                      Measure target = Measure::AT);

struct ScaleEntry {
    std::size_t size = 0;
    Variant variant = Variant::FlagsConstraints;
    double mean_mae = 0.0;
    double std_mae = 0.0;
};
struct ScaleReport {
    std::size_t pool_size = 0;
    std::vector<ScaleEntry> entries;
};

/// Draws one pool of 10*max(sizes) instances (instances beyond max(sizes)
/// are never touched by any run and are not materialized; per-instance
/// sub-seeding makes the prefix identical either way), then runs MLP CV on
/// the first `size` instances for each size and variant. Hyperparameters
/// come from `grid` (mid grid if null).
ScaleReport run_scalability(const GenConfig& base, std::span<const std::size_t> sizes,
                            std::span<const Variant> variants, Measure target,
                            const Grid* grid = nullptr);

void write_cv_csv(const CvReport& report, std::ostream& out);
void write_bench_csv(const BenchReport& report, std::ostream& out);
void write_scale_csv(const ScaleReport& report, std::ostream& out);
std::string cv_summary(const CvReport& report);

} // namespace incmeter
