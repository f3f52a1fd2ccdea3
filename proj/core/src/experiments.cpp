#include "incmeter/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "incmeter/metrics.hpp"

namespace incmeter {

namespace {

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

Eigen::MatrixXd dense_matrix(const EncodedDataset& data,
                             std::span<const std::size_t> rows) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(data.width()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const FeatureVector& row = data.rows[rows[i]];
        const auto r = static_cast<Eigen::Index>(i);
        for (std::uint32_t j : row.kb_bits_on) x(r, j) = 1.0;
        for (std::uint32_t j : data.flag_columns_on(row)) x(r, j) = 1.0;
    }
    return x;
}

Eigen::VectorXd labels_of(const EncodedDataset& data,
                          std::span<const std::size_t> rows) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        y(static_cast<Eigen::Index>(i)) = data.labels[rows[i]];
    }
    return y;
}

std::vector<std::size_t> concat(std::span<const std::size_t> a,
                                std::span<const std::size_t> b) {
    std::vector<std::size_t> out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::Ols: return "ols";
    case ModelKind::Ridge: return "ridge";
    case ModelKind::Lasso: return "lasso";
    default: return "mlp";
    }
}

std::string to_string(Variant variant) {
    switch (variant) {
    case Variant::Plain: return "plain";
    case Variant::Flags: return "flags";
    default: return "flags-constraints";
    }
}

std::string to_string(Measure measure) { return measure == Measure::MI ? "mi" : "at"; }

ModelKind parse_model_kind(const std::string& text) {
    if (text == "ols" || text == "lr") return ModelKind::Ols;
    if (text == "ridge") return ModelKind::Ridge;
    if (text == "lasso") return ModelKind::Lasso;
    if (text == "mlp") return ModelKind::Mlp;
    throw std::invalid_argument("unknown model kind: " + text);
}

Variant parse_variant(const std::string& text) {
    if (text == "plain") return Variant::Plain;
    if (text == "flags") return Variant::Flags;
    if (text == "flags-constraints") return Variant::FlagsConstraints;
    throw std::invalid_argument("unknown variant: " + text);
}

Measure parse_measure(const std::string& text) {
    if (text == "mi") return Measure::MI;
    if (text == "at") return Measure::AT;
    throw std::invalid_argument("unknown measure: " + text);
}

std::string HyperPoint::label() const {
    std::ostringstream out;
    bool any = false;
    auto field = [&](const char* name, auto value) {
        if (any) out << ' ';
        out << name << '=' << value;
        any = true;
    };
    if (alpha) field("alpha", *alpha);
    if (learning_rate) field("lr", *learning_rate);
    if (weight_decay) field("wd", *weight_decay);
    if (hidden) field("hidden", *hidden);
    if (!any) out << "-";
    return out.str();
}

Grid Grid::search_defaults(ModelKind kind) {
    Grid grid;
    switch (kind) {
    case ModelKind::Ols:
        grid.points.push_back({});
        break;
    case ModelKind::Ridge:
    case ModelKind::Lasso:
        for (int e = -5; e <= 4; ++e) {
            HyperPoint p;
            p.alpha = std::pow(10.0, e);
            grid.points.push_back(p);
        }
        break;
    case ModelKind::Mlp:
        for (double lr : {0.001, 0.002, 0.003}) {
            for (double wd : {0.01, 0.03, 0.05}) {
                for (int hidden : {32, 64, 128}) {
                    HyperPoint p;
                    p.learning_rate = lr;
                    p.weight_decay = wd;
                    p.hidden = hidden;
                    grid.points.push_back(p);
                }
            }
        }
        break;
    }
    return grid;
}

Grid Grid::mid(ModelKind kind) {
    Grid grid;
    HyperPoint p;
    switch (kind) {
    case ModelKind::Ols:
        break;
    case ModelKind::Ridge:
    case ModelKind::Lasso:
        p.alpha = 1.0;
        break;
    case ModelKind::Mlp:
        p.learning_rate = 0.002;
        p.weight_decay = 0.03;
        p.hidden = 64;
        break;
    }
    grid.points.push_back(p);
    return grid;
}

FoldPlan plan_folds(std::size_t n, int folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("plan_folds: need at least 2 folds");
    if (n < static_cast<std::size_t>(folds)) {
        throw std::invalid_argument("plan_folds: fewer instances than folds");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    FoldPlan plan;
    plan.test.resize(folds);
    plan.validation.resize(folds);
    plan.subtrain.resize(folds);

    const std::size_t base = n / static_cast<std::size_t>(folds);
    const std::size_t remainder = n % static_cast<std::size_t>(folds);
    std::size_t offset = 0;
    for (int f = 0; f < folds; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < remainder ? 1 : 0);
        plan.test[f].assign(order.begin() + offset, order.begin() + offset + size);

        // Remainder of the shuffle, order preserved: validation takes the
        // first |test| entries, subtrain the rest.
        std::vector<std::size_t> rest;
        rest.reserve(n - size);
        rest.insert(rest.end(), order.begin(), order.begin() + offset);
        rest.insert(rest.end(), order.begin() + offset + size, order.end());
        if (rest.size() <= size) {
            throw std::invalid_argument("plan_folds: empty subtrain");
        }
        plan.validation[f].assign(rest.begin(), rest.begin() + size);
        plan.subtrain[f].assign(rest.begin() + size, rest.end());
        offset += size;
    }
    return plan;
}

FitterFn make_fitter(const ExperimentConfig& cfg) {
    if (cfg.variant == Variant::FlagsConstraints && cfg.model != ModelKind::Mlp) {
        throw std::invalid_argument("flags-constraints is an MLP-only variant");
    }
    switch (cfg.model) {
    case ModelKind::Ols:
        return [](const EncodedDataset& data, std::span<const std::size_t> train,
                  std::span<const std::size_t>, const HyperPoint&, std::uint64_t) {
            auto model = std::make_shared<LinearModel>(
                fit_ols(dense_matrix(data, train), labels_of(data, train)));
            return PredictFn([model](const EncodedDataset& d,
                                     std::span<const std::size_t> rows) {
                return predict(*model, dense_matrix(d, rows));
            });
        };
    case ModelKind::Ridge:
        return [](const EncodedDataset& data, std::span<const std::size_t> train,
                  std::span<const std::size_t>, const HyperPoint& point, std::uint64_t) {
            auto model = std::make_shared<LinearModel>(
                fit_ridge(dense_matrix(data, train), labels_of(data, train),
                          point.alpha.value_or(1.0)));
            return PredictFn([model](const EncodedDataset& d,
                                     std::span<const std::size_t> rows) {
                return predict(*model, dense_matrix(d, rows));
            });
        };
    case ModelKind::Lasso:
        return [](const EncodedDataset& data, std::span<const std::size_t> train,
                  std::span<const std::size_t>, const HyperPoint& point, std::uint64_t) {
            auto model = std::make_shared<LinearModel>(
                fit_lasso(dense_matrix(data, train), labels_of(data, train),
                          point.alpha.value_or(1.0)));
            return PredictFn([model](const EncodedDataset& d,
                                     std::span<const std::size_t> rows) {
                return predict(*model, dense_matrix(d, rows));
            });
        };
    default:
        return [cfg](const EncodedDataset& data, std::span<const std::size_t> train,
                     std::span<const std::size_t> val, const HyperPoint& point,
                     std::uint64_t seed) {
            TrainSpec spec = cfg.train_base;
            spec.loss = cfg.variant == Variant::FlagsConstraints
                            ? LossMode::L1PlusConstraints
                            : LossMode::L1;
            if (point.learning_rate) spec.learning_rate = *point.learning_rate;
            if (point.weight_decay) spec.weight_decay = *point.weight_decay;
            if (point.hidden) spec.hidden_size = *point.hidden;
            spec.seed = seed;
            auto model =
                std::make_shared<MlpModel>(train_mlp(data, train, val, spec).model);
            return PredictFn([model](const EncodedDataset& d,
                                     std::span<const std::size_t> rows) {
                return predict(*model, d, rows);
            });
        };
    }
}

CvReport cv_with_fitter(const EncodedDataset& data, const ExperimentConfig& cfg,
                        const FitterFn& fitter) {
    const std::vector<HyperPoint>& points = cfg.grid.points.empty()
                                                ? Grid::search_defaults(cfg.model).points
                                                : cfg.grid.points;
    FoldPlan plan = plan_folds(data.rows.size(), cfg.folds, cfg.seed);

    CvReport report;
    for (int f = 0; f < cfg.folds; ++f) {
        const auto& test = plan.test[f];
        const auto& val = plan.validation[f];
        const auto& sub = plan.subtrain[f];
        const Eigen::VectorXd val_true = labels_of(data, val);
        const Eigen::VectorXd test_true = labels_of(data, test);
        const std::uint64_t fold_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(f));

        FoldResult fold;
        fold.fold = f;
        double best_val = std::numeric_limits<double>::infinity();
        PredictFn chosen;
        double train_seconds = 0.0;
        for (std::size_t g = 0; g < points.size(); ++g) {
            StopWatch watch;
            PredictFn fn = fitter(data, sub, val, points[g], derive_seed(fold_seed, g));
            train_seconds += watch.seconds();
            const double val_mae = mae(val_true, fn(data, val));
            if (val_mae < best_val) {
                best_val = val_mae;
                chosen = std::move(fn);
                fold.chosen = points[g];
            }
        }
        if (cfg.refit) {
            std::vector<std::size_t> train_plus_val = concat(sub, val);
            StopWatch watch;
            chosen = fitter(data, train_plus_val, val, fold.chosen,
                            derive_seed(fold_seed, points.size()));
            train_seconds += watch.seconds();
        }
        fold.train_seconds = train_seconds;

        StopWatch watch;
        const Eigen::VectorXd test_pred = chosen(data, test);
        fold.predict_seconds = watch.seconds();
        fold.test_mae = mae(test_true, test_pred);
        report.folds.push_back(std::move(fold));
    }

    double sum = 0.0;
    for (const FoldResult& fold : report.folds) sum += fold.test_mae;
    report.mean_mae = sum / static_cast<double>(report.folds.size());
    if (report.folds.size() > 1) {
        double sq = 0.0;
        for (const FoldResult& fold : report.folds) {
            const double d = fold.test_mae - report.mean_mae;
            sq += d * d;
        }
        report.std_mae = std::sqrt(sq / static_cast<double>(report.folds.size() - 1));
    }
    return report;
}

CvReport run_cv(const Dataset& dataset, const ExperimentConfig& cfg) {
    EncodeOptions options;
    options.flags = cfg.variant != Variant::Plain;
    EncodedDataset encoded = encode_dataset(dataset, cfg.target, options);
    return cv_with_fitter(encoded, cfg, make_fitter(cfg));
}

BenchReport run_bench(std::span<const GenConfig> configs, Variant variant,
                      Measure target) {
    BenchReport report;
    for (const GenConfig& config : configs) {
        BenchEntry entry;
        entry.config = config;

        std::vector<KnowledgeBase> kbs = generate_kbs(config);
        entry.instances = kbs.size();

        StopWatch solver_watch;
        Dataset dataset;
        dataset.config = config;
        dataset.instances.reserve(kbs.size());
        for (KnowledgeBase& kb : kbs) {
            dataset.instances.push_back(label_instance(std::move(kb)));
        }
        entry.solver_seconds = solver_watch.seconds();

        StopWatch train_watch;
        EncodeOptions options;
        options.flags = variant != Variant::Plain;
        EncodedDataset encoded = encode_dataset(dataset, target, options);

        std::vector<std::size_t> order(encoded.rows.size());
        std::iota(order.begin(), order.end(), 0);
        Rng rng(derive_seed(config.seed, 0xbe7c));
        rng.shuffle(order);
        const std::size_t val_size = std::max<std::size_t>(1, order.size() / 10);
        std::vector<std::size_t> val(order.begin(), order.begin() + val_size);
        std::vector<std::size_t> train(order.begin() + val_size, order.end());

        TrainSpec spec; // mid-grid hyperparameters are the defaults
        spec.loss = variant == Variant::FlagsConstraints ? LossMode::L1PlusConstraints
                                                         : LossMode::L1;
        spec.seed = derive_seed(config.seed, 0x7a11);
        TrainResult trained = train_mlp(encoded, train, val, spec);
        entry.train_seconds = train_watch.seconds();

        std::vector<std::size_t> all(encoded.rows.size());
        std::iota(all.begin(), all.end(), 0);
        StopWatch predict_watch;
        predict(trained.model, encoded, all);
        entry.predict_seconds = predict_watch.seconds();

        report.entries.push_back(std::move(entry));
    }
    return report;
}

ScaleReport run_scalability(const GenConfig& base, std::span<const std::size_t> sizes,
                            std::span<const Variant> variants, Measure target,
                            const Grid* grid) {
    if (sizes.empty()) throw std::invalid_argument("run_scalability: no sizes");
    if (!std::is_sorted(sizes.begin(), sizes.end())) {
        throw std::invalid_argument("run_scalability: sizes must ascend");
    }
    const std::size_t max_size = sizes.back();

    ScaleReport report;
    report.pool_size = 10 * max_size;

    GenConfig pool_config = base;
    pool_config.n_instances = static_cast<std::uint32_t>(max_size);
    Dataset pool = generate_dataset(pool_config);

    for (std::size_t size : sizes) {
        Dataset subset;
        subset.config = pool_config;
        subset.config.n_instances = static_cast<std::uint32_t>(size);
        subset.instances.assign(pool.instances.begin(),
                                pool.instances.begin() + static_cast<std::ptrdiff_t>(size));
        for (Variant variant : variants) {
            ExperimentConfig cfg;
            cfg.target = target;
            cfg.model = ModelKind::Mlp;
            cfg.variant = variant;
            cfg.grid = grid ? *grid : Grid::mid(ModelKind::Mlp);
            cfg.seed = derive_seed(base.seed, 0x5ca1e);
            CvReport cv = run_cv(subset, cfg);
            report.entries.push_back({size, variant, cv.mean_mae, cv.std_mae});
        }
    }
    return report;
}

void write_cv_csv(const CvReport& report, std::ostream& out) {
    out << "fold,test_mae,chosen,train_seconds,predict_seconds\n";
    for (const FoldResult& fold : report.folds) {
        out << fold.fold << ',' << fold.test_mae << ",\"" << fold.chosen.label() << "\","
            << fold.train_seconds << ',' << fold.predict_seconds << '\n';
    }
}

void write_bench_csv(const BenchReport& report, std::ostream& out) {
    out << "atoms,max_formulas,n,solver_seconds,train_seconds,predict_seconds,"
           "learner_seconds\n";
    for (const BenchEntry& e : report.entries) {
        out << e.config.atom_pool << ',' << e.config.max_formulas << ',' << e.instances
            << ',' << e.solver_seconds << ',' << e.train_seconds << ','
            << e.predict_seconds << ',' << e.train_seconds + e.predict_seconds << '\n';
    }
}

void write_scale_csv(const ScaleReport& report, std::ostream& out) {
    out << "size,variant,mean_mae,std_mae\n";
    for (const ScaleEntry& e : report.entries) {
        out << e.size << ',' << to_string(e.variant) << ',' << e.mean_mae << ','
            << e.std_mae << '\n';
    }
}

std::string cv_summary(const CvReport& report) {
    std::ostringstream out;
    out << "mean MAE " << report.mean_mae << " (std " << report.std_mae << ") over "
        << report.folds.size() << " folds";
    return out.str();
}

} // namespace incmeter
