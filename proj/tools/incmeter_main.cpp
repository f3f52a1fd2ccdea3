#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "incmeter/dataset_io.hpp"
#include "incmeter/experiments.hpp"
#include "incmeter/metrics.hpp"
#include "incmeter/model_io.hpp"

using namespace incmeter;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("INCMETER_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 0;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

Grid named_grid(const std::string& name, ModelKind kind) {
    if (name == "search") return Grid::search_defaults(kind);
    if (name == "mid") return Grid::mid(kind);
    throw std::invalid_argument("unknown grid: " + name);
}

struct CommonDataArgs {
    std::string data_path;
    bool verify = false;

    void attach(CLI::App& cmd) {
        cmd.add_option("--data", data_path, "dataset in JSON Lines format")
            ->required();
        cmd.add_flag("--verify", verify, "recompute labels on load and fail on mismatch");
    }

    Dataset load() const { return load_dataset(data_path, verify); }
};

int run_gen(const GenConfig& config, const std::string& out_path) {
    Dataset dataset = generate_dataset(config);
    save_dataset(dataset, out_path);
    DatasetStats stats = dataset_stats(dataset);
    std::cout << "wrote " << dataset.size() << " instances to " << out_path
              << " (i_mi max " << stats.mi_max << ", i_at max " << stats.at_max
              << ", flagged consistent " << stats.flagged_consistent << ")\n";
    return 0;
}

int run_measure(const std::string& kb_text, bool show_mis) {
    KnowledgeBase kb = parse_kb(kb_text);
    if (show_mis) {
        MisSet mis = enumerate_mis(kb);
        for (const auto& subset : mis.subsets) {
            std::cout << "mis:";
            for (const Formula& f : subset) std::cout << " {" << f.str() << "}";
            std::cout << '\n';
        }
    }
    std::cout << "i_mi=" << i_mi(kb).value << " i_at=" << i_at(kb).value << '\n';
    return 0;
}

int run_stats(const CommonDataArgs& data_args, const std::string& out_path) {
    Dataset dataset = data_args.load();
    DatasetStats s = dataset_stats(dataset);
    std::cout << "instances            " << s.instance_count << '\n'
              << "i_mi  max/min/ent    " << s.mi_max << " / " << s.mi_min << " / "
              << s.mi_entropy << '\n'
              << "i_at  max/min/ent    " << s.at_max << " / " << s.at_min << " / "
              << s.at_entropy << '\n'
              << "flagged consistent   " << s.flagged_consistent << '\n';
    if (!out_path.empty()) {
        std::ofstream out = open_out(out_path);
        out << "n,mi_max,mi_min,mi_entropy,at_max,at_min,at_entropy,"
               "flagged_consistent\n"
            << s.instance_count << ',' << s.mi_max << ',' << s.mi_min << ','
            << s.mi_entropy << ',' << s.at_max << ',' << s.at_min << ','
            << s.at_entropy << ',' << s.flagged_consistent << '\n';
    }
    return 0;
}

int run_encode(const CommonDataArgs& data_args, const std::string& target,
               bool flags, const std::string& out_path, std::string sidecar) {
    Dataset dataset = data_args.load();
    EncodedDataset encoded =
        encode_dataset(dataset, parse_measure(target), {.flags = flags});
    if (sidecar.empty()) sidecar = out_path + ".vocab.json";
    write_encoded_csv(encoded, out_path, sidecar);
    std::cout << "encoded " << encoded.rows.size() << " rows, width "
              << encoded.width() << " (vocabulary " << encoded.vocabulary.size()
              << ") to " << out_path << '\n';
    return 0;
}

struct TrainArgs {
    CommonDataArgs data;
    std::string model = "mlp";
    std::string variant = "flags";
    std::string target = "at";
    std::string out_path;
    double alpha = 1.0;
    double learning_rate = 0.002;
    double weight_decay = 0.03;
    int hidden = 64;
    double val_fraction = 0.1;
    std::uint64_t seed = default_seed();
};

int run_train(const TrainArgs& args) {
    Dataset dataset = args.data.load();
    const ModelKind kind = parse_model_kind(args.model);
    const Variant variant = parse_variant(args.variant);
    const Measure target = parse_measure(args.target);
    if (variant == Variant::FlagsConstraints && kind != ModelKind::Mlp) {
        throw std::invalid_argument("flags-constraints is an MLP-only variant");
    }
    EncodedDataset encoded =
        encode_dataset(dataset, target, {.flags = variant != Variant::Plain});

    ModelCheckpoint checkpoint;
    checkpoint.target = target;
    checkpoint.encoding_fingerprint =
        encoding_fingerprint(encoded.vocabulary, encoded.schema);

    std::vector<std::size_t> all(encoded.rows.size());
    std::iota(all.begin(), all.end(), 0);

    if (kind == ModelKind::Mlp) {
        Rng rng(derive_seed(args.seed, 0x7e57));
        rng.shuffle(all);
        const auto val_size = std::max<std::size_t>(
            1, static_cast<std::size_t>(static_cast<double>(all.size()) *
                                        args.val_fraction));
        std::vector<std::size_t> val(all.begin(), all.begin() + val_size);
        std::vector<std::size_t> train(all.begin() + val_size, all.end());
        TrainSpec spec;
        spec.loss = variant == Variant::FlagsConstraints ? LossMode::L1PlusConstraints
                                                         : LossMode::L1;
        spec.learning_rate = args.learning_rate;
        spec.weight_decay = args.weight_decay;
        spec.hidden_size = args.hidden;
        spec.seed = args.seed;
        TrainResult result = train_mlp(encoded, train, val, spec);
        std::cout << "trained MLP: best validation MAE " << result.log.best_val_mae
                  << " at epoch " << result.log.best_epoch + 1 << " of "
                  << result.log.epochs.size() << '\n';
        checkpoint.train_spec = spec;
        checkpoint.model = std::move(result.model);
    } else {
        Eigen::MatrixXd x(static_cast<Eigen::Index>(encoded.rows.size()),
                          static_cast<Eigen::Index>(encoded.width()));
        x.setZero();
        Eigen::VectorXd y(x.rows());
        for (std::size_t i = 0; i < encoded.rows.size(); ++i) {
            std::vector<double> dense = encoded.dense_row(i);
            for (std::size_t j = 0; j < dense.size(); ++j) {
                x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dense[j];
            }
            y(static_cast<Eigen::Index>(i)) = encoded.labels[i];
        }
        LinearModel model;
        switch (kind) {
        case ModelKind::Ols: model = fit_ols(x, y); break;
        case ModelKind::Ridge: model = fit_ridge(x, y, args.alpha); break;
        default: model = fit_lasso(x, y, args.alpha); break;
        }
        const double train_mae = mae(y, predict(model, x));
        std::cout << "trained " << to_string(kind) << ": training MAE " << train_mae
                  << (model.rank_deficient ? " (rank deficient)" : "") << '\n';
        checkpoint.model = std::move(model);
    }
    save_model(checkpoint, args.out_path);
    std::cout << "checkpoint written to " << args.out_path << '\n';
    return 0;
}

struct CvArgs {
    CommonDataArgs data;
    std::string model = "mlp";
    std::string variant = "flags";
    std::string target = "at";
    std::string grid = "search";
    std::string out_path;
    bool refit = false;
    std::uint64_t seed = default_seed();
};

int run_cv_cmd(const CvArgs& args) {
    Dataset dataset = args.data.load();
    ExperimentConfig cfg;
    cfg.model = parse_model_kind(args.model);
    cfg.variant = parse_variant(args.variant);
    cfg.target = parse_measure(args.target);
    cfg.grid = named_grid(args.grid, cfg.model);
    cfg.seed = args.seed;
    cfg.refit = args.refit;
    CvReport report = run_cv(dataset, cfg);
    for (const FoldResult& fold : report.folds) {
        std::cout << "fold " << fold.fold << ": test MAE " << fold.test_mae << " ("
                  << fold.chosen.label() << ", " << fold.train_seconds << "s train)\n";
    }
    std::cout << cv_summary(report) << '\n';
    if (!args.out_path.empty()) {
        std::ofstream out = open_out(args.out_path);
        write_cv_csv(report, out);
    }
    return 0;
}

struct BenchArgs {
    std::vector<std::uint32_t> atoms = {3, 6, 9};
    std::vector<std::uint32_t> formulas = {5, 10, 15};
    std::uint32_t n = 1000;
    std::string variant = "flags";
    std::string target = "at";
    std::string out_path;
    std::uint64_t seed = default_seed();
};

int run_bench_cmd(const BenchArgs& args) {
    std::vector<GenConfig> configs;
    for (std::uint32_t a : args.atoms) {
        for (std::uint32_t f : args.formulas) {
            GenConfig c;
            c.atom_pool = a;
            c.max_formulas = f;
            c.n_instances = args.n;
            c.seed = args.seed;
            configs.push_back(c);
        }
    }
    BenchReport report =
        run_bench(configs, parse_variant(args.variant), parse_measure(args.target));
    for (const BenchEntry& e : report.entries) {
        std::cout << e.config.atom_pool << " atoms, <=" << e.config.max_formulas
                  << " formulas: solver " << e.solver_seconds << "s, learner "
                  << e.train_seconds + e.predict_seconds << "s\n";
    }
    if (!args.out_path.empty()) {
        std::ofstream out = open_out(args.out_path);
        write_bench_csv(report, out);
    }
    return 0;
}

struct ScaleArgs {
    std::uint32_t atoms = 6;
    std::uint32_t formulas = 10;
    std::vector<std::size_t> sizes = {1000, 2000, 3000, 4000, 5000,
                                      6000, 7000, 8000, 9000};
    std::vector<std::string> variants = {"flags-constraints"};
    std::string target = "mi";
    std::string grid = "mid";
    std::string out_path;
    std::uint64_t seed = default_seed();
};

int run_scale_cmd(const ScaleArgs& args) {
    GenConfig base;
    base.atom_pool = args.atoms;
    base.max_formulas = args.formulas;
    base.seed = args.seed;
    std::vector<Variant> variants;
    for (const std::string& v : args.variants) variants.push_back(parse_variant(v));
    Grid grid = named_grid(args.grid, ModelKind::Mlp);
    ScaleReport report =
        run_scalability(base, args.sizes, variants, parse_measure(args.target), &grid);
    for (const ScaleEntry& e : report.entries) {
        std::cout << e.size << " instances, " << to_string(e.variant) << ": mean MAE "
                  << e.mean_mae << " (std " << e.std_mae << ")\n";
    }
    if (!args.out_path.empty()) {
        std::ofstream out = open_out(args.out_path);
        write_scale_csv(report, out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"incmeter: exact inconsistency degrees (I_MI, I_at) for "
                 "propositional knowledge bases, and models that learn to "
                 "predict them"};
    app.require_subcommand(1);

    GenConfig gen_config;
    gen_config.seed = default_seed();
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a labeled dataset");
    gen->add_option("--atoms", gen_config.atom_pool, "atom pool size")
        ->default_val(3);
    gen->add_option("--max-formulas", gen_config.max_formulas,
                    "maximum formulas per KB")
        ->default_val(5);
    gen->add_option("--max-lits", gen_config.max_literal_occurrences,
                    "maximum literal occurrences per formula")
        ->default_val(10);
    gen->add_option("--n", gen_config.n_instances, "number of instances")
        ->default_val(1000);
    gen->add_option("--seed", gen_config.seed, "generator seed");
    gen->add_option("--out", gen_out, "output JSONL path")->required();

    std::string measure_kb;
    bool measure_show_mis = false;
    CLI::App* measure = app.add_subcommand(
        "measure", "compute exact I_MI and I_at for a ';'-separated KB");
    measure->add_option("--kb", measure_kb, "knowledge base, e.g. \"a & !a; b\"")
        ->required();
    measure->add_flag("--mis", measure_show_mis, "also print the MIS sets");

    CommonDataArgs stats_data;
    std::string stats_out;
    CLI::App* stats = app.add_subcommand("stats", "dataset statistics");
    stats_data.attach(*stats);
    stats->add_option("--out", stats_out, "write statistics CSV here");

    CommonDataArgs encode_data;
    std::string encode_target = "at";
    bool encode_flags = true;
    std::string encode_out, encode_sidecar;
    CLI::App* encode = app.add_subcommand("encode", "export the binary encoding as CSV");
    encode_data.attach(*encode);
    encode->add_option("--target", encode_target, "label column: mi or at");
    encode->add_flag("--flags,!--no-flags", encode_flags,
                     "include the symbolic flag features");
    encode->add_option("--out", encode_out, "output CSV path")->required();
    encode->add_option("--sidecar", encode_sidecar,
                       "vocabulary sidecar path (default: <out>.vocab.json)");

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "fit one model and save a checkpoint");
    train_args.data.attach(*train);
    train->add_option("--model", train_args.model, "ols|ridge|lasso|mlp");
    train->add_option("--variant", train_args.variant,
                      "plain|flags|flags-constraints");
    train->add_option("--target", train_args.target, "mi|at");
    train->add_option("--alpha", train_args.alpha, "regularization strength");
    train->add_option("--lr", train_args.learning_rate, "MLP learning rate");
    train->add_option("--weight-decay", train_args.weight_decay, "MLP weight decay");
    train->add_option("--hidden", train_args.hidden, "MLP hidden size");
    train->add_option("--val-fraction", train_args.val_fraction,
                      "validation split for early stopping");
    train->add_option("--seed", train_args.seed, "training seed");
    train->add_option("--out", train_args.out_path, "checkpoint path")->required();

    CvArgs cv_args;
    CLI::App* cv = app.add_subcommand("cv", "ten-fold cross-validation with grid search");
    cv_args.data.attach(*cv);
    cv->add_option("--model", cv_args.model, "ols|ridge|lasso|mlp");
    cv->add_option("--variant", cv_args.variant, "plain|flags|flags-constraints");
    cv->add_option("--target", cv_args.target, "mi|at");
    cv->add_option("--grid", cv_args.grid, "search|mid");
    cv->add_flag("--refit", cv_args.refit,
                 "refit the chosen point on subtrain+validation");
    cv->add_option("--seed", cv_args.seed, "shuffle seed");
    cv->add_option("--out", cv_args.out_path, "write per-fold CSV here");

    BenchArgs bench_args;
    CLI::App* bench =
        app.add_subcommand("bench", "solver vs learner runtimes per configuration");
    bench->add_option("--atoms", bench_args.atoms, "atom pool sizes")->delimiter(',');
    bench->add_option("--max-formulas", bench_args.formulas, "formula caps")
        ->delimiter(',');
    bench->add_option("--n", bench_args.n, "instances per configuration");
    bench->add_option("--variant", bench_args.variant, "plain|flags|flags-constraints");
    bench->add_option("--target", bench_args.target, "mi|at");
    bench->add_option("--seed", bench_args.seed, "generator seed");
    bench->add_option("--out", bench_args.out_path, "write bench CSV here");

    ScaleArgs scale_args;
    CLI::App* scale =
        app.add_subcommand("scale", "MAE vs training-set size on one pool");
    scale->add_option("--atoms", scale_args.atoms, "atom pool size");
    scale->add_option("--max-formulas", scale_args.formulas, "formula cap");
    scale->add_option("--sizes", scale_args.sizes, "instance counts, ascending")
        ->delimiter(',');
    scale->add_option("--variants", scale_args.variants, "MLP variants to run")
        ->delimiter(',');
    scale->add_option("--target", scale_args.target, "mi|at");
    scale->add_option("--grid", scale_args.grid, "search|mid");
    scale->add_option("--seed", scale_args.seed, "pool seed");
    scale->add_option("--out", scale_args.out_path, "write scale CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*gen) return run_gen(gen_config, gen_out);
        if (*measure) return run_measure(measure_kb, measure_show_mis);
        if (*stats) return run_stats(stats_data, stats_out);
        if (*encode) {
            return run_encode(encode_data, encode_target, encode_flags, encode_out,
                              encode_sidecar);
        }
        if (*train) return run_train(train_args);
        if (*cv) return run_cv_cmd(cv_args);
        if (*bench) return run_bench_cmd(bench_args);
        if (*scale) return run_scale_cmd(scale_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
