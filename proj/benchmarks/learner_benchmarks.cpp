#include <benchmark/benchmark.h>

#include <numeric>

#include "incmeter/datagen.hpp"
#include "incmeter/linear.hpp"
#include "incmeter/mlp.hpp"

using namespace incmeter;

namespace {

EncodedDataset benchmark_encoding(std::uint32_t n, std::uint64_t seed) {
    GenConfig config;
    config.atom_pool = 6;
    config.max_formulas = 10;
    config.n_instances = n;
    config.seed = seed;
    return encode_dataset(generate_dataset(config), Measure::AT, {.flags = true});
}

Eigen::MatrixXd random_design(Eigen::Index rows, Eigen::Index cols,
                              std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd x(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = rng.uniform_real(-1, 1);
    }
    return x;
}

} // namespace

static void BM_FitRidge(benchmark::State& state) {
    Eigen::MatrixXd x = random_design(256, state.range(0), 3);
    Rng rng(4);
    Eigen::VectorXd y(x.rows());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.uniform_real(0, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_ridge(x, y, 1.0));
    }
}
BENCHMARK(BM_FitRidge)->Arg(64)->Arg(512);

static void BM_FitLasso(benchmark::State& state) {
    Eigen::MatrixXd x = random_design(256, state.range(0), 5);
    Rng rng(6);
    Eigen::VectorXd y(x.rows());
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.uniform_real(0, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_lasso(x, y, 0.1));
    }
}
BENCHMARK(BM_FitLasso)->Arg(64)->Arg(512);

static void BM_MlpTrainEpochs(benchmark::State& state) {
    EncodedDataset data = benchmark_encoding(512, 9);
    std::vector<std::size_t> rows(data.rows.size());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<std::size_t> train(rows.begin(), rows.begin() + 448);
    std::vector<std::size_t> val(rows.begin() + 448, rows.end());
    TrainSpec spec;
    spec.hidden_size = static_cast<int>(state.range(0));
    spec.max_epochs = 5;
    spec.patience = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_mlp(data, train, val, spec));
    }
}
BENCHMARK(BM_MlpTrainEpochs)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_MlpPredict(benchmark::State& state) {
    EncodedDataset data = benchmark_encoding(512, 10);
    std::vector<std::size_t> rows(data.rows.size());
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<std::size_t> train(rows.begin(), rows.begin() + 448);
    std::vector<std::size_t> val(rows.begin() + 448, rows.end());
    TrainSpec spec;
    spec.hidden_size = 64;
    spec.max_epochs = 3;
    MlpModel model = train_mlp(data, train, val, spec).model;
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict(model, data, rows));
    }
}
BENCHMARK(BM_MlpPredict)->Unit(benchmark::kMillisecond);
