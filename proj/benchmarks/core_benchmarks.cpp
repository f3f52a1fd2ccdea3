#include <benchmark/benchmark.h>

#include "incmeter/datagen.hpp"
#include "incmeter/encoding.hpp"
#include "incmeter/measures.hpp"

using namespace incmeter;

namespace {

KnowledgeBase sample_kb(std::uint32_t atoms, std::uint32_t max_formulas,
                        std::uint64_t seed) {
    GenConfig config;
    config.atom_pool = atoms;
    config.max_formulas = max_formulas;
    Rng rng(seed);
    return generate_kb(rng, config);
}

const char* kMediumFormula = "a | c & d & !g | !g";

} // namespace

static void BM_ParseFormula(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_formula(kMediumFormula));
    }
}
BENCHMARK(BM_ParseFormula);

static void BM_SerializeFormula(benchmark::State& state) {
    Formula f = parse_formula(kMediumFormula);
    for (auto _ : state) {
        benchmark::DoNotOptimize(serialize_formula(f));
    }
}
BENCHMARK(BM_SerializeFormula);

static void BM_IsConsistent(benchmark::State& state) {
    KnowledgeBase kb = sample_kb(static_cast<std::uint32_t>(state.range(0)), 10, 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_consistent(kb));
    }
}
BENCHMARK(BM_IsConsistent)->Arg(3)->Arg(6)->Arg(9);

static void BM_EnumerateMis(benchmark::State& state) {
    KnowledgeBase kb = sample_kb(9, static_cast<std::uint32_t>(state.range(0)), 23);
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_mis(kb));
    }
    state.counters["formulas"] = static_cast<double>(kb.size());
}
BENCHMARK(BM_EnumerateMis)->Arg(5)->Arg(10)->Arg(15);

static void BM_LabelInstance(benchmark::State& state) {
    GenConfig config;
    config.atom_pool = 6;
    config.max_formulas = static_cast<std::uint32_t>(state.range(0));
    Rng rng(5);
    std::vector<KnowledgeBase> kbs;
    for (int i = 0; i < 64; ++i) kbs.push_back(generate_kb(rng, config));
    std::size_t next = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(label_instance(kbs[next++ % kbs.size()]));
    }
}
BENCHMARK(BM_LabelInstance)->Arg(5)->Arg(10)->Arg(15);

static void BM_ConsistencyFlag(benchmark::State& state) {
    KnowledgeBase kb = sample_kb(9, 15, 31);
    for (auto _ : state) {
        benchmark::DoNotOptimize(consistency_flag(kb));
    }
}
BENCHMARK(BM_ConsistencyFlag);

static void BM_EncodeDataset(benchmark::State& state) {
    GenConfig config;
    config.atom_pool = 6;
    config.max_formulas = 10;
    config.n_instances = 256;
    config.seed = 11;
    Dataset dataset = generate_dataset(config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(encode_dataset(dataset, Measure::AT, {.flags = true}));
    }
}
BENCHMARK(BM_EncodeDataset);
