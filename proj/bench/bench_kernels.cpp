#include <benchmark/benchmark.h>

#include "omatch/benchgen.hpp"
#include "omatch/evalkit.hpp"
#include "omatch/kernels.hpp"
#include "omatch/rng.hpp"

namespace {

omatch::Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  omatch::Rng rng(seed);
  omatch::Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

void BM_GemmSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = gaussian(n, 512, 1), b = gaussian(n, 512, 2);
  for (auto _ : state) benchmark::DoNotOptimize(omatch::kernels::serial::gemm_nt(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * 512));
}

void BM_GemmParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = gaussian(n, 512, 1), b = gaussian(n, 512, 2);
  for (auto _ : state) benchmark::DoNotOptimize(omatch::kernels::parallel::gemm_nt(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * 512));
}

void BM_NormalizeSerial(benchmark::State& state) {
  const auto src = gaussian(static_cast<std::size_t>(state.range(0)), 512, 3);
  for (auto _ : state) {
    auto m = src;
    benchmark::DoNotOptimize(omatch::kernels::serial::normalize_rows(m));
  }
}

void BM_NormalizeParallel(benchmark::State& state) {
  const auto src = gaussian(static_cast<std::size_t>(state.range(0)), 512, 3);
  for (auto _ : state) {
    auto m = src;
    benchmark::DoNotOptimize(omatch::kernels::parallel::normalize_rows(m));
  }
}

// Whole 8-way benchmark over a planted pool; range(0) is the worker count.
void BM_RunBenchmark(benchmark::State& state) {
  omatch::PlantedPoolConfig cfg;
  cfg.distractor_classes = 32;
  cfg.seed = 1;
  const auto planted = omatch::gen_planted_pool(cfg);
  const auto problems = omatch::NwaySampler(planted.pool, {}).sample_batch(8, 7, 1000);
  omatch::BenchmarkInputs inputs;
  inputs.features["planted"] = {&planted.crops, nullptr};
  inputs.prompts["concepts"] = &planted.prompts;
  const std::vector<omatch::MethodSpec> methods{{"visual", omatch::MethodKind::Visual, "planted", ""},
                                                {"semfeat-n", omatch::MethodKind::SemFeatN, "planted", "concepts"},
                                                {"semfeat-k", omatch::MethodKind::SemFeatK, "planted", "concepts"}};
  omatch::BenchmarkOptions opt;
  opt.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(omatch::run_benchmark(problems, methods, inputs, opt));
}

}  // namespace

BENCHMARK(BM_GemmSerial)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GemmParallel)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NormalizeSerial)->Arg(1024)->Arg(16384)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_NormalizeParallel)->Arg(1024)->Arg(16384)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RunBenchmark)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
