#include <random>

#include <benchmark/benchmark.h>

#include "lifelog/kernels.hpp"

using namespace lifelog;

namespace {

struct Points {
  std::vector<double> lat, lon;
};

Points random_points(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> la(-60, 60), lo(-180, 180);
  Points p;
  for (std::size_t i = 0; i < n; ++i) {
    p.lat.push_back(la(rng));
    p.lon.push_back(lo(rng));
  }
  return p;
}

std::vector<float> random_matrix(std::size_t rows, std::size_t dim) {
  std::mt19937_64 rng(11);
  std::normal_distribution<float> g;
  std::vector<float> m(rows * dim);
  for (auto& v : m) v = g(rng);
  return m;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(1) ? Execution::Parallel : Execution::Serial;
}

void BM_RadiusScan(benchmark::State& state) {
  Points p = random_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto hits = kernels::radius_scan(p.lat, p.lon, 10.0, 20.0, 2000.0, exec_of(state));
    benchmark::DoNotOptimize(hits.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CosineScan(benchmark::State& state) {
  const std::size_t rows = static_cast<std::size_t>(state.range(0)), dim = 64;
  auto m = random_matrix(rows, dim);
  std::vector<float> q(m.begin(), m.begin() + dim);
  std::vector<double> out(rows);
  for (auto _ : state) {
    kernels::cosine_scan(m, dim, q, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Select(benchmark::State& state) {
  std::vector<std::uint32_t> cand(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = static_cast<std::uint32_t>(i);
  auto pred = [](std::uint32_t o) { return (o * 2654435761u) % 7 < 3; };
  for (auto _ : state) {
    auto kept = kernels::select(cand, pred, exec_of(state));
    benchmark::DoNotOptimize(kept.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_RadiusScan)->ArgsProduct({{10'000, 1'000'000}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_CosineScan)->ArgsProduct({{10'000, 200'000}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_Select)->ArgsProduct({{10'000, 1'000'000}, {0, 1}})->ArgNames({"n", "parallel"});

BENCHMARK_MAIN();
