#include <benchmark/benchmark.h>

#include <vector>

#include "dialshape/gpsarsa.hpp"
#include "dialshape/rng.hpp"

using namespace dialshape;

namespace {

Eigen::VectorXd random_features(int dim, Rng& rng) {
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) x[i] = rng.uniform01();
  return x;
}

/// Posterior preloaded with `fill` dictionary points, the regime that
/// dominates policy training cost.
GpPosterior filled_posterior(int dim, int actions, int fill, Rng& rng) {
  KernelConfig cfg;
  cfg.dictionary_cap = fill;
  GpPosterior gp(dim, actions, cfg);
  auto x = random_features(dim, rng);
  int a = 0;
  while (gp.dictionary_size() < fill) {
    auto x2 = random_features(dim, rng);
    const int a2 = static_cast<int>(rng.uniform_index(actions));
    gp.observe(x, a, -1.0, x2, a2, false, 1.0);
    x = std::move(x2);
    a = a2;
  }
  gp.observe(x, a, 19.0, x, a, true, 1.0);
  gp.end_episode();
  return gp;
}

void bench_observe(benchmark::State& state) {
  Rng rng(7);
  const int fill = static_cast<int>(state.range(0));
  auto gp = filled_posterior(64, 20, fill, rng);
  const auto x = random_features(64, rng);
  const auto x2 = random_features(64, rng);
  for (auto _ : state) {
    gp.observe(x, 3, -1.0, x2, 4, false, 1.0);
  }
  gp.observe(x, 3, -1.0, x2, 4, true, 1.0);
  gp.end_episode();
}

void bench_select_posterior_sample(benchmark::State& state) {
  Rng rng(7);
  auto gp = filled_posterior(64, 20, static_cast<int>(state.range(0)), rng);
  const auto x = random_features(64, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gp.select_posterior_sample(x, rng));
  }
}

void bench_mean_weights(benchmark::State& state) {
  Rng rng(7);
  auto gp = filled_posterior(64, 20, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gp.mean_weights());
  }
}

}  // namespace

BENCHMARK(bench_observe)->Arg(100)->Arg(500)->Arg(1000);
BENCHMARK(bench_select_posterior_sample)->Arg(100)->Arg(1000);
BENCHMARK(bench_mean_weights)->Arg(100)->Arg(1000);
