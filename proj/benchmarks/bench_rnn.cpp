#include <benchmark/benchmark.h>

#include <vector>

#include "dialshape/rng.hpp"
#include "dialshape/rnn.hpp"

using namespace dialshape;

namespace {

std::vector<Eigen::VectorXd> random_sequence(int len, int dim, Rng& rng) {
  std::vector<Eigen::VectorXd> seq;
  for (int t = 0; t < len; ++t) {
    Eigen::VectorXd f(dim);
    for (int i = 0; i < dim; ++i) f[i] = rng.uniform01();
    seq.push_back(f);
  }
  return seq;
}

void bench_step(benchmark::State& state, CellKind cell) {
  Rng rng(1);
  const auto model = RnnModel::init(cell, 64, 100, rng);
  const auto seq = random_sequence(1, 64, rng);
  auto s = model.fresh_state();
  for (auto _ : state) {
    auto [next, out] = step_forward(model, s, seq[0]);
    benchmark::DoNotOptimize(out);
    next.t = 0;  // keep the turn counter bounded
    s = std::move(next);
  }
}

void bench_gradient(benchmark::State& state, CellKind cell) {
  Rng rng(1);
  const auto model = RnnModel::init(cell, 64, 100, rng);
  const auto seq = random_sequence(15, 64, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient(model, seq, -5.0));
  }
}

}  // namespace

BENCHMARK_CAPTURE(bench_step, basic, CellKind::basic);
BENCHMARK_CAPTURE(bench_step, lstm, CellKind::lstm);
BENCHMARK_CAPTURE(bench_step, gru, CellKind::gru);
BENCHMARK_CAPTURE(bench_gradient, basic, CellKind::basic);
BENCHMARK_CAPTURE(bench_gradient, lstm, CellKind::lstm);
BENCHMARK_CAPTURE(bench_gradient, gru, CellKind::gru);
