#include <cmath>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "superhedge/cones.hpp"
#include "superhedge/pricing.hpp"
#include "superhedge/series.hpp"
#include "superhedge/utility.hpp"

namespace {

using namespace superhedge;

// Multinomial tree with `branch` children per node over `periods` periods
// and two assets whose child prices average to the parent under uniform
// weights.
MarketModel tree(int periods, int branch) {
  std::vector<NodeSpec> nodes{{"n0", std::nullopt, 1.0, {1.0, 1.0}}};
  std::vector<int> frontier{0};
  for (int t = 0; t < periods; ++t) {
    std::vector<int> next;
    for (int f : frontier) {
      const NodeSpec parent = nodes[f];
      for (int c = 0; c < branch; ++c) {
        const double shift = (c - 0.5 * (branch - 1)) / branch;
        const double s1 = parent.prices[0] * (1.0 + shift);
        const double s2 = parent.prices[1] * (1.0 - 0.5 * shift * shift + 0.5 * (branch * branch - 1) / (12.0 * branch * branch));
        next.push_back(static_cast<int>(nodes.size()));
        nodes.push_back({"n" + std::to_string(nodes.size()), parent.id, 1.0 / branch, {s1, s2}});
      }
    }
    frontier = next;
  }
  return build_market(2, nodes);
}

void BM_PriceReport(benchmark::State& state) {
  const MarketModel m = tree(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  Eigen::VectorXd x(m.num_states());
  for (int i = 0; i < x.size(); ++i) x(i) = std::sin(1.0 + i);
  const Claim c{x};
  for (auto _ : state) benchmark::DoNotOptimize(price_report(m, c));
  state.counters["states"] = m.num_states();
}
BENCHMARK(BM_PriceReport)->Args({1, 3})->Args({2, 2})->Args({2, 3})->Args({3, 2})->Unit(benchmark::kMicrosecond);

void BM_SuprepPrimal(benchmark::State& state) {
  const MarketModel m = tree(static_cast<int>(state.range(0)), 3);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(m.num_states(), -1.0, 1.0);
  const Claim c{x.cwiseAbs()};
  for (auto _ : state) benchmark::DoNotOptimize(suprep_primal(m, c));
  state.counters["states"] = m.num_states();
}
BENCHMARK(BM_SuprepPrimal)->DenseRange(1, 4)->Unit(benchmark::kMicrosecond);

void BM_DualityChain(benchmark::State& state) {
  const MarketModel m = tree(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_duality_chain(m));
  state.counters["states"] = m.num_states();
}
BENCHMARK(BM_DualityChain)->Args({1, 3})->Args({2, 2})->Args({2, 3})->Args({3, 2})->Unit(benchmark::kMillisecond);

void BM_Bipolar(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  PolyCone c;
  c.dim = dim;
  for (int k = 0; k < 2 * dim; ++k) {
    Eigen::VectorXd g(dim);
    for (int i = 0; i < dim; ++i) g(i) = normal(rng);
    c.add_generator(g);
  }
  for (auto _ : state) benchmark::DoNotOptimize(bipolar_check(c));
}
BENCHMARK(BM_Bipolar)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

void BM_NumericConjugate(benchmark::State& state) {
  const ConjugatePair pair = numeric_conjugate(glued_unbounded_utility());
  double y = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair.v(y));
    y = y > 1e3 ? 1e-3 : y * 1.37;
  }
}
BENCHMARK(BM_NumericConjugate);

void BM_ClassifySeries(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify_series([](std::int64_t k) { return 1.0 / (double(k) * double(k)); }, n));
  }
}
BENCHMARK(BM_ClassifySeries)->Range(1 << 10, 1 << 20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
