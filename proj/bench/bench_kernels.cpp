// Serial reference vs OpenMP for the two hot loops.
//
//   ./build/bench_kernels [--benchmark_filter=joint]

#include <vector>

#include <benchmark/benchmark.h>

#include "gbb/bilinear.hpp"
#include "gbb/estimator.hpp"
#include "gbb/kernels.hpp"
#include "gbb/policies.hpp"

namespace {

using gbb::kernels::Backend;

void joint_optimum(benchmark::State& state, Backend backend) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  gbb::Rng rng(1);
  const gbb::Graph g = gbb::build_graph({gbb::GraphFamily::complete}, n, rng);
  const gbb::ArmSet arms = gbb::make_canonical_arms(d);
  const gbb::Matrix table = gbb::pair_value_table(arms, gbb::gen_random_mstar(d, rng));
  for (auto _ : state) benchmark::DoNotOptimize(gbb::kernels::joint_optimum(table, g.edges(), n, backend));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(gbb::kernels::joint_space_size(d, n)));
}

void optimistic_scores(benchmark::State& state, Backend backend) {
  const int d = static_cast<int>(state.range(0));
  gbb::Rng rng(2);
  const gbb::ArmSet arms = gbb::make_canonical_arms(d);
  gbb::RidgeState ridge(d * d, 1.0);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 4 * d * d; ++i) {
    const int a = static_cast<int>(rng() % d);
    const int b = static_cast<int>(rng() % d);
    ridge.update(gbb::vectorize_pair(arms[a], arms[b]).z, normal(rng));
  }
  std::vector<gbb::kernels::SparseVec> cands;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const gbb::Vector v = 2.0 * gbb::vectorize_pair(arms[a], arms[b]).z + 2.0 * gbb::vectorize_pair(arms[b], arms[a]).z +
                            gbb::vectorize_pair(arms[a], arms[a]).z + gbb::vectorize_pair(arms[b], arms[b]).z;
      cands.push_back(gbb::kernels::SparseVec::from_dense(v));
    }
  const gbb::Vector theta = ridge.theta_hat();
  std::vector<double> out(cands.size());
  for (auto _ : state) {
    gbb::kernels::optimistic_scores(cands, theta, ridge.a_inverse(), 1.3, out, backend);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(cands.size()));
}

}  // namespace

BENCHMARK_CAPTURE(joint_optimum, serial, Backend::serial)->Args({5, 10})->Args({6, 4})->Args({7, 8});
BENCHMARK_CAPTURE(joint_optimum, openmp, Backend::openmp)->Args({5, 10})->Args({6, 4})->Args({7, 8});
BENCHMARK_CAPTURE(optimistic_scores, serial, Backend::serial)->Arg(4)->Arg(10)->Arg(20);
BENCHMARK_CAPTURE(optimistic_scores, openmp, Backend::openmp)->Arg(4)->Arg(10)->Arg(20);

BENCHMARK_MAIN();
