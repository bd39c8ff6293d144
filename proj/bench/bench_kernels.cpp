#include <benchmark/benchmark.h>

#include <random>

#include "hgsp/diffusion.hpp"
#include "hgsp/hypergraph.hpp"
#include "hgsp/kernels.hpp"

using namespace hgsp;

namespace {

const GeometricHypergraph& torus(std::size_t n) {
  static std::map<std::size_t, GeometricHypergraph> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, sample_torus_vr(n, 0.4, 1)).first;
  return it->second;
}

std::vector<std::vector<std::size_t>> members(const Hypergraph& h) { return h.edges(); }

template <auto Shift>
void BM_shift(benchmark::State& state) {
  const auto& g = torus(static_cast<std::size_t>(state.range(0)));
  const SparseMatrix s = gso(g.hypergraph, GsoKind::clique_henn).sparse();
  const Matrix x = Matrix::Random(s.rows(), state.range(1));
  Matrix out;
  for (auto _ : state) {
    Shift(s, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * s.nonZeros() * state.range(1));
}

template <auto Prox>
void BM_proximity(benchmark::State& state) {
  const auto pts = sample_torus(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(Prox(pts, 0.4));
}

template <auto Pool>
void BM_max_pool(benchmark::State& state) {
  const auto& g = torus(static_cast<std::size_t>(state.range(0)));
  const auto m = members(g.hypergraph);
  const Matrix x = Matrix::Random(static_cast<Eigen::Index>(g.hypergraph.num_nodes()), state.range(1));
  Matrix out;
  Eigen::MatrixXi arg;
  for (auto _ : state) {
    Pool(x, m, out, arg);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_shift<kernels::serial::shift>)->Args({500, 32})->Args({2000, 32})->Args({2000, 256});
BENCHMARK(BM_shift<kernels::parallel::shift>)->Args({500, 32})->Args({2000, 32})->Args({2000, 256});
BENCHMARK(BM_proximity<kernels::serial::proximity_graph>)->Arg(500)->Arg(4000);
BENCHMARK(BM_proximity<kernels::parallel::proximity_graph>)->Arg(500)->Arg(4000);
BENCHMARK(BM_max_pool<kernels::serial::max_pool>)->Args({500, 64})->Args({2000, 256});
BENCHMARK(BM_max_pool<kernels::parallel::max_pool>)->Args({500, 64})->Args({2000, 256});

BENCHMARK_MAIN();
