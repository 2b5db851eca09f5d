#include <benchmark/benchmark.h>

#include "pfsim/fkgraph.hpp"
#include "pfsim/interfaces.hpp"
#include "pfsim/oracle.hpp"
#include "pfsim/rates.hpp"
#include "pfsim/walls.hpp"

using namespace pfsim;

namespace {

LatticePtr floor_lattice(int n) { return Lattice::make(DomainKind::floor_box, n, n, BoundaryCondition::floor()); }

// A thermalized-ish configuration to make interface work realistic.
SpinConfig warm(const LatticePtr& lat, const ModelParams& p, int sweeps) {
  ChainState st(SpinConfig::ground_state(lat), 7);
  for (int i = 0; i < sweeps; ++i) chain_step(st, p, true, true);
  return st.sigma;
}

void BM_HeatBathSweep(benchmark::State& s) {
  auto lat = floor_lattice(static_cast<int>(s.range(0)));
  ChainState st(SpinConfig::ground_state(lat), 1);
  const ModelParams p(2, 1.0);
  for (auto _ : s) heat_bath_sweep(st, p);
  s.SetItemsProcessed(s.iterations() * lat->num_sites());
}
BENCHMARK(BM_HeatBathSweep)->Arg(8)->Arg(16)->Arg(32);

void BM_SwendsenWangSweep(benchmark::State& s) {
  auto lat = floor_lattice(static_cast<int>(s.range(0)));
  ChainState st(SpinConfig::ground_state(lat), 1);
  const ModelParams p(2, 1.0);
  for (auto _ : s) sw_sweep_frozen_boundary(st, p);
  s.SetItemsProcessed(s.iterations() * lat->num_sites());
}
BENCHMARK(BM_SwendsenWangSweep)->Arg(8)->Arg(16)->Arg(32);

void BM_CoupleAndFullInterface(benchmark::State& s) {
  const ModelParams p(2, 1.2);
  auto lat = Lattice::make(DomainKind::slab_box, static_cast<int>(s.range(0)), 6, BoundaryCondition::dobrushin());
  SpinConfig sigma = warm(lat, p, 50);
  Rng rng(3);
  for (auto _ : s) {
    auto w = couple_edges_from_spins(sigma, p, rng);
    benchmark::DoNotOptimize(extract_full_interface(w).size());
  }
}
BENCHMARK(BM_CoupleAndFullInterface)->Arg(8)->Arg(12);

void BM_WallDecomposition(benchmark::State& s) {
  const ModelParams p(2, 1.2);
  auto lat = Lattice::make(DomainKind::slab_box, static_cast<int>(s.range(0)), 4, BoundaryCondition::dobrushin());
  SpinConfig sigma = warm(lat, p, 50);
  Rng rng(3);
  auto full = extract_full_interface(couple_edges_from_spins(sigma, p, rng));
  for (auto _ : s) benchmark::DoNotOptimize(decompose_walls(full, lat->domain()).walls.size());
}
BENCHMARK(BM_WallDecomposition)->Arg(8)->Arg(16);

void BM_NonredReach(benchmark::State& s) {
  const ModelParams p(2, 1.2);
  auto lat = Lattice::make(DomainKind::slab_box, 16, 8, BoundaryCondition::red_all());
  SpinConfig sigma = warm(lat, p, 50);
  for (auto _ : s) benchmark::DoNotOptimize(nonred_reach(sigma).size());
}
BENCHMARK(BM_NonredReach);

void BM_FrontierFloorBox(benchmark::State& s) {
  const int n = static_cast<int>(s.range(0));
  auto lat = Lattice::make(DomainKind::floor_box, n, 2, BoundaryCondition::floor());
  FkGraph g = domain_graph(*lat, ModelParams(2, 1.0).odds(), true);
  auto order = coordinate_order(g, {2, 1, 0});
  for (auto _ : s) benchmark::DoNotOptimize(fk_partition_frontier(g, 2, order));
}
BENCHMARK(BM_FrontierFloorBox)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ExactPotts2x2x1(benchmark::State& s) {
  auto lat = Lattice::make(DomainKind::floor_box, 2, 1, BoundaryCondition::floor());
  for (auto _ : s) benchmark::DoNotOptimize(ExactPotts::enumerate(lat, ModelParams(3, 1.0)).log_z());
}
BENCHMARK(BM_ExactPotts2x2x1);

}  // namespace

BENCHMARK_MAIN();
