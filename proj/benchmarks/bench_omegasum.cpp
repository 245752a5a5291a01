#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "omegasum/density.hpp"
#include "omegasum/lattice.hpp"
#include "omegasum/mp.hpp"
#include "omegasum/sieve.hpp"
#include "omegasum/zeta.hpp"

using namespace omegasum;

namespace {

const char* kGamma1 =
    "14.134725141734693790457251983562470270784257115699243175685567460149"
    "9634298092567649490103931715610127792029715487974368";

const XiTable& xi_table() {
  static XiTable t = XiTable::build(
      suggested_table_limit(uint64_t(1000000000) + (uint64_t(1) << 20)),
      SignFunc::XI);
  return t;
}

void BM_SieveBlockXi(benchmark::State& state) {
  const XiTable& t = xi_table();
  for (auto _ : state) {
    BlockResult r = sieve_block(1000000000, 1000000000 + (uint64_t(1) << 20),
                                t);
    benchmark::DoNotOptimize(r.partial_sum);
  }
  state.SetItemsProcessed(state.iterations() * (int64_t(1) << 20));
}

void BM_SieveBlockMu(benchmark::State& state) {
  for (auto _ : state) {
    BlockResult r =
        sieve_block_mu(1000000000, 1000000000 + (uint64_t(1) << 20));
    benchmark::DoNotOptimize(r.partial_sum);
  }
  state.SetItemsProcessed(state.iterations() * (int64_t(1) << 20));
}

void BM_ZetaCriticalLine(benchmark::State& state) {
  ZetaConfig cfg;
  cfg.height_ceiling = 10000.0;
  ZetaEvaluator ev(cfg);
  Complex s(Real::parse("0.5", 192), Real::of(double(state.range(0)), 192));
  for (auto _ : state) {
    Complex z = ev.zeta(s, 128);
    benchmark::DoNotOptimize(z.re().to_double());
  }
}

void BM_ResidueOmega(benchmark::State& state) {
  ZetaConfig cfg;
  cfg.height_ceiling = 200.0;
  ZetaEvaluator ev(cfg);
  Real g = Real::parse(kGamma1, 256);
  for (auto _ : state) {
    Residue r = residue_omega(ev, g, 10000, 128);
    benchmark::DoNotOptimize(r.value.re().to_double());
  }
}

void BM_LatticeReduce(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  // fixed pseudo-ordinates on a fine grid, no zero table needed
  std::vector<Real> g;
  uint64_t seed = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < n; ++i) {
    seed = seed * 6364136223846793005ull + 1442695040888963407ull;
    long k = static_cast<long>(seed >> 44) + (i + 1) * 100000L;
    g.push_back(Real::of(k, 200) / 8192L);
  }
  LatticeBasis base = build_lattice(g, nullptr, 64);
  for (auto _ : state) {
    LatticeBasis red = lll_reduce(base, 0.99);
    benchmark::DoNotOptimize(red.rows[0][0].get_si());
  }
}

void BM_BetaByProduct(benchmark::State& state) {
  for (auto _ : state) {
    DensityBound b = beta_bounds_by_product(
        static_cast<uint64_t>(state.range(0)), 256, 1);
    benchmark::DoNotOptimize(b.lower.to_double());
  }
}

void BM_RenyiProduct(benchmark::State& state) {
  Real z = Real::of(-1L, 256);
  for (auto _ : state) {
    RenyiResult r = renyi_R(z, static_cast<uint64_t>(state.range(0)), 256);
    benchmark::DoNotOptimize(r.value.to_double());
  }
}

void BM_EmpiricalBeta(benchmark::State& state) {
  for (auto _ : state) {
    double r = empirical_beta(static_cast<uint64_t>(state.range(0)),
                              uint64_t(1) << 22, 1);
    benchmark::DoNotOptimize(r);
  }
}

BENCHMARK(BM_SieveBlockXi);
BENCHMARK(BM_SieveBlockMu);
BENCHMARK(BM_ZetaCriticalLine)->Arg(100)->Arg(1000)->Arg(5000);
BENCHMARK(BM_ResidueOmega);
BENCHMARK(BM_LatticeReduce)->Arg(8)->Arg(16);
BENCHMARK(BM_BetaByProduct)->Arg(10000)->Arg(1000000);
BENCHMARK(BM_RenyiProduct)->Arg(10000)->Arg(100000);
BENCHMARK(BM_EmpiricalBeta)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
