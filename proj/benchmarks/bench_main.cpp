#include <array>

#include <benchmark/benchmark.h>

#include "thermorec/divergence.hpp"
#include "thermorec/sampling.hpp"
#include "thermorec/workbounds.hpp"

using namespace thermorec;

namespace {

void BM_PartialTrace(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  Rng rng(1);
  const DensityMatrix rho = random_density_matrix(d * d, rng);
  const CompositeSpace space({d, d});
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho.matrix(), space, {0}));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_RelativeEntropy(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  Rng rng(2);
  const DensityMatrix rho = random_density_matrix(d, rng);
  const DensityMatrix sigma = random_density_matrix(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(relative_entropy(rho, sigma));
}
BENCHMARK(BM_RelativeEntropy)->Arg(4)->Arg(16)->Arg(64);

void BM_PetzRecovery(benchmark::State& state) {
  const auto db = static_cast<Index>(state.range(0));
  Rng rng(3);
  const ThermalInstance inst = sample_thermal_instance(3, db, rng);
  const DensityMatrix& tau = inst.op.system_gibbs().state;
  for (auto _ : state) benchmark::DoNotOptimize(petz_recovery(inst.op, tau));
}
BENCHMARK(BM_PetzRecovery)->Arg(2)->Arg(4)->Arg(8);

void BM_RotatedRecoveryAverage(benchmark::State& state) {
  Rng rng(4);
  const ThermalInstance inst = sample_thermal_instance(3, 4, rng);
  const Superoperator n = superoperator(inst.op);
  const DensityMatrix& tau = inst.op.system_gibbs().state;
  const DensityMatrix sigma = apply(inst.op, inst.rho);
  const RotatedRecovery rot(n, tau);
  const QuadratureSpec q{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(rot.average(sigma, q));
}
BENCHMARK(BM_RotatedRecoveryAverage)->Arg(32)->Arg(64)->Arg(128);

void BM_AlphaSearch(benchmark::State& state) {
  const auto d = static_cast<Index>(state.range(0));
  Rng rng(5);
  const HamiltonianSpec h = random_integer_hamiltonian(d, 3, rng);
  const DensityMatrix tau = gibbs_state(h, 0.8).state;
  const DensityMatrix rho = random_density_matrix(d, rng);
  const DensityMatrix sigma = random_density_matrix(d, rng);
  for (auto _ : state) benchmark::DoNotOptimize(nano_gain_bound(rho, sigma, tau));
}
BENCHMARK(BM_AlphaSearch)->Arg(2)->Arg(4)->Arg(8);

}  // namespace
