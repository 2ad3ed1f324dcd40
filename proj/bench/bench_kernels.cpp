#include <benchmark/benchmark.h>

#include "hotgate/classical_noise.hpp"
#include "hotgate/paul_trap.hpp"

using namespace hotgate;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

const CollectiveGaussianModel& collective() {
  static const auto m = CollectiveGaussianModel::chains_1d(5, 5, 1.0, 1.0, 3.0);
  return m;
}

void BM_TableCollective(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(table_collective(collective(), CouplingLaw(1.0, 1), 0, exec_of(state)));
}

void BM_TableFidelity(benchmark::State& state) {
  const CouplingTable t = table_collective(collective(), CouplingLaw(1.0, 1));
  const std::vector<double> a(5, 1.0), b(5, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(t.fidelity(a, b, 0.5, exec_of(state)));
}

void BM_IndependentEnumeration(benchmark::State& state) {
  const auto m = IndependentDiscreteModel::chains_1d(4, 4, 2.0, 4.0, 1.0, 0.5);
  const auto a = LogicalVector::ones(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(distribution_independent(m, a, a, CouplingLaw(1.0, 1), exec_of(state)));
}

void BM_MonteCarlo(benchmark::State& state) {
  const auto a = LogicalVector::ones(5);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_coupling(collective(), a, a, CouplingLaw(1.0, 1), 7, 100000, exec_of(state)));
}

void BM_PaulTable(benchmark::State& state) {
  const TrapSystem sys = build_trap_system(TrapPairConfig::single_trap(6, 1.0, 4.78, CouplingLaw(1.0, 3)));
  PaulTableOptions opt;
  opt.temperature = 1.3;
  opt.epsilon = 0.07;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(build_paul_table(sys, opt));
}

}  // namespace

BENCHMARK(BM_TableCollective)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_TableFidelity)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_IndependentEnumeration)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_PaulTable)->Arg(0)->Arg(1)->ArgName("parallel");

BENCHMARK_MAIN();
