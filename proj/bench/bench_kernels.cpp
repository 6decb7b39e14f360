#include <random>

#include <benchmark/benchmark.h>

#include "rydimer/master_eq.hpp"
#include "rydimer/pair_potentials.hpp"
#include "rydimer/spectra.hpp"
#include "rydimer/units.hpp"

using namespace rydimer;

namespace {

ScanConfig small_grid() {
  ScanConfig c;
  c.delta_p = linear_grid(units::from_2pi_MHz(140.0), units::from_2pi_MHz(180.0), 4);
  c.r_um = linear_grid(2.6, 3.0, 4);
  return c;
}

Operator random_state(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Operator a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = {n(rng), n(rng)};
  const Operator rho = a * a.adjoint();
  return rho / rho.trace();
}

void BM_ScanParallel(benchmark::State& state) {
  const ScanConfig c = small_grid();
  for (auto _ : state) benchmark::DoNotOptimize(scan(c));
}

void BM_ScanSerial(benchmark::State& state) {
  const ScanConfig c = small_grid();
  for (auto _ : state) benchmark::DoNotOptimize(scan_serial(c));
}

void BM_RhsDirect(benchmark::State& state) {
  const auto s = static_cast<int>(state.range(0)) == 16 ? LevelScheme::four_level()
                                                       : LevelScheme::three_level();
  const ParameterSet p = ParameterSet::paper_defaults();
  const Operator h = build_hamiltonian(s, 2.74, p.coeffs, p.microwave,
                                       ProbeField{units::from_2pi_MHz(10.0), units::from_2pi_MHz(159.3)});
  const auto jumps = build_jump_operators(s, p.rates);
  const Operator rho = random_state(s.pair_dim(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(rho, h, jumps));
}

void BM_RhsSuperoperator(benchmark::State& state) {
  const auto s = static_cast<int>(state.range(0)) == 16 ? LevelScheme::four_level()
                                                       : LevelScheme::three_level();
  const ParameterSet p = ParameterSet::paper_defaults();
  const Operator h = build_hamiltonian(s, 2.74, p.coeffs, p.microwave,
                                       ProbeField{units::from_2pi_MHz(10.0), units::from_2pi_MHz(159.3)});
  const Eigen::MatrixXcd sup = liouvillian_superoperator(h, build_jump_operators(s, p.rates));
  const Operator rho = random_state(s.pair_dim(), 1);
  const Eigen::Map<const Eigen::VectorXcd> v(rho.data(), rho.size());
  for (auto _ : state) benchmark::DoNotOptimize(Eigen::VectorXcd(sup * v));
}

void BM_SpectrumPoint(benchmark::State& state) {
  const ParameterSet p = ParameterSet::paper_defaults();
  const PulseEnvelope pulse = default_spectrum_pulse();
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_point(p, 2.74, units::from_2pi_MHz(159.3), pulse));
  }
}

}  // namespace

BENCHMARK(BM_ScanParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RhsDirect)->Arg(9)->Arg(16);
BENCHMARK(BM_RhsSuperoperator)->Arg(9)->Arg(16);
BENCHMARK(BM_SpectrumPoint)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
