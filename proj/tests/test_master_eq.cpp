#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "rydimer/errors.hpp"
#include "rydimer/master_eq.hpp"
#include "rydimer/pair_potentials.hpp"
#include "rydimer/spectra.hpp"
#include "rydimer/units.hpp"

using namespace rydimer;
using cd = std::complex<double>;

namespace {

const ParameterSet kDefaults = ParameterSet::paper_defaults();

Operator random_hermitian(int d, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  Operator a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = cd(n(rng), n(rng));
  }
  return scale * 0.5 * (a + a.adjoint());
}

Operator random_matrix(int d, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  Operator a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = scale * cd(n(rng), n(rng));
  }
  return a;
}

Operator random_density(int d, std::mt19937& rng) {
  const Operator a = random_matrix(d, rng);
  Operator rho = a * a.adjoint();
  return rho / rho.trace().real();
}

Eigen::VectorXcd vec(const Operator& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

LindbladModel constant_model(const Operator& h, std::vector<Operator> jumps = {}) {
  LindbladModel m;
  m.h_static = h;
  m.h_probe = Operator::Zero(h.rows(), h.cols());
  m.jumps = std::move(jumps);
  return m;
}

}  // namespace

TEST(MasterEq, LevelScheme) {
  const auto s3 = LevelScheme::three_level();
  const auto s4 = LevelScheme::four_level();
  EXPECT_EQ(s3.atom_dim(), 3);
  EXPECT_EQ(s4.pair_dim(), 16);
  EXPECT_FALSE(s3.has(Level::s));
  EXPECT_THROW(s3.index(Level::s), ValidationError);
  EXPECT_EQ(s4.pair_index(Level::g, Level::s), s4.index(Level::g) * 4 + s4.index(Level::s));
}

TEST(MasterEq, SingleAtomOperatorAlgebra) {
  const auto s = LevelScheme::three_level();
  for (int atom : {1, 2}) {
    const Operator id = single_atom_op(s, Level::g, Level::g, atom) +
                        single_atom_op(s, Level::e, Level::e, atom) +
                        single_atom_op(s, Level::r, Level::r, atom);
    EXPECT_EQ((id - Operator::Identity(9, 9)).norm(), 0.0);
    const Operator ge = single_atom_op(s, Level::g, Level::e, atom);
    const Operator eg = single_atom_op(s, Level::e, Level::g, atom);
    EXPECT_EQ((ge.adjoint() - eg).norm(), 0.0);
    EXPECT_EQ((ge * eg - single_atom_op(s, Level::g, Level::g, atom)).norm(), 0.0);
  }
  EXPECT_THROW(single_atom_op(s, Level::g, Level::e, 3), ValidationError);
  EXPECT_THROW(single_atom_op(s, Level::s, Level::e, 1), ValidationError);
}

TEST(MasterEq, HamiltonianMatrixElements) {
  const auto s = LevelScheme::three_level();
  const ProbeField probe{units::from_2pi_MHz(10.0), units::from_2pi_MHz(159.3)};
  const double r = 2.75;
  const Operator h = build_hamiltonian(s, r, kDefaults.coeffs, kDefaults.microwave, probe);
  const int gg = s.pair_index(Level::g, Level::g);
  const int eg = s.pair_index(Level::e, Level::g);
  const int rg = s.pair_index(Level::r, Level::g);
  const int er = s.pair_index(Level::e, Level::r);
  const int re = s.pair_index(Level::r, Level::e);
  EXPECT_EQ(h(gg, eg), cd(-probe.rabi, 0.0));
  EXPECT_EQ(h(eg, rg), cd(-kDefaults.microwave.rabi, 0.0));
  EXPECT_NEAR(h(er, re).real(), kDefaults.coeffs.c3_er / (r * r * r), 1e-6);
  EXPECT_NEAR(h(gg, gg).real(), 2.0 * probe.detuning, 1e-6);
  EXPECT_LE((h - h.adjoint()).norm(), 1e-12 * h.norm());
  EXPECT_THROW(build_hamiltonian(s, 0.0, kDefaults.coeffs, kDefaults.microwave, probe),
               ValidationError);
}

TEST(MasterEq, DoublyExcitedBlockReproducesDressedCurves) {
  const auto s = LevelScheme::three_level();
  const double r = 2.75;
  const Operator h = build_hamiltonian(s, r, kDefaults.coeffs, kDefaults.microwave, ProbeField{});
  const int ee = s.pair_index(Level::e, Level::e);
  const int er = s.pair_index(Level::e, Level::r);
  const int re = s.pair_index(Level::r, Level::e);
  const int rr = s.pair_index(Level::r, Level::r);
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(9, 4);
  basis(ee, 0) = 1.0;
  basis(er, 1) = basis(re, 1) = 1.0 / std::sqrt(2.0);
  basis(rr, 2) = 1.0;
  basis(er, 3) = 1.0 / std::sqrt(2.0);
  basis(re, 3) = -1.0 / std::sqrt(2.0);
  const Eigen::MatrixXcd block = basis.adjoint() * h * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block.topLeftCorner(3, 3));
  const double curves[] = {dressed_energy(Curve::lower, r, kDefaults.coeffs, kDefaults.microwave),
                           dressed_energy(Curve::middle, r, kDefaults.coeffs, kDefaults.microwave),
                           dressed_energy(Curve::upper, r, kDefaults.coeffs, kDefaults.microwave)};
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(es.eigenvalues()[k], curves[k], 1e-10 * std::abs(curves[k]));
  }
  EXPECT_NEAR(block(3, 3).real(),
              bare_energies(r, kDefaults.coeffs, kDefaults.microwave).er_minus, 1e-3);
  EXPECT_NEAR(std::abs(block(3, 0)) + std::abs(block(3, 1)) + std::abs(block(3, 2)), 0.0, 1e-6);
}

TEST(MasterEq, JumpOperators) {
  const auto s3 = LevelScheme::three_level();
  RelaxationRates rates{0.0, 4.0, 2.0};
  const auto jumps = build_jump_operators(s3, rates);
  ASSERT_EQ(jumps.size(), 6u);
  EXPECT_EQ(jumps[0].norm(), 0.0);
  EXPECT_EQ(jumps[3].norm(), 0.0);
  for (int k : {2, 5}) {
    const Operator& lg = jumps[k];
    EXPECT_EQ((lg - Operator(lg.diagonal().asDiagonal())).norm(), 0.0);
  }
  const auto s4 = LevelScheme::four_level();
  const auto j4 = build_atom_jump_operators(s4, rates);
  ASSERT_EQ(j4.size(), 3u);
  EXPECT_DOUBLE_EQ(j4[2](s4.index(Level::s), s4.index(Level::s)).real(), 1.0);
  EXPECT_DOUBLE_EQ(j4[2](s4.index(Level::g), s4.index(Level::g)).real(), 1.0);
  EXPECT_DOUBLE_EQ(j4[2](s4.index(Level::e), s4.index(Level::e)).real(), -1.0);
  RelaxationRates bad{-1.0, 0.0, 0.0};
  EXPECT_THROW(build_jump_operators(s3, bad), ValidationError);
}

TEST(MasterEq, DephasingLeavesPopulationsAndDephasesCoherence) {
  const auto s = LevelScheme::three_level();
  RelaxationRates rates{0.0, 0.0, 3.0};
  const auto jumps = build_atom_jump_operators(s, rates);
  std::mt19937 rng(3);
  const Operator rho = random_density(3, rng);
  const Operator d = lindblad_rhs(rho, Operator::Zero(3, 3), jumps);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(d(i, i)), 0.0, 1e-14);
  const int g = s.index(Level::g), e = s.index(Level::e), r = s.index(Level::r);
  EXPECT_NEAR(std::abs(d(g, e) + 3.0 * rho(g, e)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d(e, r)), 0.0, 1e-12);
}

TEST(MasterEq, RhsTrivialAndTracePreserving) {
  const Operator zero = Operator::Zero(9, 9);
  std::mt19937 rng(5);
  const Operator rho = random_density(9, rng);
  EXPECT_EQ(lindblad_rhs(rho, zero, {}).norm(), 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator h = random_hermitian(9, rng, 1e8);
    std::vector<Operator> jumps;
    for (int k = 0; k < 3; ++k) jumps.push_back(random_matrix(9, rng, 1e3));
    const Operator r = random_hermitian(9, rng);
    const Operator out = lindblad_rhs(r, h, jumps);
    EXPECT_LE(std::abs(out.trace()), 1e-12 * out.norm());
    EXPECT_LE((out - out.adjoint()).norm(), 1e-12 * out.norm());
  }
  EXPECT_THROW(lindblad_rhs(Operator::Zero(3, 3), zero, {}), ValidationError);
}

TEST(MasterEq, SuperoperatorMatchesDirectRhs) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator h = random_hermitian(9, rng);
    std::vector<Operator> jumps = {random_matrix(9, rng), random_matrix(9, rng)};
    const Operator rho = random_density(9, rng);
    const Eigen::MatrixXcd s = liouvillian_superoperator(h, jumps);
    const Operator direct = lindblad_rhs(rho, h, jumps);
    EXPECT_LE((s * vec(rho) - vec(direct)).norm(), 1e-12 * std::max(1.0, direct.norm()));
  }
}

TEST(MasterEq, EvolveStepMatchesReferenceRk4) {
  // One RK4 step of the production kernel against RK4 built on lindblad_rhs.
  std::mt19937 rng(21);
  const Operator h = random_hermitian(9, rng, 1e8);
  const Operator hp = random_hermitian(9, rng, 1.0);
  std::vector<Operator> jumps = {random_matrix(9, rng, 1e3), random_matrix(9, rng, 1e3)};
  LindbladModel m = constant_model(h, jumps);
  m.h_probe = hp;
  m.probe_rabi = [](double t) { return 1e7 * std::sin(1e8 * t); };
  m.probe_peak = 1e7;
  const Operator rho0 = random_density(9, rng);
  const double dt = 1e-10;
  EvolveConfig cfg;
  cfg.dt_max = dt;
  cfg.max_phase_per_step = 1e6;
  const Operator fast = evolve_final(rho0, m, 0.0, dt, cfg);
  auto f = [&](const Operator& r, double t) { return lindblad_rhs(r, m.hamiltonian(t), m.jumps); };
  const Operator k1 = f(rho0, 0.0);
  const Operator k2 = f(rho0 + 0.5 * dt * k1, 0.5 * dt);
  const Operator k3 = f(rho0 + 0.5 * dt * k2, 0.5 * dt);
  const Operator k4 = f(rho0 + dt * k3, dt);
  const Operator ref = rho0 + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  EXPECT_LE((fast - ref).norm(), 1e-13);
}

TEST(MasterEq, FreeEvolutionIsExact) {
  std::mt19937 rng(1);
  const Operator rho0 = random_density(9, rng);
  const double times[] = {0.0, 1e-7, 3e-7};
  const auto tr = evolve(rho0, constant_model(Operator::Zero(9, 9)), times);
  for (const auto& rho : tr.states) EXPECT_EQ((rho - rho0).norm(), 0.0);
}

TEST(MasterEq, SpontaneousDecay) {
  const auto s = LevelScheme::three_level();
  RelaxationRates rates{2e6, 0.0, 0.0};
  const auto m = constant_model(Operator::Zero(3, 3), build_atom_jump_operators(s, rates));
  const int e = s.index(Level::e);
  const double times[] = {0.0, 1e-7, 5e-7, 1e-6};
  const auto tr = evolve(from_pure(basis_state(3, e)), m, times);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(tr.states[k](e, e).real(), std::exp(-2e6 * times[k]), 1e-9);
  }
}

TEST(MasterEq, ResonantRabiOscillation) {
  const auto s = LevelScheme::three_level();
  const double wp = units::from_2pi_MHz(10.0);
  const Operator h = build_atom_hamiltonian(s, MicrowaveDrive{0.0, 0.0}, ProbeField{wp, 0.0});
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(k * 5e-9);
  const int g = s.index(Level::g);
  const auto tr = evolve(from_pure(basis_state(3, g)), constant_model(h), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double c = std::cos(wp * times[k]);
    EXPECT_NEAR(tr.states[k](g, g).real(), c * c, 1e-8);
  }
}

TEST(MasterEq, Rk4FourthOrder) {
  const auto s = LevelScheme::three_level();
  const Operator h = build_atom_hamiltonian(s, MicrowaveDrive{units::from_2pi_MHz(30.0), 0.0},
                                            ProbeField{units::from_2pi_MHz(10.0), 0.0});
  RelaxationRates rates{1e6, 1e6, 1e6};
  const auto m = constant_model(h, build_atom_jump_operators(s, rates));
  const Operator rho0 = from_pure(basis_state(3, s.index(Level::g)));
  auto run = [&](double dt) {
    EvolveConfig c;
    c.dt_max = dt;
    c.max_phase_per_step = 1e9;
    return evolve_final(rho0, m, 0.0, 2e-7, c);
  };
  const double dt = 1e-9;
  const Operator ref = run(dt / 8.0);
  const double e1 = (run(dt) - ref).norm();
  const double e2 = (run(dt / 2.0) - ref).norm();
  EXPECT_GE(e1 / e2, 12.0);
}

TEST(MasterEq, GroundStateStationaryWithoutProbe) {
  const auto s = LevelScheme::three_level();
  const Operator h = build_hamiltonian(s, 2.74, kDefaults.coeffs, kDefaults.microwave,
                                       ProbeField{0.0, units::from_2pi_MHz(159.3)});
  const auto jumps = build_jump_operators(s, kDefaults.rates);
  const Operator gg = from_pure(basis_state(9, s.pair_index(Level::g, Level::g)));
  EXPECT_LE(lindblad_rhs(gg, h, jumps).norm(), 1e-12);
}

TEST(MasterEq, PulseEnvelope) {
  PulseEnvelope p;
  p.peak = 2.0;
  p.flat_duration = 80e-9;
  p.edge_sigma = 10e-9;
  EXPECT_DOUBLE_EQ(p.value(0.5 * (p.rise_end() + p.fall_start())), 2.0);
  EXPECT_NEAR(p.value(p.rise_end() - p.edge_sigma), 2.0 * std::exp(-0.5), 1e-14);
  EXPECT_NEAR(p.value(p.fall_start() + p.edge_sigma), 2.0 * std::exp(-0.5), 1e-14);
  EXPECT_LE(p.value(p.start), 1e-3 * p.peak * (1.0 + 1e-12));
  EXPECT_LE(p.value(p.end()), 1e-3 * p.peak * (1.0 + 1e-12));
  for (double t : {p.rise_end(), p.fall_start()}) {
    EXPECT_NEAR(p.value(t - 1e-15), p.value(t + 1e-15), 1e-9);
  }
  for (double t : {p.start + 5e-9, p.rise_end() - 3e-9, p.fall_start() + 7e-9}) {
    const double h = 1e-13;
    EXPECT_NEAR(p.derivative(t), (p.value(t + h) - p.value(t - h)) / (2 * h), 1e-5 * 2.0 / 1e-8);
  }
  for (double t = p.start; t <= p.end(); t += 1e-9) EXPECT_GE(p.value(t), 0.0);
}

TEST(MasterEq, PulseIsAdiabatic) {
  PulseEnvelope p = default_spectrum_pulse();
  const auto [lm, lp] = autler_townes(kDefaults.microwave);
  for (double t = p.start; t <= p.end(); t += 0.1e-9) {
    if (p.value(t) > 0.1 * p.peak) EXPECT_LT(std::abs(p.derivative(t)), p.value(t) * (lp - lm));
  }
}

TEST(MasterEq, SingleAtomEit) {
  ParameterSet p = kDefaults;
  p.rates = RelaxationRates{};
  const auto s = LevelScheme::three_level();
  const int g = s.index(Level::g), r = s.index(Level::r);
  const double dp = -p.microwave.detuning;  // two-photon (dark) resonance
  const Operator g0 = from_pure(basis_state(3, g));

  const PulseEnvelope pulse = default_spectrum_pulse();
  const double window[] = {pulse.start, pulse.end()};
  EXPECT_GE(evolve(g0, make_atom_model(s, p, dp, pulse), window).states.back()(g, g).real(), 0.999);

  // The nearest bright state lies only |lambda+ + Delta| = 2pi x 19 MHz away, so
  // 10 ns edges leave a beat on the flat top; slow edges follow the dark state.
  PulseEnvelope slow = pulse;
  slow.edge_sigma = 100e-9;
  const double mid = 0.5 * (slow.rise_end() + slow.fall_start());
  const double times[] = {slow.start, mid, slow.end()};
  const auto tr = evolve(g0, make_atom_model(s, p, dp, slow), times);
  EXPECT_NEAR(tr.states[1](r, r).real(), 0.01, 0.003);
  const double ratio = slow.peak * slow.peak / (p.microwave.rabi * p.microwave.rabi);
  EXPECT_NEAR(tr.states[1](r, r).real(), ratio / (1.0 + ratio), 1e-3);
  EXPECT_GE(tr.states[2](g, g).real(), 0.999);
}

TEST(MasterEq, AntisymmetricStateDecoupling) {
  const auto s = LevelScheme::three_level();
  const PulseEnvelope pulse = default_spectrum_pulse();
  Eigen::VectorXcd minus = Eigen::VectorXcd::Zero(9);
  minus(s.pair_index(Level::e, Level::r)) = 1.0 / std::sqrt(2.0);
  minus(s.pair_index(Level::r, Level::e)) = -1.0 / std::sqrt(2.0);
  const Operator proj = minus * minus.adjoint();
  const Operator gg = from_pure(basis_state(9, s.pair_index(Level::g, Level::g)));
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(pulse.start + k * (pulse.end() - pulse.start) / 10);

  ParameterSet clean = kDefaults;
  clean.rates.dephasing_g = 0.0;
  const auto tr = evolve(gg, make_pair_model(s, 3.0, clean, units::from_2pi_MHz(159.3), pulse), times);
  for (const auto& rho : tr.states) {
    EXPECT_LT(expectation(rho, proj), 1e-10);
    EXPECT_LE(std::abs(trace_real(rho) - 1.0), 1e-8);
    EXPECT_LE(hermiticity_error(rho), 1e-9);
  }
  EXPECT_GE(min_eigenvalue(tr.states.back()), -1e-7);

  ParameterSet noisy = kDefaults;
  noisy.rates.dephasing_g = units::from_2pi_MHz(1.0);
  const auto tn = evolve(gg, make_pair_model(s, 3.0, noisy, units::from_2pi_MHz(159.3), pulse), times);
  EXPECT_GT(expectation(tn.states.back(), proj), 1e-9);
}

TEST(MasterEq, TraceDriftIsReported) {
  // A non-Hermitian "Hamiltonian" with gain breaks trace preservation.
  Operator h = Operator::Zero(2, 2);
  h(0, 0) = cd(0.0, 1e9);
  const double times[] = {0.0, 1e-7};
  EXPECT_THROW(evolve(from_pure(basis_state(2, 0)), constant_model(h), times), NumericalError);
}

TEST(MasterEq, StepSelection) {
  const auto s = LevelScheme::three_level();
  ParameterSet p = kDefaults;
  const PulseEnvelope pulse = default_spectrum_pulse();
  const auto far = make_pair_model(s, 5.0, p, 0.0, pulse);
  EXPECT_DOUBLE_EQ(select_time_step(far, {}), 0.05e-9);
  const auto close = make_pair_model(s, 2.0, p, 0.0, pulse);
  EXPECT_LT(select_time_step(close, {}), 0.05e-9);
}

TEST(MasterEq, PureStateEvolutionMatchesDensityMatrix) {
  const auto s = LevelScheme::three_level();
  ParameterSet p = kDefaults;
  p.rates = RelaxationRates{};
  const PulseEnvelope pulse = default_spectrum_pulse();
  auto m = make_pair_model(s, 2.74, p, units::from_2pi_MHz(159.3), pulse);
  // A global energy offset leaves rho unchanged; removing 2 Delta_p keeps the
  // RK4 phase error of the state vector comparable to that of rho.
  m.h_static.diagonal().array() -= 2.0 * units::from_2pi_MHz(159.3);
  const StateVector gg = basis_state(9, s.pair_index(Level::g, Level::g));
  const double times[] = {pulse.start, pulse.end()};
  const StateVector psi = evolve_state(gg, m, times).back();
  const Operator rho = evolve(from_pure(gg), m, times).states.back();
  EXPECT_LE((from_pure(psi) - rho).norm(), 1e-9);
}
