#include "rydimer/gate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "rydimer/errors.hpp"
#include "rydimer/pair_potentials.hpp"
#include "rydimer/spectra.hpp"
#include "rydimer/units.hpp"
#include "rydimer/wells.hpp"

namespace rydimer {

namespace {

using cd = std::complex<double>;

std::vector<double> sample_times(double t0, double t1, std::size_t n) {
  return linear_grid(t0, t1, std::max<std::size_t>(n, 2));
}

ParameterSet without_rates(ParameterSet p) {
  p.rates = RelaxationRates{};
  return p;
}

struct Optimum {
  double x = 0.0;
  double value = 0.0;
};

// Grid search followed by Brent refinement between the neighbours of the best
// grid point.
template <class F>
Optimum maximize_on_grid(F&& f, double lo, double hi, int points) {
  const std::vector<double> grid = linear_grid(lo, hi, static_cast<std::size_t>(points));
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = f(grid[k]);
  const auto best = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(grid.size() - 1, best + 1)];
  auto [x, fx] = boost::math::tools::brent_find_minima([&](double v) { return -f(v); }, a, b, 20);
  if (-fx < values[best]) return {grid[best], values[best]};
  return {x, -fx};
}

}  // namespace

PulseEnvelope GateConfig::pulse() const {
  PulseEnvelope p;
  p.peak = peak_rabi;
  p.flat_duration = flat_duration;
  p.edge_sigma = edge_sigma;
  return p;
}

void GateConfig::validate() const {
  params.validate();
  if (!(r_um > 0.0)) throw ValidationError("gate distance R must be positive");
  if (!(franck_condon > 0.0) || franck_condon > 1.0) {
    throw ValidationError("Franck-Condon factor must lie in (0, 1]");
  }
  if (!(flat_duration >= 0.0)) throw ValidationError("gate flat duration must be >= 0");
  pulse().validate();
  if (!(duration() > 0.0)) throw ValidationError("gate duration must be positive");
}

GateConfig default_gate_config(const ParameterSet& params) {
  GateConfig c;
  c.params = params;
  const Bracket b = well_bracket(Well::m, params.coeffs, params.microwave);
  c.r_um = find_well_minimum(Curve::middle, params.coeffs, params.microwave, b.lo_um, b.hi_um).r_um;
  c.probe_detuning = units::from_2pi_MHz(159.3);
  c.peak_rabi = units::from_2pi_MHz(10.0);
  c.franck_condon = 0.65;
  const PulseEnvelope p = c.pulse();
  c.flat_duration = std::max(0.0, 0.9e-6 - 2.0 * p.edge_cutoff * p.edge_sigma);
  return c;
}

double effective_two_photon_rabi(double peak_rabi, double probe_detuning, double franck_condon) {
  if (probe_detuning == 0.0) throw ValidationError("effective two-photon rate needs Delta_p != 0");
  return franck_condon * peak_rabi * peak_rabi / probe_detuning;
}

double seed_flat_duration(double rate, double edge_sigma) {
  if (!(std::abs(rate) > 0.0)) throw ValidationError("two-photon rate must be nonzero");
  // Each Gaussian edge of shape^2 adds sqrt(pi) sigma / 2.
  return std::max(0.0, std::numbers::pi / std::abs(rate) - std::sqrt(std::numbers::pi) * edge_sigma);
}

CoherentGate coherent_gate(const GateConfig& config) {
  config.validate();
  const ParameterSet coherent = without_rates(config.params);
  const PulseEnvelope pulse = config.pulse();
  const double t0 = pulse.start;
  const double t1 = pulse.end();
  const double times[2] = {t0, t1};
  const double dp = config.probe_detuning;
  const double scale = std::sqrt(config.franck_condon);

  const LevelScheme scheme = LevelScheme::three_level();
  // Energies are measured from |gg> (2 Delta_p) and |g> (Delta_p), which also
  // keeps the RK4 phase error of the large ground-state energy out of c_gg, c_g.
  LindbladModel pair = make_pair_model(scheme, config.r_um, coherent, dp, pulse, scale);
  pair.h_static.diagonal().array() -= 2.0 * dp;
  const StateVector gg = basis_state(scheme.pair_dim(), scheme.pair_index(Level::g, Level::g));
  const cd c_gg = evolve_state(gg, pair, times, config.integrator).back()(
      scheme.pair_index(Level::g, Level::g));

  PulseEnvelope atom_pulse = pulse;
  atom_pulse.peak *= scale;
  LindbladModel atom = make_atom_model(scheme, coherent, dp, atom_pulse);
  atom.h_static.diagonal().array() -= dp;
  const StateVector g = basis_state(scheme.atom_dim(), scheme.index(Level::g));
  const cd c_g = evolve_state(g, atom, times, config.integrator).back()(scheme.index(Level::g));

  const cd corrected = c_gg * std::polar(1.0, -2.0 * std::arg(c_g));
  CoherentGate out;
  out.fidelity = std::norm(1.0 + 2.0 * std::abs(c_g) - corrected) / 16.0;
  out.conditional_phase = std::arg(corrected);
  out.p_gg_return = std::norm(c_gg);
  return out;
}

GateConfig calibrate_pulse(const GateConfig& config, const CalibrationOptions& opt) {
  config.validate();
  if (opt.tau_points < 3) throw ValidationError("calibration needs at least 3 duration points");

  auto tune_duration = [&](double dp) {
    GateConfig c = config;
    c.probe_detuning = dp;
    const double seed = seed_flat_duration(
        effective_two_photon_rabi(c.peak_rabi, dp, c.franck_condon), c.edge_sigma);
    const auto best = maximize_on_grid(
        [&](double tau) {
          GateConfig trial = c;
          trial.flat_duration = tau;
          return coherent_gate(trial).fidelity;
        },
        opt.tau_lo_factor * seed, opt.tau_hi_factor * seed, opt.tau_points);
    c.flat_duration = best.x;
    return std::pair{c, best.value};
  };

  if (!opt.refine_detuning) return tune_duration(config.probe_detuning).first;

  const double hw = opt.detuning_half_width > 0.0 ? opt.detuning_half_width
                                                  : units::from_2pi_MHz(0.5);
  const auto best = maximize_on_grid([&](double dp) { return tune_duration(dp).second; },
                                     config.probe_detuning - hw, config.probe_detuning + hw,
                                     std::max(3, opt.detuning_points));
  return tune_duration(best.x).first;
}

GateResult simulate_cphase(const GateConfig& config) {
  config.validate();
  const LevelScheme scheme = LevelScheme::four_level();
  const PulseEnvelope pulse = config.pulse();
  const LindbladModel model = make_pair_model(scheme, config.r_um, config.params,
                                              config.probe_detuning, pulse,
                                              std::sqrt(config.franck_condon));
  const int dim = scheme.pair_dim();
  const int ss = scheme.pair_index(Level::s, Level::s);
  const int sg = scheme.pair_index(Level::s, Level::g);
  const int gs = scheme.pair_index(Level::g, Level::s);
  const int gg = scheme.pair_index(Level::g, Level::g);

  StateVector in = StateVector::Zero(dim);
  in(ss) = in(sg) = in(gs) = in(gg) = 0.5;
  StateVector target = in;
  target(gg) = -0.5;

  const auto times = sample_times(pulse.start, pulse.end(), config.trace_samples);
  const Trajectory traj = evolve(from_pure(in), model, times, config.integrator);

  GateResult out;
  out.times = traj.times;
  for (const auto& rho : traj.states) {
    out.p_gg.push_back(rho(gg, gg).real());
    out.p_2ry.push_back(excitation_probabilities(rho, scheme).p2);
  }
  const Operator& rho = traj.states.back();
  out.final_state = rho;
  out.fidelity_raw = (target.adjoint() * rho * target)(0, 0).real();

  const double phi1 = std::arg(rho(gs, ss));
  const double phi2 = std::arg(rho(sg, ss));
  StateVector u = StateVector::Ones(dim);
  const int d = scheme.atom_dim();
  const int g = scheme.index(Level::g);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      double phase = 0.0;
      if (a == g) phase -= phi1;
      if (b == g) phase -= phi2;
      u(a * d + b) = std::polar(1.0, phase);
    }
  }
  const Operator corrected = u.asDiagonal() * rho * u.conjugate().asDiagonal();
  out.fidelity = (target.adjoint() * corrected * target)(0, 0).real();
  out.conditional_phase = std::arg(corrected(gg, ss));
  return out;
}

RabiTrace rabi_cycle_trace(const GateConfig& config) {
  config.validate();
  const LevelScheme scheme = LevelScheme::three_level();
  const PulseEnvelope pulse = config.pulse();
  const LindbladModel model = make_pair_model(scheme, config.r_um, config.params,
                                              config.probe_detuning, pulse,
                                              std::sqrt(config.franck_condon));
  const int gg = scheme.pair_index(Level::g, Level::g);
  const auto times = sample_times(pulse.start, pulse.end(), config.trace_samples);
  const Trajectory traj =
      evolve(from_pure(basis_state(scheme.pair_dim(), gg)), model, times, config.integrator);
  RabiTrace out;
  out.times = traj.times;
  for (const auto& rho : traj.states) {
    out.p_gg.push_back(rho(gg, gg).real());
    out.p_2ry.push_back(excitation_probabilities(rho, scheme).p2);
  }
  return out;
}

std::vector<SweepPoint> fidelity_sweep(const GateConfig& base, std::span<const double> dephasing) {
  if (dephasing.empty()) throw ValidationError("fidelity sweep needs at least one gamma value");
  std::vector<SweepPoint> out(dephasing.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(dephasing.size()); ++k) {
    try {
      GateConfig c = base;
      c.params.rates.dephasing_g = dephasing[k];
      c.trace_samples = 2;
      const GateResult r = simulate_cphase(c);
      out[k] = {dephasing[k], r.fidelity, r.fidelity_raw, r.conditional_phase};
    } catch (...) {
#pragma omp critical(rydimer_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

bool is_non_increasing(std::span<const SweepPoint> sweep, double tolerance) {
  for (std::size_t k = 1; k < sweep.size(); ++k) {
    if (sweep[k].dephasing >= sweep[k - 1].dephasing &&
        sweep[k].fidelity > sweep[k - 1].fidelity + tolerance) {
      return false;
    }
  }
  return true;
}

void LadderModel::validate() const {
  if (n_max() < 10) throw ValidationError("ladder needs N_max >= 10");
  if (!(nu > 0.0)) throw ValidationError("ladder spacing must be positive");
  if (fc.front() == 0.0) throw ValidationError("ladder needs f(0) != 0");
  if (!(dephasing >= 0.0)) throw ValidationError("ladder dephasing must be >= 0");
}

LadderModel make_ladder(const TrapState& trap, double r_m_um, double Sigma_m_um, double nu,
                        double two_photon_peak, double dephasing, int n_max) {
  LadderModel m;
  m.nu = nu;
  m.two_photon_peak = two_photon_peak;
  m.dephasing = dephasing;
  m.fc.resize(static_cast<std::size_t>(std::max(0, n_max) + 1));
  for (int n = 0; n <= n_max; ++n) {
    m.fc[n] = franck_condon(n, trap, DimerVibration{n, r_m_um, Sigma_m_um, nu});
  }
  m.validate();
  return m;
}

double ladder_two_photon_peak(const PulseEnvelope& pulse) {
  PulseEnvelope unit = pulse;
  unit.peak = 1.0;
  // Flat top plus the two truncated Gaussian^2 edges.
  const double edge = 0.5 * std::sqrt(std::numbers::pi) * unit.edge_sigma *
                      std::erf(unit.edge_cutoff);
  return std::numbers::pi / (unit.flat_duration + 2.0 * edge);
}

double LeakageResult::even_excited_total() const {
  double s = 0.0;
  for (std::size_t n = 2; n < populations.size(); n += 2) s += populations[n];
  return s;
}

LeakageResult vibrational_leakage(const LadderModel& ladder, const PulseEnvelope& pulse,
                                  const EvolveConfig& integrator) {
  ladder.validate();
  pulse.validate();
  const int levels = ladder.n_max() + 1;
  const int dim = levels + 1;
  LindbladModel model;
  model.h_static = Operator::Zero(dim, dim);
  model.h_probe = Operator::Zero(dim, dim);
  for (int n = 0; n < levels; ++n) {
    model.h_static(n + 1, n + 1) = ladder.nu * n;
    const double c = -ladder.fc[n] / ladder.fc[0];
    model.h_probe(n + 1, 0) = c;
    model.h_probe(0, n + 1) = c;
  }
  PulseEnvelope unit = pulse;
  unit.peak = 1.0;
  const double peak = ladder.two_photon_peak;
  model.probe_rabi = [unit, peak](double t) {
    const double s = unit.shape(t);
    return peak * s * s;
  };
  model.probe_peak = peak;
  Operator jump = Operator::Zero(dim, dim);
  jump(0, 0) = std::sqrt(2.0 * ladder.dephasing);
  model.jumps.push_back(jump);

  const Operator rho =
      evolve_final(from_pure(basis_state(dim, 0)), model, pulse.start, pulse.end(), integrator);
  LeakageResult out;
  out.ground = rho(0, 0).real();
  out.populations.resize(levels);
  for (int n = 0; n < levels; ++n) out.populations[n] = rho(n + 1, n + 1).real();
  out.truncation_warning = out.populations.back() > 1e-4;
  return out;
}

}  // namespace rydimer
