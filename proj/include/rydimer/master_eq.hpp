#pragma once

// Lindblad master equation for one or two atoms with levels {g, e, r} or
// {s, g, e, r}. Frame and sign conventions (hbar = 1, rad/s):
//   single atom: H = Delta_p |g><g| - Delta |r><r| - Omega_p (|e><g| + h.c.)
//                    - Omega (|r><e| + h.c.)
//   |s>, when present, sits at Delta_p (degenerate with |g>) and is uncoupled.
//   pair: sum of single-atom terms plus C6_ee/R^6 |ee><ee| + C6_rr/R^6 |rr><rr|
//         + C6_er/R^6 (|er><er| + |re><re|) + C3_er/R^3 (|re><er| + h.c.).
// Two-atom basis index = i1 * d + i2 (atom 1 is the slow index).

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rydimer/params.hpp"

namespace rydimer {

enum class Level { s, g, e, r };

class LevelScheme {
 public:
  static LevelScheme three_level();
  static LevelScheme four_level();

  bool has(Level l) const;
  int index(Level l) const;  // throws ValidationError for unknown labels
  int atom_dim() const { return static_cast<int>(levels_.size()); }
  int pair_dim() const { return atom_dim() * atom_dim(); }
  const std::vector<Level>& levels() const { return levels_; }
  int pair_index(Level a1, Level a2) const { return index(a1) * atom_dim() + index(a2); }

 private:
  explicit LevelScheme(std::vector<Level> levels) : levels_(std::move(levels)) {}
  std::vector<Level> levels_;
};

using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

// |alpha><beta| on one atom (atom = 1 or 2), identity on the other.
Operator single_atom_op(const LevelScheme& scheme, Level alpha, Level beta, int atom);
// |alpha><beta| for a lone atom.
Operator atom_op(const LevelScheme& scheme, Level alpha, Level beta);

struct ProbeField {
  double rabi = 0.0;      // Omega_p
  double detuning = 0.0;  // Delta_p
};

Operator build_hamiltonian(const LevelScheme& scheme, double r_um,
                           const InteractionCoefficients& coeffs, const MicrowaveDrive& mw,
                           const ProbeField& probe);
Operator build_atom_hamiltonian(const LevelScheme& scheme, const MicrowaveDrive& mw,
                                const ProbeField& probe);

// Per atom: sqrt(Gamma_e) |g><e|, sqrt(Gamma_r) |g><r|,
// sqrt(gamma_g/2) (|s><s| + |g><g| - |e><e| - |r><r|).
std::vector<Operator> build_jump_operators(const LevelScheme& scheme, const RelaxationRates& rates);
std::vector<Operator> build_atom_jump_operators(const LevelScheme& scheme,
                                                const RelaxationRates& rates);

// Density-operator helpers.
double trace_real(const Operator& rho);
double hermiticity_error(const Operator& rho);
double min_eigenvalue(const Operator& rho);
double expectation(const Operator& rho, const Operator& op);
Operator from_pure(const StateVector& psi);
StateVector basis_state(int dim, int index);

// -i[H, rho] + sum_k (L rho L^dag - {L^dag L, rho}/2).
Operator lindblad_rhs(const Operator& rho, const Operator& h, std::span<const Operator> jumps);

// Column-stacked Liouvillian: vec(rhs) = S vec(rho). Cross-check oracle.
Eigen::MatrixXcd liouvillian_superoperator(const Operator& h, std::span<const Operator> jumps);

// Flat-top pulse with Gaussian edges of standard deviation edge_sigma:
//   t < t1: exp(-(t - t1)^2 / 2 sigma^2), t1 <= t <= t2: 1, t > t2: mirrored,
// scaled by peak. The window [start, end] extends edge_cutoff sigma beyond
// the flat top on each side; the default cutoff puts the edges at 1e-3 peak.
struct PulseEnvelope {
  double peak = 0.0;
  double flat_duration = 0.0;
  double edge_sigma = 10e-9;
  double start = 0.0;
  double edge_cutoff = kDefaultEdgeCutoff;

  static const double kDefaultEdgeCutoff;

  double rise_end() const { return start + edge_cutoff * edge_sigma; }
  double fall_start() const { return rise_end() + flat_duration; }
  double end() const { return fall_start() + edge_cutoff * edge_sigma; }
  double shape(double t) const;  // in [0, 1]
  double value(double t) const { return peak * shape(t); }
  double derivative(double t) const;
  void validate() const;
};

// H(t) = h_static + probe_rabi(t) * h_probe.
struct LindbladModel {
  Operator h_static;
  Operator h_probe;
  std::function<double(double)> probe_rabi;
  double probe_peak = 0.0;  // max |probe_rabi|, used for step-size selection
  std::vector<Operator> jumps;

  int dim() const { return static_cast<int>(h_static.rows()); }
  Operator hamiltonian(double t) const;
  void validate() const;
};

// Two-atom model for a pulse; h_probe = -(sum_j |e_j><g_j| + h.c.).
LindbladModel make_pair_model(const LevelScheme& scheme, double r_um, const ParameterSet& params,
                              double probe_detuning, const PulseEnvelope& pulse,
                              double rabi_scale = 1.0);
LindbladModel make_atom_model(const LevelScheme& scheme, const ParameterSet& params,
                              double probe_detuning, const PulseEnvelope& pulse);

struct EvolveConfig {
  double dt_max = 0.05e-9;
  double max_phase_per_step = 0.5;  // rad per step on the spectral spread of H
  double trace_tolerance = 1e-6;
};

// Step actually used: min(dt_max, max_phase_per_step / (spread of H at peak
// probe + ||sum L^dag L||)).
double select_time_step(const LindbladModel& model, const EvolveConfig& config);

struct Trajectory {
  std::vector<double> times;
  std::vector<Operator> states;
};

// Fixed-step RK4 from sample_times.front() through each sample time; each
// interval is split into equal steps no longer than select_time_step.
// Throws NumericalError when |tr rho - 1| exceeds the tolerance.
Trajectory evolve(const Operator& rho0, const LindbladModel& model,
                  std::span<const double> sample_times, const EvolveConfig& config = {});
Operator evolve_final(const Operator& rho0, const LindbladModel& model, double t0, double t1,
                      const EvolveConfig& config = {});

// Coherent RK4 evolution of a state vector (jumps ignored).
std::vector<StateVector> evolve_state(const StateVector& psi0, const LindbladModel& model,
                                      std::span<const double> sample_times,
                                      const EvolveConfig& config = {});

}  // namespace rydimer
