#pragma once

// CPHASE gate between atoms trapped at the m-well distance: a weak probe
// pulse drives one two-photon Rabi cycle |gg> -> |D_m> -> |gg> while EIT
// keeps singly occupied |g> sectors dark. Qubit states are {|s>, |g>}.

#include <span>
#include <vector>

#include "rydimer/master_eq.hpp"
#include "rydimer/params.hpp"
#include "rydimer/vibrational.hpp"

namespace rydimer {

struct GateConfig {
  ParameterSet params = ParameterSet::paper_defaults();
  double r_um = 0.0;
  double probe_detuning = 0.0;  // Delta_p
  double peak_rabi = 0.0;       // Omega_p0 before Franck-Condon scaling
  double franck_condon = 0.65;  // probe amplitude is scaled by sqrt(f)
  double flat_duration = 0.0;
  double edge_sigma = 10e-9;
  EvolveConfig integrator;
  std::size_t trace_samples = 181;

  PulseEnvelope pulse() const;
  double duration() const { return pulse().end() - pulse().start; }
  void validate() const;
};

// R at the numeric minimum of E_m, Delta_p = 2pi x 159.3 MHz,
// Omega_p0 = 2pi x 10 MHz, f = 0.65, total window 0.9 us.
GateConfig default_gate_config(const ParameterSet& params = ParameterSet::paper_defaults());

// f Omega_p0^2 / Delta_p; order-of-magnitude seed only.
double effective_two_photon_rabi(double peak_rabi, double probe_detuning, double franck_condon);

// Flat duration giving pulse area 2 int Omega_p2(t) dt = 2 pi for a constant
// two-photon rate (edges contribute through shape^2).
double seed_flat_duration(double two_photon_rabi, double edge_sigma);

struct CoherentGate {
  double fidelity = 0.0;          // after local phase correction
  double conditional_phase = 0.0; // arg c_gg - 2 arg c_g, in (-pi, pi]
  double p_gg_return = 0.0;       // |c_gg|^2
};

// Pure-state gate with all rates switched off (gg pair sector plus a lone
// |g> atom); cheap enough to be called inside calibration loops.
CoherentGate coherent_gate(const GateConfig& config);

struct CalibrationOptions {
  double tau_lo_factor = 0.25;  // coarse flat-duration grid, multiples of the seed
  double tau_hi_factor = 1.75;
  int tau_points = 31;
  bool refine_detuning = false;
  double detuning_half_width = 0.0;  // rad/s; default 2pi x 0.5 MHz when refining
  int detuning_points = 21;
};

// Chooses the flat duration (and optionally Delta_p) maximizing the coherent
// fidelity near the first two-photon Rabi cycle.
GateConfig calibrate_pulse(const GateConfig& config, const CalibrationOptions& options = {});

struct GateResult {
  double fidelity = 0.0;
  double fidelity_raw = 0.0;  // without local phase correction
  double conditional_phase = 0.0;
  std::vector<double> times;
  std::vector<double> p_gg;   // <gg|rho|gg> along the gate
  std::vector<double> p_2ry;  // both atoms in e or r
  Operator final_state;
};

// 16-dim master equation from (|s>+|g>)(|s>+|g>)/2. Local single-qubit
// phases arg rho_{gs,ss}, arg rho_{sg,ss} are removed before comparing with
// (|ss>+|sg>+|gs>-|gg>)/2.
GateResult simulate_cphase(const GateConfig& config);

struct RabiTrace {
  std::vector<double> times;
  std::vector<double> p_gg;
  std::vector<double> p_2ry;
};

// Same pulse starting from |gg> (3-level pair model).
RabiTrace rabi_cycle_trace(const GateConfig& config);

struct SweepPoint {
  double dephasing = 0.0;  // gamma_g, rad/s
  double fidelity = 0.0;
  double fidelity_raw = 0.0;
  double conditional_phase = 0.0;
};

// Independent simulate_cphase runs (OpenMP over gamma values).
std::vector<SweepPoint> fidelity_sweep(const GateConfig& base, std::span<const double> dephasing);
bool is_non_increasing(std::span<const SweepPoint> sweep, double tolerance);

struct LadderModel {
  double nu = 0.0;                  // level spacing nu_m
  std::vector<double> fc;           // f(0..N_max), signed
  double two_photon_peak = 0.0;     // Omega_p2 coupling |G> <-> |D_0> at flat top
  double dephasing = 0.0;           // decay rate of the |G>-|D_n> coherences

  int n_max() const { return static_cast<int>(fc.size()) - 1; }
  void validate() const;
};

// f(n) for n = 0..n_max with trap separation R_m + mismatch.
LadderModel make_ladder(const TrapState& trap, double r_m_um, double Sigma_m_um, double nu,
                        double two_photon_peak, double dephasing, int n_max = 20);

// Peak two-photon rate making 2 int Omega_p2(t) dt = 2 pi, Omega_p2 ~ shape^2.
double ladder_two_photon_peak(const PulseEnvelope& pulse);

struct LeakageResult {
  double ground = 0.0;
  std::vector<double> populations;  // index n = 0..N_max
  bool truncation_warning = false;  // P(N_max) > 1e-4

  double even_excited_total() const;  // n = 2, 4, ...
};

// Effective |G>, |D_0..N> model: energies n nu, couplings -Omega_p2(t) f(n)/f(0),
// jump sqrt(2 gamma) |G><G|.
LeakageResult vibrational_leakage(const LadderModel& ladder, const PulseEnvelope& pulse,
                                  const EvolveConfig& integrator = {.dt_max = 0.5e-9});

}  // namespace rydimer
