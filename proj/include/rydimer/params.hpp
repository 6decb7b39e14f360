#pragma once

// Atomic species data, interaction coefficients and drive parameters for a
// pair of microwave-dressed Rydberg atoms. All values are stored in the
// internal unit system of units.hpp.

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rydimer {

struct AtomSpecies {
  double mass_kg = 0.0;
  int n = 0;
  double quantum_defect_s = 0.0;  // |e> = nS_1/2
  double quantum_defect_p = 0.0;  // |r> = nP_3/2
  double omega_rr_prime = 0.0;    // Stark splitting |r> - |r'_+->, rad/s

  // 87Rb with the quantum defects used for the n = 60 pair.
  static AtomSpecies rubidium87(int n = 60);

  void validate() const;
};

// n* = n - delta. Throws ValidationError unless n > delta.
double effective_principal(int n, double defect);

// Unshifted |e> -> |r> frequency from the Rydberg formula (infinite-mass
// Rydberg constant).
double transition_frequency(const AtomSpecies& species);

struct InteractionCoefficients {
  double c6_ee = 0.0;  // rad/s um^6, repulsive (> 0)
  double c6_rr = 0.0;  // rad/s um^6, attractive (< 0) at theta = pi/2
  double c6_er = 0.0;  // rad/s um^6
  double c3_er = 0.0;  // rad/s um^3
  double theta = 0.0;  // angle between quantization axis and separation
};

// Angular factors relative to the theta = pi/2 reference values.
double c3_angular_factor(double theta);  // 3 sin^2 - 2
double c6_rr_angular_factor(double theta);  // sin^2

// Rescales coefficients given at theta = pi/2 to an arbitrary angle.
// C6_ee is isotropic; C6_er is kept angle-independent.
InteractionCoefficients scale_coefficients(const InteractionCoefficients& reference,
                                           double theta);

struct EffectiveVdW {
  double c6_er = 0.0;
  // Below this separation the second-order treatment of the off-resonant
  // channels breaks down.
  double validity_radius_um = 0.0;
};

// C6_er = sum |C3'|^2 / omega_rr' over the off-resonant |r'> channels.
EffectiveVdW effective_c6_er(std::span<const double> cross_c3, double omega_rr_prime);

// Semiclassical estimates from the reduced matrix element
// (nS||d||nP) ~ -(3/2) n*^2 (atomic units). Helpers only: the working
// coefficients are configuration inputs.
double semiclassical_c3_er(const AtomSpecies& species, double theta);
struct CrossChannelC3 {
  double to_r_minus = 0.0;  // |re> <-> |e r'_->
  double to_r_plus = 0.0;   // |re> <-> |e r'_+>
};
CrossChannelC3 semiclassical_cross_c3(const AtomSpecies& species, double theta);

struct MicrowaveDrive {
  double rabi = 0.0;       // Omega >= 0
  double detuning = 0.0;   // Delta, sign-carrying

  void validate() const;
};

struct RelaxationRates {
  double decay_e = 0.0;      // Gamma_e
  double decay_r = 0.0;      // Gamma_r
  double dephasing_g = 0.0;  // gamma_g

  // Total decay rate of the sigma_eg / sigma_rg coherences.
  double coherence_rate_e() const { return dephasing_g + 0.5 * decay_e; }
  double coherence_rate_r() const { return dephasing_g + 0.5 * decay_r; }

  void validate() const;
};

struct ParameterSet {
  AtomSpecies atom;
  InteractionCoefficients coeffs;
  MicrowaveDrive microwave;
  RelaxationRates rates;

  static ParameterSet paper_defaults();
  void validate() const;
};

// JSON parameter file schema:
//   {"atom": {"mass_kg", "n", "delta_s", "delta_p", "omega_rr_prime_2pi_MHz"},
//    "coeffs": {"c6_ee_2pi_GHz_um6", "c6_rr_2pi_GHz_um6", "c6_er_2pi_GHz_um6",
//               "c3_er_2pi_GHz_um3", "theta_rad"},
//    "microwave": {"omega_2pi_MHz", "delta_2pi_MHz"},
//    "rates": {"gamma_e_kHz", "gamma_r_kHz", "gamma_g_2pi_kHz"}}
// All four sections are required; keys missing inside a section take the
// paper defaults. Unknown keys are rejected.
nlohmann::json to_json(const ParameterSet& params);
ParameterSet parameters_from_json(const nlohmann::json& j);

}  // namespace rydimer
