#pragma once

// Effective two-level analysis of the binding wells on E_m (near R2) and
// E_u (near R3), with a numeric curvature oracle on the full 3x3 curves.

#include <functional>
#include <string_view>

#include "rydimer/pair_potentials.hpp"
#include "rydimer/params.hpp"

namespace rydimer {

enum class Well { m, u };

std::string_view well_name(Well w);
Curve well_curve(Well w);

// |Omega^(2)|: two-photon |ee> <-> |rr> coupling through |er+> at R2.
// Throws NumericalError when the closed-form denominator vanishes.
double two_photon_rabi(const InteractionCoefficients& coeffs, const MicrowaveDrive& drive);

// Search interval for the numeric minimum, seeded from the crossing radii.
struct Bracket {
  double lo_um = 0.0;
  double hi_um = 0.0;
};
Bracket well_bracket(Well w, const InteractionCoefficients& coeffs, const MicrowaveDrive& drive);

struct HarmonicWell {
  Well well = Well::m;
  double r_center_um = 0.0;           // numeric minimum of the full curve
  double r_center_analytic_um = 0.0;  // two-level stationarity
  double energy_min = 0.0;            // full curve at r_center
  double kappa = 0.0;                 // hbar-scaled spring constant, rad/s / um^2
  double kappa_two_level = 0.0;       // 2/(hbar W) |eta_a eta_b|^(3/2)/(|eta_a|+|eta_b|)
  double nu = 0.0;                    // relative-motion vibration frequency, rad/s
  double sigma_um = 0.0;              // sqrt(2 hbar / (M nu))
};

// Spring constants from the closed forms. For the m well kappa equals the
// two-level expression; for the u well kappa is the simplified final formula
// (assumes R3 ~ (|C6_rr / Delta|)^(1/6)) and kappa_two_level is reported
// alongside it.
HarmonicWell harmonic_parameters(Well w, const InteractionCoefficients& coeffs,
                                 const MicrowaveDrive& drive, const AtomSpecies& species);

// nu = sqrt(2 kappa / M) with the hbar-scaled kappa converted to SI.
double vibration_frequency(double kappa, const AtomSpecies& species);
double vibrational_width_um(double nu, const AtomSpecies& species);

// Central second difference with step h (default 1e-3 um), Richardson
// extrapolated once. Throws NumericalError for non-positive curvature.
double numeric_curvature(const std::function<double(double)>& curve, double r_min_um,
                         double h_um = 1e-3);
double numeric_curvature(Curve curve, const InteractionCoefficients& coeffs,
                         const MicrowaveDrive& drive, double r_min_um);

}  // namespace rydimer
