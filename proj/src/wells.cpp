#include "rydimer/wells.hpp"

#include <cmath>

#include "rydimer/errors.hpp"
#include "rydimer/units.hpp"

namespace rydimer {

namespace {

struct TwoLevelCrossing {
  double r0_um = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double coupling = 0.0;  // half the avoided-crossing gap
};

TwoLevelCrossing crossing_for(Well w, const InteractionCoefficients& coeffs,
                              const MicrowaveDrive& drive) {
  const CrossingPoints x = crossing_points(coeffs, drive);
  TwoLevelCrossing c;
  if (w == Well::m) {
    c.r0_um = x.r2_um;
    const BarePairEnergies s = bare_energy_slopes(x.r2_um, coeffs);
    c.eta1 = s.ee;
    c.eta2 = s.rr;
    c.coupling = two_photon_rabi(coeffs, drive);
  } else {
    c.r0_um = x.r3_um;
    const BarePairEnergies s = bare_energy_slopes(x.r3_um, coeffs);
    c.eta1 = s.rr;
    c.eta2 = s.er_plus;
    c.coupling = std::sqrt(2.0) * drive.rabi;
  }
  if (c.eta1 == 0.0 || c.eta2 == 0.0) {
    throw NumericalError("vanishing bare-energy slope at the crossing");
  }
  return c;
}

// Upper branch of [[E + eta1 x, W], [W, E + eta2 x]] has its minimum where
// a + b^2 x / sqrt(b^2 x^2 + W^2) = 0.
double upper_branch_offset(const TwoLevelCrossing& c) {
  const double a = 0.5 * (c.eta1 + c.eta2);
  const double b = 0.5 * (c.eta1 - c.eta2);
  if (!(std::abs(b) > std::abs(a))) {
    throw NumericalError("two-level branch has no stationary point (|b| <= |a|)");
  }
  return -a * c.coupling / (std::abs(b) * std::sqrt(b * b - a * a));
}

double two_level_kappa(const TwoLevelCrossing& c) {
  if (!(c.coupling > 0.0)) throw NumericalError("two-level spring constant needs a nonzero gap");
  const double e1 = std::abs(c.eta1);
  const double e2 = std::abs(c.eta2);
  return 2.0 * std::pow(e1 * e2, 1.5) / (c.coupling * (e1 + e2));
}

}  // namespace

std::string_view well_name(Well w) { return w == Well::m ? "m" : "u"; }

Curve well_curve(Well w) { return w == Well::m ? Curve::middle : Curve::upper; }

double two_photon_rabi(const InteractionCoefficients& c, const MicrowaveDrive& drive) {
  if (!(drive.detuning < 0.0)) {
    throw NumericalError("no crossing: two-photon coupling requires Delta < 0");
  }
  const double ad = std::abs(drive.detuning);
  const double spread = c.c6_ee - c.c6_rr;
  if (!(spread > 0.0)) throw NumericalError("no crossing: requires C6_ee > C6_rr");
  const double t1 = ad * (c.c6_ee + c.c6_rr);
  const double t2 = c.c3_er * std::sqrt(2.0 * ad * spread);
  const double den = t1 - t2;
  const double scale = std::max(std::abs(t1), std::abs(t2));
  if (std::abs(den) <= 1e-6 * scale) {
    throw NumericalError("divergent two-photon Rabi frequency (denominator ~ 0)");
  }
  return std::abs(2.0 * drive.rabi * drive.rabi * spread / den);
}

Bracket well_bracket(Well w, const InteractionCoefficients& coeffs, const MicrowaveDrive& drive) {
  const CrossingPoints x = crossing_points(coeffs, drive);
  if (w == Well::m) return {x.r2_um - 0.15, x.r2_um + 0.15};
  return {x.r2_um, x.r3_um + 0.1};
}

double vibration_frequency(double kappa, const AtomSpecies& species) {
  if (!(kappa > 0.0)) throw NumericalError("spring constant must be positive");
  const double k_si = kappa * units::hbar * 1e12;  // J / m^2
  return std::sqrt(2.0 * k_si / species.mass_kg);
}

double vibrational_width_um(double nu, const AtomSpecies& species) {
  return std::sqrt(2.0 * units::hbar / (species.mass_kg * nu)) * 1e6;
}

HarmonicWell harmonic_parameters(Well w, const InteractionCoefficients& coeffs,
                                 const MicrowaveDrive& drive, const AtomSpecies& species) {
  species.validate();
  const TwoLevelCrossing c = crossing_for(w, coeffs, drive);
  HarmonicWell h;
  h.well = w;
  h.r_center_analytic_um = c.r0_um + upper_branch_offset(c);
  h.kappa_two_level = two_level_kappa(c);
  if (w == Well::m) {
    h.kappa = h.kappa_two_level;
  } else {
    const double ad = std::abs(drive.detuning);
    if (!(drive.rabi > 0.0)) throw NumericalError("u-well spring constant needs Omega > 0");
    h.kappa = 2.0 / (c.r0_um * c.r0_um) * 9.0 * std::pow(ad, 1.25) *
              std::pow(coeffs.c3_er, 1.5) / (drive.rabi * std::pow(std::abs(coeffs.c6_rr), 0.75));
  }
  const Bracket b = well_bracket(w, coeffs, drive);
  const WellPoint p = find_well_minimum(well_curve(w), coeffs, drive, b.lo_um, b.hi_um);
  h.r_center_um = p.r_um;
  h.energy_min = p.energy;
  h.nu = vibration_frequency(h.kappa, species);
  h.sigma_um = vibrational_width_um(h.nu, species);
  return h;
}

double numeric_curvature(const std::function<double(double)>& f, double r0, double h) {
  if (!(h > 0.0)) throw ValidationError("curvature step must be positive");
  auto second = [&](double step) {
    return (f(r0 + step) - 2.0 * f(r0) + f(r0 - step)) / (step * step);
  };
  const double d1 = second(h);
  const double d2 = second(0.5 * h);
  const double k = (4.0 * d2 - d1) / 3.0;
  if (!(k > 0.0)) throw NumericalError("non-positive curvature: not a minimum");
  return k;
}

double numeric_curvature(Curve curve, const InteractionCoefficients& coeffs,
                         const MicrowaveDrive& drive, double r_min_um) {
  return numeric_curvature(
      [&](double r) { return dressed_energy(curve, r, coeffs, drive); }, r_min_um);
}

}  // namespace rydimer
