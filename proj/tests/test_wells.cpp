#include <cmath>

#include <gtest/gtest.h>

#include "rydimer/errors.hpp"
#include "rydimer/units.hpp"
#include "rydimer/wells.hpp"

using namespace rydimer;

namespace {

const ParameterSet kDefaults = ParameterSet::paper_defaults();

}  // namespace

TEST(Wells, TwoPhotonRabiPaperValue) {
  const double w = two_photon_rabi(kDefaults.coeffs, kDefaults.microwave);
  EXPECT_NEAR(units::to_2pi_MHz(w), 55.0, 2.0);
}

TEST(Wells, TwoPhotonRabiLimits) {
  MicrowaveDrive off = kDefaults.microwave;
  off.rabi = 0.0;
  EXPECT_EQ(two_photon_rabi(kDefaults.coeffs, off), 0.0);

  InteractionCoefficients c = kDefaults.coeffs;
  c.c3_er = 0.0;
  // 2 * 100^2 * 435 / (500 * 155) in 2pi MHz.
  EXPECT_NEAR(units::to_2pi_MHz(two_photon_rabi(c, kDefaults.microwave)),
              2.0 * 100.0 * 100.0 * 435.0 / (500.0 * 155.0), 1e-9);
}

TEST(Wells, TwoPhotonRabiDivergence) {
  InteractionCoefficients c = kDefaults.coeffs;
  c.c6_rr = units::from_2pi_GHz(-100.0);  // C6_ee + C6_rr > 0
  const double ad = std::abs(kDefaults.microwave.detuning);
  c.c3_er = ad * (c.c6_ee + c.c6_rr) / std::sqrt(2.0 * ad * (c.c6_ee - c.c6_rr));
  EXPECT_THROW(two_photon_rabi(c, kDefaults.microwave), NumericalError);
  MicrowaveDrive blue = kDefaults.microwave;
  blue.detuning = 1.0;
  EXPECT_THROW(two_photon_rabi(kDefaults.coeffs, blue), NumericalError);
}

TEST(Wells, HarmonicParametersMWell) {
  const auto h = harmonic_parameters(Well::m, kDefaults.coeffs, kDefaults.microwave, kDefaults.atom);
  EXPECT_NEAR(units::to_2pi_MHz(h.nu), 2.0, 0.2);
  EXPECT_NEAR(units::to_nm(h.sigma_um), 10.7, 0.3);
  EXPECT_NEAR(h.r_center_um, 2.74, 0.02);
  EXPECT_NEAR(h.r_center_analytic_um, h.r_center_um, 0.01);
  EXPECT_GT(h.kappa, 0.0);
  EXPECT_DOUBLE_EQ(h.kappa, h.kappa_two_level);
  EXPECT_GT(std::abs(kDefaults.microwave.detuning) / h.nu, 50.0);
}

TEST(Wells, HarmonicParametersUWell) {
  const auto h = harmonic_parameters(Well::u, kDefaults.coeffs, kDefaults.microwave, kDefaults.atom);
  EXPECT_NEAR(units::to_2pi_kHz(h.nu), 450.0, 45.0);
  EXPECT_NEAR(h.r_center_um, 2.85, 0.03);
}

TEST(Wells, VibrationFrequencyConsistentWithKappa) {
  const auto h = harmonic_parameters(Well::m, kDefaults.coeffs, kDefaults.microwave, kDefaults.atom);
  const double k_si = h.kappa * units::hbar * 1e12;
  EXPECT_NEAR(h.nu, std::sqrt(2.0 * k_si / kDefaults.atom.mass_kg), 1e-12 * h.nu);
  const double sigma_m = std::sqrt(2.0 * units::hbar / (kDefaults.atom.mass_kg * h.nu));
  EXPECT_NEAR(h.sigma_um * 1e-6, sigma_m, 1e-12 * sigma_m);
}

TEST(Wells, MassScaling) {
  AtomSpecies heavy = kDefaults.atom;
  heavy.mass_kg *= 2.0;
  for (Well w : {Well::m, Well::u}) {
    const auto a = harmonic_parameters(w, kDefaults.coeffs, kDefaults.microwave, kDefaults.atom);
    const auto b = harmonic_parameters(w, kDefaults.coeffs, kDefaults.microwave, heavy);
    EXPECT_NEAR(b.nu, a.nu / std::sqrt(2.0), 1e-12 * a.nu);
  }
}

TEST(Wells, KappaInverseToTwoPhotonRabi) {
  MicrowaveDrive strong = kDefaults.microwave;
  strong.rabi *= 2.0;
  const double o1 = two_photon_rabi(kDefaults.coeffs, kDefaults.microwave);
  const double o2 = two_photon_rabi(kDefaults.coeffs, strong);
  EXPECT_NEAR(o2, 4.0 * o1, 1e-12 * o2);
  const auto a = harmonic_parameters(Well::m, kDefaults.coeffs, kDefaults.microwave, kDefaults.atom);
  const auto b = harmonic_parameters(Well::m, kDefaults.coeffs, strong, kDefaults.atom);
  EXPECT_NEAR(b.kappa, a.kappa / 4.0, 1e-12 * a.kappa);
}

TEST(Wells, TwoLevelKappaEqualsBranchCurvature) {
  // Upper branch of the two-level model around R2, differentiated numerically.
  const auto& c = kDefaults.coeffs;
  const auto& mw = kDefaults.microwave;
  const auto x = crossing_points(c, mw);
  const auto s = bare_energy_slopes(x.r2_um, c);
  const double w = two_photon_rabi(c, mw);
  const double a = 0.5 * (s.ee + s.rr);
  const double b = 0.5 * (s.ee - s.rr);
  auto branch = [&](double dx) { return a * dx + std::sqrt(b * b * dx * dx + w * w); };
  double lo = -0.2, hi = 0.2;
  for (int i = 0; i < 200; ++i) {  // bisection on the sign of the slope
    const double mid = 0.5 * (lo + hi);
    const double d = (branch(mid + 1e-9) - branch(mid - 1e-9));
    (d > 0 ? hi : lo) = mid;
  }
  const double x0 = 0.5 * (lo + hi);
  const double k = numeric_curvature(branch, x0, 1e-4);
  const auto h = harmonic_parameters(Well::m, c, mw, kDefaults.atom);
  EXPECT_NEAR(k, h.kappa_two_level, 1e-5 * h.kappa_two_level);
  EXPECT_NEAR(x.r2_um + x0, h.r_center_analytic_um, 1e-6);
}

TEST(Wells, NumericCurvature) {
  const double k0 = 3.7e9;
  auto quad = [&](double r) { return 0.5 * k0 * (r - 2.5) * (r - 2.5) + 11.0; };
  EXPECT_NEAR(numeric_curvature(quad, 2.5), k0, 1e-6 * k0);
  auto cap = [](double r) { return -r * r; };
  EXPECT_THROW(numeric_curvature(cap, 0.0), NumericalError);
}

TEST(Wells, AnalyticVersusNumericCurvature) {
  const auto& c = kDefaults.coeffs;
  const auto& mw = kDefaults.microwave;
  for (Well w : {Well::m, Well::u}) {
    const auto h = harmonic_parameters(w, c, mw, kDefaults.atom);
    const double k = numeric_curvature(well_curve(w), c, mw, h.r_center_um);
    const double ratio = k / h.kappa;
    EXPECT_GE(ratio, 0.5) << well_name(w);
    EXPECT_LE(ratio, 2.0) << well_name(w);
  }
}

TEST(Wells, PropagatesMissingCrossing) {
  MicrowaveDrive blue = kDefaults.microwave;
  blue.detuning = -blue.detuning;
  EXPECT_THROW(harmonic_parameters(Well::m, kDefaults.coeffs, blue, kDefaults.atom), NumericalError);
}
