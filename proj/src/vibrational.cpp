#include "rydimer/vibrational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rydimer/errors.hpp"
#include "rydimer/units.hpp"

namespace rydimer {

TrapState trap_widths(double nu, const AtomSpecies& species, double r0_um) {
  if (!(nu > 0.0)) throw ValidationError("trap frequency must be positive");
  species.validate();
  TrapState t;
  t.nu = nu;
  t.sigma_um = std::sqrt(units::hbar / (species.mass_kg * nu)) * 1e6;
  t.Sigma_um = std::sqrt(2.0) * t.sigma_um;
  t.sigma_bar_um = t.sigma_um / std::sqrt(2.0);
  t.r0_um = r0_um;
  return t;
}

double trap_relative_wavefunction(const TrapState& trap, double r_um) {
  const double s = trap.Sigma_um;
  const double x = (r_um - trap.r0_um) / s;
  return std::pow(std::numbers::pi * s * s, -0.25) * std::exp(-0.5 * x * x);
}

DimerWavefunction::DimerWavefunction(int n, double r_m_um, double Sigma_m_um)
    : n_(n), r_m_(r_m_um), width_(Sigma_m_um) {
  if (n < 0) throw ValidationError("vibrational quantum number must be >= 0");
  if (n > kMaxVibrationalLevel) {
    throw ValidationError("vibrational quantum number " + std::to_string(n) + " exceeds " +
                          std::to_string(kMaxVibrationalLevel));
  }
  if (!(Sigma_m_um > 0.0)) throw ValidationError("dimer width must be positive");
}

double DimerWavefunction::operator()(double r_um) const {
  const double x = (r_um - r_m_) / width_;
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n_; ++k) {
    const double next =
        std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur / std::sqrt(width_);
}

DimerWavefunction dimer_wavefunction(int n, double r_m_um, double Sigma_m_um) {
  return DimerWavefunction(n, r_m_um, Sigma_m_um);
}

double franck_condon(int n, const TrapState& trap, const DimerVibration& dimer) {
  if (!(trap.Sigma_um > 0.0)) throw ValidationError("trap width must be positive");
  const DimerWavefunction chi_m(n, dimer.r_m_um, dimer.Sigma_m_um);
  const double w = std::max(trap.Sigma_um, dimer.Sigma_m_um);
  const double lo = std::max(0.0, dimer.r_m_um - 12.0 * w);
  const double hi = dimer.r_m_um + 12.0 * w;
  auto integrand = [&](double r) { return trap_relative_wavefunction(trap, r) * chi_m(r); };
  double err = 0.0;
  const double f = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, lo, hi, 15, 1e-12, &err);
  if (!(err <= 1e-8)) throw NumericalError("Franck-Condon quadrature did not converge");
  return f;
}

double franck_condon_ground(const TrapState& trap, double r_m_um, double Sigma_m_um) {
  const double s2 = trap.Sigma_um * trap.Sigma_um + Sigma_m_um * Sigma_m_um;
  const double d = trap.r0_um - r_m_um;
  return std::sqrt(2.0 * trap.Sigma_um * Sigma_m_um / s2) * std::exp(-d * d / (2.0 * s2));
}

}  // namespace rydimer
