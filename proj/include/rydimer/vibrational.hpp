#pragma once

// Relative-motion wavefunctions: the trapped ground-state pair (Gaussian of
// width Sigma = sqrt(2) sigma) and harmonic dimer states in a binding well.

#include "rydimer/params.hpp"

namespace rydimer {

struct TrapState {
  double nu = 0.0;         // single-atom trap frequency, rad/s
  double sigma_um = 0.0;   // sqrt(hbar / (M nu))
  double Sigma_um = 0.0;   // relative coordinate, sqrt(2) sigma
  double sigma_bar_um = 0.0;  // centre of mass, sigma / sqrt(2)
  double r0_um = 0.0;      // trap separation
};

TrapState trap_widths(double nu, const AtomSpecies& species, double r0_um = 0.0);

// Ground-state relative wavefunction (1/(pi Sigma^2))^(1/4) exp(-(R-R0)^2 / 2 Sigma^2).
double trap_relative_wavefunction(const TrapState& trap, double r_um);

inline constexpr int kMaxVibrationalLevel = 60;

struct DimerVibration {
  int n = 0;
  double r_m_um = 0.0;
  double Sigma_m_um = 0.0;
  double nu = 0.0;  // optional; only used for energy()

  double energy() const { return nu * (0.5 + n); }
};

// chi_m(R, n) = psi_n((R - R_m)/Sigma_m) / sqrt(Sigma_m), psi_n the
// normalized Hermite function. Evaluated by the stable three-term recurrence.
class DimerWavefunction {
 public:
  DimerWavefunction(int n, double r_m_um, double Sigma_m_um);
  explicit DimerWavefunction(const DimerVibration& v)
      : DimerWavefunction(v.n, v.r_m_um, v.Sigma_m_um) {}

  double operator()(double r_um) const;
  int n() const { return n_; }

 private:
  int n_;
  double r_m_;
  double width_;
};

DimerWavefunction dimer_wavefunction(int n, double r_m_um, double Sigma_m_um);

// f(n) = int_0^inf chi(R) chi_m(R, n) dR, adaptive Gauss-Kronrod on
// [max(0, R_m - 12 w), R_m + 12 w], w = max(Sigma, Sigma_m). Signed.
// Throws NumericalError when the error estimate exceeds 1e-8.
double franck_condon(int n, const TrapState& trap, const DimerVibration& dimer);

// Closed form of the n = 0 overlap, Gaussian tails below R = 0 included.
double franck_condon_ground(const TrapState& trap, double r_m_um, double Sigma_m_um);

}  // namespace rydimer
