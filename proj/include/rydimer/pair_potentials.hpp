#pragma once

// Two-atom Rydberg pair energies in the frame rotating with the microwave.
//
// Bare (Omega -> 0) energies of |ee>, |er+->, |rr>:
//   E_ee  = C6_ee / R^6
//   E_er+- = -Delta +- C3_er / R^3 + C6_er / R^6
//   E_rr  = -2 Delta + C6_rr / R^6
// The microwave couples |ee> <-> |er+> <-> |rr> with -sqrt(2) Omega; |er-> is
// decoupled. Dressed curves E_l <= E_m <= E_u are the sorted eigenvalues of
// the resulting 3x3 block, basis order {|ee>, |er+>, |rr>}.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rydimer/params.hpp"

namespace rydimer {

struct BarePairEnergies {
  double ee = 0.0;
  double er_plus = 0.0;
  double er_minus = 0.0;
  double rr = 0.0;
};

BarePairEnergies bare_energies(double r_um, const InteractionCoefficients& coeffs,
                               const MicrowaveDrive& drive);

// Analytic R-derivatives of the bare energies (rad/s per um).
BarePairEnergies bare_energy_slopes(double r_um, const InteractionCoefficients& coeffs);

struct CrossingPoints {
  double r1_um = 0.0;  // E_ee = E_er+
  double r2_um = 0.0;  // E_ee = E_rr
  double r3_um = 0.0;  // E_rr = E_er+
  double e_c1 = 0.0;
  double e_c2 = 0.0;
  double e_c3 = 0.0;
};

// Closed-form crossings for red detuning (Delta < 0), C6_ee > 0 > C6_rr.
// Throws NumericalError when a crossing does not exist.
CrossingPoints crossing_points(const InteractionCoefficients& coeffs, const MicrowaveDrive& drive);

struct SymmetricEigen3 {
  std::array<double, 3> values{};  // ascending
  Eigen::Matrix3d vectors;         // column k belongs to values[k]
};

// Cyclic Jacobi rotations for a real symmetric 3x3 matrix.
SymmetricEigen3 symmetric_eigen3(const Eigen::Matrix3d& a);

Eigen::Matrix3d dressed_hamiltonian(double r_um, const InteractionCoefficients& coeffs,
                                    const MicrowaveDrive& drive);

enum class Curve { lower, middle, upper };

double dressed_energy(Curve curve, double r_um, const InteractionCoefficients& coeffs,
                      const MicrowaveDrive& drive);

struct DressedCurves {
  std::vector<double> r_um;
  std::vector<double> lower;
  std::vector<double> middle;
  std::vector<double> upper;
  std::vector<double> er_minus;
  std::vector<Eigen::Matrix3d> eigenvectors;
  std::vector<BarePairEnergies> bare;
};

// Grid points are independent and evaluated in parallel.
DressedCurves dressed_curves(std::span<const double> r_grid, const InteractionCoefficients& coeffs,
                             const MicrowaveDrive& drive);

std::vector<double> linear_grid(double lo, double hi, std::size_t points);

struct WellPoint {
  double r_um = 0.0;
  double energy = 0.0;
};

// Stationary point of E_er- at R_- = (2 C6_er / C3_er)^(1/3).
WellPoint antisymmetric_well(const InteractionCoefficients& coeffs);

// Local minimum of a dressed curve inside [r_lo, r_hi] (Brent, |dR| <= 1e-5 um).
// Throws NumericalError if the minimum sits on the bracket edge.
WellPoint find_well_minimum(Curve curve, const InteractionCoefficients& coeffs,
                            const MicrowaveDrive& drive, double r_lo, double r_hi);

}  // namespace rydimer
