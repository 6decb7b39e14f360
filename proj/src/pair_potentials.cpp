#include "rydimer/pair_potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/minima.hpp>

#include "rydimer/errors.hpp"

namespace rydimer {

namespace {

void require_positive_separation(double r_um) {
  if (!(r_um > 0.0)) throw ValidationError("interatomic distance R must be positive");
}

}  // namespace

BarePairEnergies bare_energies(double r_um, const InteractionCoefficients& c,
                               const MicrowaveDrive& drive) {
  require_positive_separation(r_um);
  const double r3 = r_um * r_um * r_um;
  const double r6 = r3 * r3;
  BarePairEnergies e;
  e.ee = c.c6_ee / r6;
  e.er_plus = -drive.detuning + c.c3_er / r3 + c.c6_er / r6;
  e.er_minus = -drive.detuning - c.c3_er / r3 + c.c6_er / r6;
  e.rr = -2.0 * drive.detuning + c.c6_rr / r6;
  return e;
}

BarePairEnergies bare_energy_slopes(double r_um, const InteractionCoefficients& c) {
  require_positive_separation(r_um);
  const double r4 = std::pow(r_um, 4);
  const double r7 = std::pow(r_um, 7);
  BarePairEnergies d;
  d.ee = -6.0 * c.c6_ee / r7;
  d.er_plus = -3.0 * c.c3_er / r4 - 6.0 * c.c6_er / r7;
  d.er_minus = 3.0 * c.c3_er / r4 - 6.0 * c.c6_er / r7;
  d.rr = -6.0 * c.c6_rr / r7;
  return d;
}

CrossingPoints crossing_points(const InteractionCoefficients& c, const MicrowaveDrive& drive) {
  if (!(drive.detuning < 0.0)) {
    throw NumericalError("no crossing: closed forms require red microwave detuning (Delta < 0)");
  }
  if (!(c.c6_ee > 0.0) || !(c.c6_rr < 0.0)) {
    throw NumericalError("no crossing: closed forms require C6_ee > 0 > C6_rr");
  }
  const double ad = std::abs(drive.detuning);
  const double half = c.c3_er / (2.0 * ad);
  CrossingPoints x;

  const double rad1 = half * half + (c.c6_ee - c.c6_er) / ad;
  if (rad1 < 0.0) throw NumericalError("no crossing: E_ee and E_er+ never meet (R1)");
  const double cube1 = std::sqrt(rad1) - half;
  if (!(cube1 > 0.0)) throw NumericalError("no crossing: E_ee and E_er+ never meet (R1)");
  x.r1_um = std::cbrt(cube1);
  const double den1 = std::sqrt(c.c3_er * c.c3_er + 4.0 * ad * (c.c6_ee - c.c6_er)) - c.c3_er;
  x.e_c1 = 4.0 * drive.detuning * drive.detuning * c.c6_ee / (den1 * den1);

  x.r2_um = std::pow((c.c6_ee - c.c6_rr) / (2.0 * ad), 1.0 / 6.0);
  x.e_c2 = 2.0 * ad * c.c6_ee / (c.c6_ee - c.c6_rr);

  const double rad3 = half * half + (c.c6_er - c.c6_rr) / ad;
  if (rad3 < 0.0) throw NumericalError("no crossing: E_rr and E_er+ never meet (R3)");
  const double cube3 = std::sqrt(rad3) + half;
  if (!(cube3 > 0.0)) throw NumericalError("no crossing: E_rr and E_er+ never meet (R3)");
  x.r3_um = std::cbrt(cube3);
  const double den3 = std::sqrt(c.c3_er * c.c3_er + 4.0 * ad * (c.c6_er - c.c6_rr)) + c.c3_er;
  x.e_c3 = -2.0 * drive.detuning + 4.0 * drive.detuning * drive.detuning * c.c6_rr / (den3 * den3);
  return x;
}

SymmetricEigen3 symmetric_eigen3(const Eigen::Matrix3d& input) {
  Eigen::Matrix3d a = 0.5 * (input + input.transpose());
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());

  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = std::hypot(a(0, 1), std::hypot(a(0, 2), a(1, 2)));
    if (off <= 1e-16 * scale) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a(p, q) == 0.0) continue;
        // Rotation angle zeroing a(p, q); t = tan(phi) chosen with |phi| <= pi/4.
        const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        for (int k = 0; k < 3; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = cs * akp - sn * akq;
          a(k, q) = sn * akp + cs * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = cs * apk - sn * aqk;
          a(q, k) = sn * apk + cs * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = cs * vkp - sn * vkq;
          v(k, q) = sn * vkp + cs * vkq;
        }
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  SymmetricEigen3 out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

Eigen::Matrix3d dressed_hamiltonian(double r_um, const InteractionCoefficients& coeffs,
                                    const MicrowaveDrive& drive) {
  const BarePairEnergies e = bare_energies(r_um, coeffs, drive);
  const double w = -std::sqrt(2.0) * drive.rabi;
  Eigen::Matrix3d h;
  h << e.ee, w, 0.0,
       w, e.er_plus, w,
       0.0, w, e.rr;
  return h;
}

double dressed_energy(Curve curve, double r_um, const InteractionCoefficients& coeffs,
                      const MicrowaveDrive& drive) {
  const auto eig = symmetric_eigen3(dressed_hamiltonian(r_um, coeffs, drive));
  return eig.values[static_cast<int>(curve)];
}

DressedCurves dressed_curves(std::span<const double> r_grid, const InteractionCoefficients& coeffs,
                             const MicrowaveDrive& drive) {
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    require_positive_separation(r_grid[i]);
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
      throw ValidationError("R grid must be strictly increasing");
    }
  }
  const std::size_t n = r_grid.size();
  DressedCurves out;
  out.r_um.assign(r_grid.begin(), r_grid.end());
  out.lower.resize(n);
  out.middle.resize(n);
  out.upper.resize(n);
  out.er_minus.resize(n);
  out.eigenvectors.resize(n);
  out.bare.resize(n);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto eig = symmetric_eigen3(dressed_hamiltonian(r_grid[i], coeffs, drive));
    out.lower[i] = eig.values[0];
    out.middle[i] = eig.values[1];
    out.upper[i] = eig.values[2];
    out.eigenvectors[i] = eig.vectors;
    out.bare[i] = bare_energies(r_grid[i], coeffs, drive);
    out.er_minus[i] = out.bare[i].er_minus;
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw ValidationError("grid needs at least one point");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

WellPoint antisymmetric_well(const InteractionCoefficients& c) {
  if (!(c.c3_er > 0.0) || !(c.c6_er > 0.0)) {
    throw NumericalError("no well: E_er- needs C3_er > 0 and C6_er > 0");
  }
  WellPoint w;
  w.r_um = std::cbrt(2.0 * c.c6_er / c.c3_er);
  const double r3 = w.r_um * w.r_um * w.r_um;
  // Energy relative to the asymptote -Delta.
  w.energy = -c.c3_er / r3 + c.c6_er / (r3 * r3);
  return w;
}

WellPoint find_well_minimum(Curve curve, const InteractionCoefficients& coeffs,
                            const MicrowaveDrive& drive, double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw ValidationError("invalid well bracket");
  auto f = [&](double r) { return dressed_energy(curve, r, coeffs, drive); };
  const auto [r_min, e_min] = boost::math::tools::brent_find_minima(f, r_lo, r_hi, 40);
  const double edge = 1e-4 * (r_hi - r_lo);
  if (r_min - r_lo < edge || r_hi - r_min < edge) {
    throw NumericalError("no interior minimum in the supplied bracket");
  }
  return {r_min, e_min};
}

}  // namespace rydimer
