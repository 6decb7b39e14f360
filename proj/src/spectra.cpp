#include "rydimer/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "rydimer/errors.hpp"
#include "rydimer/units.hpp"

namespace rydimer {

namespace {

void require_increasing(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw ValidationError(std::string(name) + " grid is empty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw ValidationError(std::string(name) + " grid must be strictly increasing");
  }
}

SpectrumResult empty_result(const ScanConfig& c) {
  SpectrumResult r;
  r.delta_p = c.delta_p;
  r.r_um = c.r_um;
  r.p1 = Eigen::MatrixXd::Zero(c.delta_p.size(), c.r_um.size());
  r.p2 = Eigen::MatrixXd::Zero(c.delta_p.size(), c.r_um.size());
  return r;
}

void fill_point(const ScanConfig& c, SpectrumResult& out, std::ptrdiff_t flat) {
  const std::ptrdiff_t nr = static_cast<std::ptrdiff_t>(c.r_um.size());
  const std::ptrdiff_t i = flat / nr;
  const std::ptrdiff_t j = flat % nr;
  try {
    const auto p = simulate_point(c.params, c.r_um[j], c.delta_p[i], c.pulse, c.integrator);
    out.p1(i, j) = p.p1;
    out.p2(i, j) = p.p2;
  } catch (const NumericalError& e) {
    std::ostringstream os;
    os << e.what() << " (delta_p = 2pi x " << units::to_2pi_MHz(c.delta_p[i])
       << " MHz, R = " << c.r_um[j] << " um)";
    throw NumericalError(os.str());
  }
}

}  // namespace

ExcitationProbabilities excitation_probabilities(const Operator& rho, const LevelScheme& scheme) {
  const int d = scheme.atom_dim();
  if (rho.rows() != scheme.pair_dim() || rho.cols() != scheme.pair_dim()) {
    throw ValidationError("density operator dimension does not match the two-atom scheme");
  }
  const int g = scheme.index(Level::g);
  const int e = scheme.index(Level::e);
  const int r = scheme.index(Level::r);
  auto pop = [&](int a, int b) { return rho(a * d + b, a * d + b).real(); };
  ExcitationProbabilities p;
  for (int x : {e, r}) {
    p.p1 += pop(x, g) + pop(g, x);
    for (int y : {e, r}) p.p2 += pop(x, y);
  }
  return p;
}

std::pair<double, double> autler_townes(const MicrowaveDrive& mw) {
  const double root = std::sqrt(0.25 * mw.detuning * mw.detuning + mw.rabi * mw.rabi);
  return {-0.5 * mw.detuning - root, -0.5 * mw.detuning + root};
}

PulseEnvelope default_spectrum_pulse() {
  PulseEnvelope p;
  p.peak = units::from_2pi_MHz(10.0);
  p.flat_duration = 80e-9;
  p.edge_sigma = 10e-9;
  return p;
}

void ScanConfig::validate() const {
  require_increasing(delta_p, "delta_p");
  require_increasing(r_um, "R");
  for (double r : r_um) {
    if (!(r > 0.0)) throw ValidationError("R grid values must be positive");
  }
  pulse.validate();
  params.validate();
}

ExcitationProbabilities simulate_point(const ParameterSet& params, double r_um, double delta_p,
                                       const PulseEnvelope& pulse,
                                       const EvolveConfig& integrator) {
  const LevelScheme scheme = LevelScheme::three_level();
  const LindbladModel model = make_pair_model(scheme, r_um, params, delta_p, pulse);
  const Operator rho0 =
      from_pure(basis_state(scheme.pair_dim(), scheme.pair_index(Level::g, Level::g)));
  const Operator rho = evolve_final(rho0, model, pulse.start, pulse.end(), integrator);
  return excitation_probabilities(rho, scheme);
}

double single_atom_rydberg_population(const ParameterSet& params, double delta_p,
                                      const PulseEnvelope& pulse,
                                      const EvolveConfig& integrator) {
  const LevelScheme scheme = LevelScheme::three_level();
  const LindbladModel model = make_atom_model(scheme, params, delta_p, pulse);
  const Operator rho0 = from_pure(basis_state(scheme.atom_dim(), scheme.index(Level::g)));
  const Operator rho = evolve_final(rho0, model, pulse.start, pulse.end(), integrator);
  return rho(scheme.index(Level::e), scheme.index(Level::e)).real() +
         rho(scheme.index(Level::r), scheme.index(Level::r)).real();
}

SpectrumResult scan(const ScanConfig& config) {
  config.validate();
  SpectrumResult out = empty_result(config);
  const std::ptrdiff_t total =
      static_cast<std::ptrdiff_t>(config.delta_p.size() * config.r_um.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    try {
      fill_point(config, out, k);
    } catch (...) {
#pragma omp critical(rydimer_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

SpectrumResult scan_serial(const ScanConfig& config) {
  config.validate();
  SpectrumResult out = empty_result(config);
  const std::ptrdiff_t total =
      static_cast<std::ptrdiff_t>(config.delta_p.size() * config.r_um.size());
  for (std::ptrdiff_t k = 0; k < total; ++k) fill_point(config, out, k);
  return out;
}

double pair_distance_density(Volume volume, double L, double r) {
  if (!(L > 0.0)) throw ValidationError("sample size L must be positive");
  if (r < 0.0 || r > L) return 0.0;
  if (volume == Volume::line) return 2.0 * (L - r) / (L * L);
  const double x = r / L;
  return 8.0 * r / (std::numbers::pi * L * L) *
         (2.0 * std::acos(x) - 2.0 * x * std::sqrt(std::max(0.0, 1.0 - x * x)));
}

double spatial_average(std::span<const double> r, std::span<const double> v, double L,
                       Volume volume, std::size_t n) {
  if (!(L > 0.0)) throw ValidationError("sample size L must be positive");
  if (r.empty() || r.size() != v.size()) throw ValidationError("P(R) samples malformed");
  if (n < 2) throw ValidationError("need at least two quadrature points");
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw ValidationError("R samples must be strictly increasing");
  }
  auto interp = [&](double x) {
    if (x <= r.front()) return v.front();
    if (x >= r.back()) return v.back();
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - r.begin());
    const double w = (x - r[k - 1]) / (r[k] - r[k - 1]);
    return (1.0 - w) * v[k - 1] + w * v[k];
  };
  const double h = L / static_cast<double>(n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = h * static_cast<double>(i);
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += w * interp(x) * pair_distance_density(volume, L, x);
  }
  return sum * h;
}

AveragedSpectrum average_spectrum(const SpectrumResult& s, double L, Volume volume) {
  AveragedSpectrum out;
  out.delta_p = s.delta_p;
  out.p1.resize(s.delta_p.size());
  out.p2.resize(s.delta_p.size());
  std::vector<double> row(s.r_um.size());
  for (std::size_t i = 0; i < s.delta_p.size(); ++i) {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = s.p1(i, j);
    out.p1[i] = spatial_average(s.r_um, row, L, volume);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = s.p2(i, j);
    out.p2[i] = spatial_average(s.r_um, row, L, volume);
  }
  return out;
}

double find_two_photon_resonance(double r_um, const ParameterSet& params, double lo, double hi,
                                 const PulseEnvelope& pulse, const EvolveConfig& integrator) {
  if (!(hi > lo)) throw ValidationError("resonance search band must have hi > lo");
  auto p2 = [&](double dp) { return simulate_point(params, r_um, dp, pulse, integrator).p2; };
  constexpr int kCoarse = 11;
  const std::vector<double> grid = [&] {
    std::vector<double> g(kCoarse);
    for (int k = 0; k < kCoarse; ++k) g[k] = lo + (hi - lo) * k / (kCoarse - 1);
    return g;
  }();
  std::vector<double> values(kCoarse);
  for (int k = 0; k < kCoarse; ++k) values[k] = p2(grid[k]);
  const int best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
  const double a = grid[std::max(0, best - 1)];
  const double b = grid[std::min(kCoarse - 1, best + 1)];
  const auto [x, fx] =
      boost::math::tools::brent_find_minima([&](double dp) { return -p2(dp); }, a, b, 24);
  (void)fx;
  const double edge = 1e-3 * (hi - lo);
  if (x - lo < edge || hi - x < edge) {
    throw NumericalError("two-photon resonance sits on the search band boundary");
  }
  return x;
}

}  // namespace rydimer
