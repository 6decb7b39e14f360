#pragma once

// Rydberg excitation spectra of an atom pair driven by a probe pulse, and
// their average over the pair-distance distribution of a 1-D or 2-D sample.

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rydimer/master_eq.hpp"
#include "rydimer/params.hpp"

namespace rydimer {

struct ExcitationProbabilities {
  double p1 = 0.0;  // exactly one atom in e or r, the other in g
  double p2 = 0.0;  // both atoms in e or r
};

ExcitationProbabilities excitation_probabilities(const Operator& rho, const LevelScheme& scheme);

// Single-atom probe resonances lambda_-+ = -Delta/2 -+ sqrt(Delta^2/4 + Omega^2).
std::pair<double, double> autler_townes(const MicrowaveDrive& mw);

// Probe pulse of the spectra: peak 2pi x 10 MHz, 80 ns flat top, 10 ns edges.
PulseEnvelope default_spectrum_pulse();

struct ScanConfig {
  std::vector<double> delta_p;  // rad/s, strictly increasing
  std::vector<double> r_um;     // strictly increasing
  PulseEnvelope pulse = default_spectrum_pulse();
  ParameterSet params = ParameterSet::paper_defaults();
  EvolveConfig integrator;

  void validate() const;
};

struct SpectrumResult {
  std::vector<double> delta_p;
  std::vector<double> r_um;
  Eigen::MatrixXd p1;  // rows: delta_p, columns: r
  Eigen::MatrixXd p2;
};

// One grid point: evolve |gg> across the pulse window, read out at the end.
ExcitationProbabilities simulate_point(const ParameterSet& params, double r_um, double delta_p,
                                       const PulseEnvelope& pulse,
                                       const EvolveConfig& integrator = {});

// rho_ee + rho_rr of a lone atom after the same pulse.
double single_atom_rydberg_population(const ParameterSet& params, double delta_p,
                                      const PulseEnvelope& pulse,
                                      const EvolveConfig& integrator = {});

// OpenMP map over grid points; scan_serial is the reference loop.
SpectrumResult scan(const ScanConfig& config);
SpectrumResult scan_serial(const ScanConfig& config);

enum class Volume { line, disc };

// Distance distribution of two points uniform on a segment of length L
// (2(L - R)/L^2) or a disc of diameter L.
double pair_distance_density(Volume volume, double L_um, double r_um);

// int_0^L P(R) rho(R) dR with P linearly interpolated from the samples and
// held at its boundary values outside the sampled range.
double spatial_average(std::span<const double> r_um, std::span<const double> values, double L_um,
                       Volume volume, std::size_t quadrature_points = 20001);

struct AveragedSpectrum {
  std::vector<double> delta_p;
  std::vector<double> p1;
  std::vector<double> p2;
};
AveragedSpectrum average_spectrum(const SpectrumResult& spectrum, double L_um, Volume volume);

// Delta_p in [lo, hi] maximizing the final P2 at fixed R: a coarse scan
// followed by Brent refinement. Throws NumericalError for a boundary maximum.
double find_two_photon_resonance(double r_um, const ParameterSet& params, double lo, double hi,
                                 const PulseEnvelope& pulse = default_spectrum_pulse(),
                                 const EvolveConfig& integrator = {});

}  // namespace rydimer
