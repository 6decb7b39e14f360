#pragma once

// Internal unit system:
//   frequencies and rates   angular frequency, rad/s
//   energies                hbar-scaled, i.e. angular frequency E/hbar
//   lengths                 micrometers
//   time                    seconds
// "2pi x MHz" style values only appear at the I/O boundary through the
// helpers below.

#include <numbers>

namespace rydimer::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hbar = 1.054571817e-34;            // J s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_radius = 5.29177210903e-11;    // m
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
// Infinite-mass Rydberg frequency c R_inf.
inline constexpr double rydberg_frequency_hz = 3.2898419602508e15;

inline constexpr double m_per_um = 1e-6;
inline constexpr double nm_per_um = 1e3;

constexpr double from_2pi_GHz(double v) { return two_pi * 1e9 * v; }
constexpr double from_2pi_MHz(double v) { return two_pi * 1e6 * v; }
constexpr double from_2pi_kHz(double v) { return two_pi * 1e3 * v; }
constexpr double to_2pi_GHz(double w) { return w / (two_pi * 1e9); }
constexpr double to_2pi_MHz(double w) { return w / (two_pi * 1e6); }
constexpr double to_2pi_kHz(double w) { return w / (two_pi * 1e3); }

// Plain rates (population decay quoted without the 2pi).
constexpr double from_kHz(double v) { return 1e3 * v; }
constexpr double to_kHz(double w) { return w / 1e3; }

constexpr double from_ns(double v) { return 1e-9 * v; }
constexpr double from_us(double v) { return 1e-6 * v; }
constexpr double to_ns(double t) { return t / 1e-9; }
constexpr double to_us(double t) { return t / 1e-6; }

constexpr double from_nm(double v) { return v / nm_per_um; }
constexpr double to_nm(double um) { return um * nm_per_um; }

}  // namespace rydimer::units
