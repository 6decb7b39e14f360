#include "rydimer/params.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rydimer/errors.hpp"
#include "rydimer/units.hpp"

namespace rydimer {

namespace {

// (e a0)^2 / (4 pi eps0) expressed as hbar-scaled rad/s um^3.
double dipole_unit_c3() {
  const double ea0 = units::elementary_charge * units::bohr_radius;
  const double joule_m3 = ea0 * ea0 / (4.0 * std::numbers::pi * units::vacuum_permittivity);
  return joule_m3 / units::hbar * 1e18;
}

}  // namespace

AtomSpecies AtomSpecies::rubidium87(int n) {
  AtomSpecies s;
  s.mass_kg = 1.443160648e-25;
  s.n = n;
  s.quantum_defect_s = 3.13109;
  s.quantum_defect_p = 2.65145;
  s.omega_rr_prime = units::from_2pi_MHz(14440.0);
  return s;
}

void AtomSpecies::validate() const {
  if (!(mass_kg > 0.0)) throw ValidationError("atom.mass_kg must be positive");
  if (!(n > quantum_defect_s) || !(n > quantum_defect_p)) {
    throw ValidationError("atom.n must exceed both quantum defects");
  }
}

double effective_principal(int n, double defect) {
  if (!(n > defect)) {
    std::ostringstream os;
    os << "effective principal number requires n > delta (n = " << n << ", delta = " << defect
       << ")";
    throw ValidationError(os.str());
  }
  return static_cast<double>(n) - defect;
}

double transition_frequency(const AtomSpecies& species) {
  const double ns = effective_principal(species.n, species.quantum_defect_s);
  const double np = effective_principal(species.n, species.quantum_defect_p);
  return units::two_pi * units::rydberg_frequency_hz * (1.0 / (ns * ns) - 1.0 / (np * np));
}

double c3_angular_factor(double theta) {
  const double s = std::sin(theta);
  return 3.0 * s * s - 2.0;
}

double c6_rr_angular_factor(double theta) {
  const double s = std::sin(theta);
  return s * s;
}

InteractionCoefficients scale_coefficients(const InteractionCoefficients& reference,
                                           double theta) {
  InteractionCoefficients out = reference;
  out.c3_er = reference.c3_er * c3_angular_factor(theta);
  out.c6_rr = reference.c6_rr * c6_rr_angular_factor(theta);
  out.theta = theta;
  return out;
}

EffectiveVdW effective_c6_er(std::span<const double> cross_c3, double omega_rr_prime) {
  if (omega_rr_prime == 0.0) {
    throw ValidationError("effective C6_er: omega_rr' = 0 (degenerate |r'> manifold)");
  }
  EffectiveVdW out;
  for (double c3 : cross_c3) {
    out.c6_er += c3 * c3 / omega_rr_prime;
    out.validity_radius_um =
        std::max(out.validity_radius_um, std::cbrt(std::abs(c3) / std::abs(omega_rr_prime)));
  }
  return out;
}

double semiclassical_c3_er(const AtomSpecies& species, double theta) {
  const double ns = effective_principal(species.n, species.quantum_defect_s);
  // 3 (3 sin^2 - 2) / (32 pi eps0) n*^4 = (3/8) (3 sin^2 - 2) n*^4 / (4 pi eps0)
  return 3.0 / 8.0 * c3_angular_factor(theta) * std::pow(ns, 4) * dipole_unit_c3();
}

CrossChannelC3 semiclassical_cross_c3(const AtomSpecies& species, double theta) {
  const double ns = effective_principal(species.n, species.quantum_defect_s);
  const double base = std::pow(ns, 4) * dipole_unit_c3();
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  CrossChannelC3 out;
  out.to_r_minus = 3.0 * std::sqrt(3.0) / 8.0 * s * s * base;
  out.to_r_plus = 3.0 * std::sqrt(3.0) / 4.0 * s * c * base;
  return out;
}

void MicrowaveDrive::validate() const {
  if (!(rabi >= 0.0)) throw ValidationError("microwave.omega_2pi_MHz must be >= 0");
  if (!std::isfinite(detuning)) throw ValidationError("microwave.delta_2pi_MHz must be finite");
}

void RelaxationRates::validate() const {
  if (!(decay_e >= 0.0)) throw ValidationError("rates.gamma_e_kHz must be >= 0");
  if (!(decay_r >= 0.0)) throw ValidationError("rates.gamma_r_kHz must be >= 0");
  if (!(dephasing_g >= 0.0)) throw ValidationError("rates.gamma_g_2pi_kHz must be >= 0");
}

ParameterSet ParameterSet::paper_defaults() {
  ParameterSet p;
  p.atom = AtomSpecies::rubidium87(60);
  p.coeffs.c6_ee = units::from_2pi_GHz(140.0);
  p.coeffs.c6_rr = units::from_2pi_GHz(-295.0);
  p.coeffs.c6_er = units::from_2pi_GHz(3.0);
  p.coeffs.c3_er = units::from_2pi_GHz(3.8);
  p.coeffs.theta = std::numbers::pi / 2.0;
  p.microwave.rabi = units::from_2pi_MHz(100.0);
  p.microwave.detuning = -5.0 * p.microwave.rabi;
  p.rates.decay_e = units::from_kHz(5.0);
  p.rates.decay_r = units::from_kHz(5.0);
  p.rates.dephasing_g = units::from_2pi_kHz(100.0);
  return p;
}

void ParameterSet::validate() const {
  atom.validate();
  microwave.validate();
  rates.validate();
}

nlohmann::json to_json(const ParameterSet& p) {
  using nlohmann::json;
  json j;
  j["atom"] = {{"mass_kg", p.atom.mass_kg},
               {"n", p.atom.n},
               {"delta_s", p.atom.quantum_defect_s},
               {"delta_p", p.atom.quantum_defect_p},
               {"omega_rr_prime_2pi_MHz", units::to_2pi_MHz(p.atom.omega_rr_prime)}};
  j["coeffs"] = {{"c6_ee_2pi_GHz_um6", units::to_2pi_GHz(p.coeffs.c6_ee)},
                 {"c6_rr_2pi_GHz_um6", units::to_2pi_GHz(p.coeffs.c6_rr)},
                 {"c6_er_2pi_GHz_um6", units::to_2pi_GHz(p.coeffs.c6_er)},
                 {"c3_er_2pi_GHz_um3", units::to_2pi_GHz(p.coeffs.c3_er)},
                 {"theta_rad", p.coeffs.theta}};
  j["microwave"] = {{"omega_2pi_MHz", units::to_2pi_MHz(p.microwave.rabi)},
                    {"delta_2pi_MHz", units::to_2pi_MHz(p.microwave.detuning)}};
  j["rates"] = {{"gamma_e_kHz", units::to_kHz(p.rates.decay_e)},
                {"gamma_r_kHz", units::to_kHz(p.rates.decay_r)},
                {"gamma_g_2pi_kHz", units::to_2pi_kHz(p.rates.dephasing_g)}};
  return j;
}

namespace {

const std::vector<std::string>& section_names() {
  static const std::vector<std::string> names = {"atom", "coeffs", "microwave", "rates"};
  return names;
}

// Reads the keys of one section; rejects unknown keys and non-numeric values.
class SectionReader {
 public:
  SectionReader(const nlohmann::json& root, const std::string& name) : name_(name) {
    const auto& sec = root.at(name);
    if (!sec.is_object()) throw ValidationError("section '" + name + "' must be an object");
    section_ = &sec;
  }

  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    auto it = section_->find(key);
    if (it == section_->end()) return fallback;
    if (!it->is_number()) {
      throw ValidationError("key '" + name_ + "." + key + "' must be a number");
    }
    return it->get<double>();
  }

  int integer(const std::string& key, int fallback) {
    seen_.insert(key);
    auto it = section_->find(key);
    if (it == section_->end()) return fallback;
    if (!it->is_number_integer()) {
      throw ValidationError("key '" + name_ + "." + key + "' must be an integer");
    }
    return it->get<int>();
  }

  void reject_unknown() const {
    for (const auto& item : section_->items()) {
      if (!seen_.contains(item.key())) {
        throw ValidationError("unknown key '" + name_ + "." + item.key() + "'");
      }
    }
  }

 private:
  std::string name_;
  const nlohmann::json* section_ = nullptr;
  std::set<std::string> seen_;
};

}  // namespace

ParameterSet parameters_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ValidationError("parameter file must be a JSON object with keys atom, coeffs, microwave, rates");
  }
  std::vector<std::string> missing;
  for (const auto& name : section_names()) {
    if (!j.contains(name)) missing.push_back(name);
  }
  if (!missing.empty()) {
    std::string msg = "missing required key(s):";
    for (const auto& m : missing) msg += " " + m;
    throw ValidationError(msg);
  }
  for (const auto& item : j.items()) {
    const auto& names = section_names();
    if (std::find(names.begin(), names.end(), item.key()) == names.end()) {
      throw ValidationError("unknown key '" + item.key() + "'");
    }
  }

  const ParameterSet d = ParameterSet::paper_defaults();
  ParameterSet p;

  SectionReader atom(j, "atom");
  p.atom.mass_kg = atom.number("mass_kg", d.atom.mass_kg);
  p.atom.n = atom.integer("n", d.atom.n);
  p.atom.quantum_defect_s = atom.number("delta_s", d.atom.quantum_defect_s);
  p.atom.quantum_defect_p = atom.number("delta_p", d.atom.quantum_defect_p);
  p.atom.omega_rr_prime = units::from_2pi_MHz(
      atom.number("omega_rr_prime_2pi_MHz", units::to_2pi_MHz(d.atom.omega_rr_prime)));
  atom.reject_unknown();

  SectionReader coeffs(j, "coeffs");
  p.coeffs.c6_ee =
      units::from_2pi_GHz(coeffs.number("c6_ee_2pi_GHz_um6", units::to_2pi_GHz(d.coeffs.c6_ee)));
  p.coeffs.c6_rr =
      units::from_2pi_GHz(coeffs.number("c6_rr_2pi_GHz_um6", units::to_2pi_GHz(d.coeffs.c6_rr)));
  p.coeffs.c6_er =
      units::from_2pi_GHz(coeffs.number("c6_er_2pi_GHz_um6", units::to_2pi_GHz(d.coeffs.c6_er)));
  p.coeffs.c3_er =
      units::from_2pi_GHz(coeffs.number("c3_er_2pi_GHz_um3", units::to_2pi_GHz(d.coeffs.c3_er)));
  p.coeffs.theta = coeffs.number("theta_rad", d.coeffs.theta);
  coeffs.reject_unknown();

  SectionReader mw(j, "microwave");
  p.microwave.rabi =
      units::from_2pi_MHz(mw.number("omega_2pi_MHz", units::to_2pi_MHz(d.microwave.rabi)));
  p.microwave.detuning =
      units::from_2pi_MHz(mw.number("delta_2pi_MHz", units::to_2pi_MHz(d.microwave.detuning)));
  mw.reject_unknown();

  SectionReader rates(j, "rates");
  p.rates.decay_e = units::from_kHz(rates.number("gamma_e_kHz", units::to_kHz(d.rates.decay_e)));
  p.rates.decay_r = units::from_kHz(rates.number("gamma_r_kHz", units::to_kHz(d.rates.decay_r)));
  p.rates.dephasing_g = units::from_2pi_kHz(
      rates.number("gamma_g_2pi_kHz", units::to_2pi_kHz(d.rates.dephasing_g)));
  rates.reject_unknown();

  p.validate();
  return p;
}

}  // namespace rydimer
