#include "rydimer/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "rydimer/errors.hpp"
#include "rydimer/gate.hpp"
#include "rydimer/pair_potentials.hpp"
#include "rydimer/spectra.hpp"
#include "rydimer/units.hpp"
#include "rydimer/vibrational.hpp"
#include "rydimer/wells.hpp"

namespace rydimer::cli {

namespace {

using nlohmann::json;

struct GlobalOptions {
  std::string config;
  std::string output;
  int threads = 0;
  bool delta0 = false;
};

struct GridOptions {
  double dp_min = -50.0;
  double dp_max = 600.0;
  std::size_t dp_points = 321;
  double r_min = 2.0;
  double r_max = 5.0;
  std::size_t r_points = 121;
  double peak_mhz = 10.0;
  double flat_ns = 80.0;
  double edge_ns = 10.0;
  double dt_ns = 0.05;
};

struct Options {
  GlobalOptions global;
  std::string subcommand;
  // potentials
  double pot_r_min = 2.0;
  double pot_r_max = 5.0;
  std::size_t pot_points = 601;
  // spectrum / average
  GridOptions grid;
  std::string dim = "1d";
  double L_um = 5.0;
  // franck-condon
  int n_max = 10;
  double mismatch_nm = 0.0;
  double trap_khz = 100.0;
  // gate
  std::vector<double> gamma_khz{0.0, 10.0, 20.0, 50.0, 100.0};
  bool trace = false;
  bool leakage = false;
  bool find_resonance = false;
  bool refine_detuning = false;
  bool no_calibrate = false;
  double gate_dp_mhz = 159.3;
  double gate_flat_us = -1.0;
  int ladder_n_max = 20;
  // replay
  std::string manifest;
};

std::string csv_row(std::initializer_list<double> values) {
  std::string line;
  bool first = true;
  for (double v : values) {
    if (!first) line += ',';
    line += format_number(v);
    first = false;
  }
  line += '\n';
  return line;
}

ParameterSet resolve_params(const Options& o, const std::optional<ParameterSet>& override_params) {
  ParameterSet p = override_params ? *override_params
                   : o.global.config.empty() ? ParameterSet::paper_defaults()
                                             : parse_config(o.global.config);
  if (o.global.delta0) p.microwave.detuning = 0.0;
  p.validate();
  return p;
}

EvolveConfig integrator_for(const GridOptions& g) {
  EvolveConfig c;
  c.dt_max = units::from_ns(g.dt_ns);
  return c;
}

ScanConfig scan_config(const Options& o, const ParameterSet& p) {
  const GridOptions& g = o.grid;
  ScanConfig c;
  c.params = p;
  c.delta_p = linear_grid(units::from_2pi_MHz(g.dp_min), units::from_2pi_MHz(g.dp_max), g.dp_points);
  c.r_um = linear_grid(g.r_min, g.r_max, g.r_points);
  c.pulse.peak = units::from_2pi_MHz(g.peak_mhz);
  c.pulse.flat_duration = units::from_ns(g.flat_ns);
  c.pulse.edge_sigma = units::from_ns(g.edge_ns);
  c.integrator = integrator_for(g);
  return c;
}

std::string cmd_potentials(const Options& o, const ParameterSet& p) {
  const auto grid = linear_grid(o.pot_r_min, o.pot_r_max, o.pot_points);
  const DressedCurves c = dressed_curves(grid, p.coeffs, p.microwave);
  std::string s =
      "R_um,E_l_2pi_MHz,E_m_2pi_MHz,E_u_2pi_MHz,E_er_minus_2pi_MHz,E_ee_2pi_MHz,"
      "E_er_plus_2pi_MHz,E_rr_2pi_MHz\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s += csv_row({c.r_um[i], units::to_2pi_MHz(c.lower[i]), units::to_2pi_MHz(c.middle[i]),
                  units::to_2pi_MHz(c.upper[i]), units::to_2pi_MHz(c.er_minus[i]),
                  units::to_2pi_MHz(c.bare[i].ee), units::to_2pi_MHz(c.bare[i].er_plus),
                  units::to_2pi_MHz(c.bare[i].rr)});
  }
  return s;
}

std::string cmd_crossings(const ParameterSet& p) {
  const CrossingPoints x = crossing_points(p.coeffs, p.microwave);
  json j;
  j["R1_um"] = x.r1_um;
  j["R2_um"] = x.r2_um;
  j["R3_um"] = x.r3_um;
  j["E_c1_2pi_MHz"] = units::to_2pi_MHz(x.e_c1);
  j["E_c2_2pi_MHz"] = units::to_2pi_MHz(x.e_c2);
  j["E_c3_2pi_MHz"] = units::to_2pi_MHz(x.e_c3);
  j["Omega2_2pi_MHz"] = units::to_2pi_MHz(two_photon_rabi(p.coeffs, p.microwave));
  return j.dump(2) + "\n";
}

std::string cmd_wells(const ParameterSet& p) {
  json arr = json::array();
  for (Well w : {Well::m, Well::u}) {
    const HarmonicWell h = harmonic_parameters(w, p.coeffs, p.microwave, p.atom);
    const double k_num = numeric_curvature(well_curve(w), p.coeffs, p.microwave, h.r_center_um);
    json j;
    j["well"] = std::string(well_name(w));
    j["R_center_um"] = h.r_center_um;
    j["R_center_analytic_um"] = h.r_center_analytic_um;
    j["E_min_2pi_MHz"] = units::to_2pi_MHz(h.energy_min);
    j["kappa"] = h.kappa;
    j["kappa_2pi_MHz_per_um2"] = units::to_2pi_MHz(h.kappa);
    j["kappa_numeric_2pi_MHz_per_um2"] = units::to_2pi_MHz(k_num);
    j["nu_2pi_MHz"] = units::to_2pi_MHz(h.nu);
    j["sigma_nm"] = units::to_nm(h.sigma_um);
    j["analytic_vs_numeric_ratio"] = h.kappa / k_num;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string cmd_spectrum(const Options& o, const ParameterSet& p) {
  const SpectrumResult r = scan(scan_config(o, p));
  std::string s = "delta_p_2pi_MHz,R_um,P1,P2\n";
  for (std::size_t i = 0; i < r.delta_p.size(); ++i) {
    for (std::size_t j = 0; j < r.r_um.size(); ++j) {
      s += csv_row({units::to_2pi_MHz(r.delta_p[i]), r.r_um[j], r.p1(i, j), r.p2(i, j)});
    }
  }
  return s;
}

std::string cmd_average(const Options& o, const ParameterSet& p) {
  Volume v;
  if (o.dim == "1d") {
    v = Volume::line;
  } else if (o.dim == "2d") {
    v = Volume::disc;
  } else {
    throw ValidationError("--dim must be 1d or 2d");
  }
  const AveragedSpectrum a = average_spectrum(scan(scan_config(o, p)), o.L_um, v);
  std::string s = "delta_p_2pi_MHz,P1bar,P2bar\n";
  for (std::size_t i = 0; i < a.delta_p.size(); ++i) {
    s += csv_row({units::to_2pi_MHz(a.delta_p[i]), a.p1[i], a.p2[i]});
  }
  return s;
}

struct DimerGeometry {
  double r_m_um;
  double Sigma_m_um;
  double nu;
};

DimerGeometry m_well_geometry(const ParameterSet& p) {
  const HarmonicWell h = harmonic_parameters(Well::m, p.coeffs, p.microwave, p.atom);
  return {h.r_center_um, h.sigma_um, h.nu};
}

std::string cmd_franck_condon(const Options& o, const ParameterSet& p) {
  if (o.n_max < 0) throw ValidationError("--n-max must be >= 0");
  const DimerGeometry d = m_well_geometry(p);
  const TrapState trap =
      trap_widths(units::from_2pi_kHz(o.trap_khz), p.atom, d.r_m_um + units::from_nm(o.mismatch_nm));
  std::string s = "n,f_n\n";
  for (int n = 0; n <= o.n_max; ++n) {
    s += csv_row({static_cast<double>(n),
                  franck_condon(n, trap, DimerVibration{n, d.r_m_um, d.Sigma_m_um, d.nu})});
  }
  return s;
}

GateConfig gate_config(const Options& o, const ParameterSet& p) {
  GateConfig c = default_gate_config(p);
  c.probe_detuning = units::from_2pi_MHz(o.gate_dp_mhz);
  if (o.find_resonance) {
    const double half = units::from_2pi_MHz(10.0);
    c.probe_detuning = find_two_photon_resonance(c.r_um, p, c.probe_detuning - half,
                                                 c.probe_detuning + half);
  }
  if (o.gate_flat_us >= 0.0) {
    c.flat_duration = units::from_us(o.gate_flat_us);
  } else if (!o.no_calibrate) {
    CalibrationOptions opt;
    opt.refine_detuning = o.refine_detuning;
    c = calibrate_pulse(c, opt);
  }
  return c;
}

std::string cmd_gate(const Options& o, const ParameterSet& p) {
  if (o.gamma_khz.empty()) throw ValidationError("--gamma-2pi-kHz needs at least one value");
  for (double g : o.gamma_khz) {
    if (!(g >= 0.0)) throw ValidationError("--gamma-2pi-kHz values must be >= 0");
  }
  GateConfig c = gate_config(o, p);
  std::string s;
  if (o.leakage) {
    const DimerGeometry d = m_well_geometry(p);
    const TrapState trap =
        trap_widths(units::from_2pi_kHz(o.trap_khz), p.atom, d.r_m_um + units::from_nm(o.mismatch_nm));
    const PulseEnvelope pulse = c.pulse();
    const LadderModel ladder =
        make_ladder(trap, d.r_m_um, d.Sigma_m_um, d.nu, ladder_two_photon_peak(pulse),
                    units::from_2pi_kHz(o.gamma_khz.front()), o.ladder_n_max);
    const LeakageResult r = vibrational_leakage(ladder, pulse);
    if (r.truncation_warning) {
      std::cerr << "warning: population at n = N_max exceeds 1e-4; increase --ladder-n-max\n";
    }
    s = "n,population\n";
    for (std::size_t n = 1; n < r.populations.size(); ++n) {
      s += csv_row({static_cast<double>(n), r.populations[n]});
    }
    return s;
  }
  if (o.trace) {
    c.params.rates.dephasing_g = units::from_2pi_kHz(o.gamma_khz.front());
    const RabiTrace t = rabi_cycle_trace(c);
    s = "t_us,P_gg,P_2Ry\n";
    for (std::size_t k = 0; k < t.times.size(); ++k) {
      s += csv_row({units::to_us(t.times[k] - t.times.front()), t.p_gg[k], t.p_2ry[k]});
    }
    return s;
  }
  std::vector<double> gammas;
  for (double g : o.gamma_khz) gammas.push_back(units::from_2pi_kHz(g));
  const auto sweep = fidelity_sweep(c, gammas);
  s = "gamma_2pi_kHz,fidelity\n";
  for (const auto& pt : sweep) s += csv_row({units::to_2pi_kHz(pt.dephasing), pt.fidelity});
  return s;
}

void configure_threads(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("RYDIMER_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v <= 0) {
        throw ValidationError("RYDIMER_THREADS must be a positive integer");
      }
      n = static_cast<int>(v);
    }
  }
  if (n > 0) omp_set_num_threads(n);
}

// Arguments recorded in the manifest: everything except output and config.
std::vector<std::string> replayable_args(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "-o" || a == "--output" || a == "--config") {
      ++i;
      continue;
    }
    if (a.rfind("--output=", 0) == 0 || a.rfind("--config=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file '" + path + "'");
  f << content;
  if (!f) throw ValidationError("failed writing output file '" + path + "'");
}

void add_grid_options(CLI::App* sub, GridOptions& g) {
  sub->add_option("--dp-min-2pi-MHz", g.dp_min, "probe detuning grid start");
  sub->add_option("--dp-max-2pi-MHz", g.dp_max, "probe detuning grid end");
  sub->add_option("--dp-points", g.dp_points, "probe detuning grid points")->check(CLI::PositiveNumber);
  sub->add_option("--r-min-um", g.r_min, "distance grid start");
  sub->add_option("--r-max-um", g.r_max, "distance grid end");
  sub->add_option("--r-points", g.r_points, "distance grid points")->check(CLI::PositiveNumber);
  sub->add_option("--peak-2pi-MHz", g.peak_mhz, "probe peak Rabi frequency");
  sub->add_option("--flat-ns", g.flat_ns, "probe flat-top duration");
  sub->add_option("--edge-ns", g.edge_ns, "Gaussian edge sigma");
  sub->add_option("--dt-ns", g.dt_ns, "maximum integrator step");
}

std::string dispatch(const Options& o, const ParameterSet& p) {
  if (o.subcommand == "potentials") return cmd_potentials(o, p);
  if (o.subcommand == "crossings") return cmd_crossings(p);
  if (o.subcommand == "wells") return cmd_wells(p);
  if (o.subcommand == "spectrum") return cmd_spectrum(o, p);
  if (o.subcommand == "average") return cmd_average(o, p);
  if (o.subcommand == "franck-condon") return cmd_franck_condon(o, p);
  if (o.subcommand == "gate") return cmd_gate(o, p);
  throw ValidationError("unknown subcommand '" + o.subcommand + "'");
}

}  // namespace

ParameterSet parse_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open parameter file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ValidationError("empty parameter file '" + path +
                          "': required keys are atom, coeffs, microwave, rates");
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("parameter file '" + path + "' is not valid JSON: " + e.what());
  }
  return parameters_from_json(j);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::optional<ParameterSet>& override_params) {
  Options o;
  CLI::App app{"Microwave-dressed Rydberg pair potentials, spectra and gate simulation", "rydimer"};
  app.add_option("--config", o.global.config, "JSON parameter file (default: built-in paper values)");
  app.add_option("-o,--output", o.global.output, "output file (a manifest is written alongside)");
  app.add_option("--threads", o.global.threads, "worker threads (fallback: RYDIMER_THREADS)");
  app.add_flag("--delta0", o.global.delta0, "override the microwave detuning with 0");
  app.require_subcommand(1);

  auto* pot = app.add_subcommand("potentials", "dressed pair potential curves (CSV)");
  pot->add_option("--r-min-um", o.pot_r_min);
  pot->add_option("--r-max-um", o.pot_r_max);
  pot->add_option("--points", o.pot_points)->check(CLI::PositiveNumber);

  app.add_subcommand("crossings", "crossing radii and two-photon coupling (JSON)");
  app.add_subcommand("wells", "harmonic well parameters (JSON)");

  auto* spec = app.add_subcommand("spectrum", "P1/P2 over the (delta_p, R) grid (CSV)");
  add_grid_options(spec, o.grid);

  auto* avg = app.add_subcommand("average", "spectrum averaged over a 1-D or 2-D sample (CSV)");
  add_grid_options(avg, o.grid);
  avg->add_option("--dim", o.dim, "1d or 2d")->check(CLI::IsMember({"1d", "2d"}));
  avg->add_option("--L-um", o.L_um, "sample size");

  auto* fc = app.add_subcommand("franck-condon", "Franck-Condon factors f(n) (CSV)");
  fc->add_option("--n-max", o.n_max);
  fc->add_option("--mismatch-nm", o.mismatch_nm, "trap separation minus R_m");
  fc->add_option("--trap-2pi-kHz", o.trap_khz, "single-atom trap frequency");

  auto* gate = app.add_subcommand("gate", "CPHASE gate fidelity, Rabi trace or vibrational leakage (CSV)");
  gate->add_option("--gamma-2pi-kHz", o.gamma_khz, "dephasing rates")->delimiter(',');
  gate->add_flag("--trace", o.trace, "P_gg(t), P_2Ry(t) from |gg> for the first gamma");
  gate->add_flag("--leakage", o.leakage, "vibrational ladder populations for the first gamma");
  gate->add_flag("--find-resonance", o.find_resonance, "locate delta_p from the P2 maximum");
  gate->add_flag("--refine-detuning", o.refine_detuning, "optimize delta_p during calibration");
  gate->add_flag("--no-calibrate", o.no_calibrate, "use the nominal 0.9 us window");
  gate->add_option("--delta-p-2pi-MHz", o.gate_dp_mhz, "probe detuning");
  gate->add_option("--flat-us", o.gate_flat_us, "flat-top duration (skips calibration)");
  gate->add_option("--mismatch-nm", o.mismatch_nm, "trap separation minus R_m (leakage)");
  gate->add_option("--trap-2pi-kHz", o.trap_khz, "single-atom trap frequency (leakage)");
  gate->add_option("--ladder-n-max", o.ladder_n_max, "highest vibrational level (leakage)");

  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("manifest", o.manifest, "manifest JSON")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
  }
  o.subcommand = app.get_subcommands().front()->get_name();

  try {
    configure_threads(o.global.threads);

    if (o.subcommand == "replay") {
      std::ifstream f(o.manifest, std::ios::binary);
      if (!f) throw ValidationError("cannot open manifest '" + o.manifest + "'");
      json m;
      try {
        m = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ValidationError(std::string("manifest is not valid JSON: ") + e.what());
      }
      if (!m.contains("args") || !m.contains("parameters")) {
        throw ValidationError("manifest needs keys args and parameters");
      }
      auto recorded = m.at("args").get<std::vector<std::string>>();
      if (!o.global.output.empty()) {
        recorded.push_back("-o");
        recorded.push_back(o.global.output);
      }
      return run(recorded, out, err, parameters_from_json(m.at("parameters")));
    }

    const auto t0 = std::chrono::steady_clock::now();
    const ParameterSet p = resolve_params(o, override_params);
    const std::string content = dispatch(o, p);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (o.global.output.empty()) {
      out << content;
      return kExitOk;
    }
    write_file(o.global.output, content);
    const EvolveConfig integ = integrator_for(o.grid);
    json m;
    m["subcommand"] = o.subcommand;
    m["args"] = replayable_args(args);
    m["parameters"] = to_json(p);
    m["outputs"] = {o.global.output};
    m["wall_seconds"] = wall;
    m["integrator"] = {{"dt_max_ns", units::to_ns(integ.dt_max)},
                       {"max_phase_per_step", integ.max_phase_per_step},
                       {"trace_tolerance", integ.trace_tolerance}};
    write_file(o.global.output + ".manifest.json", m.dump(2) + "\n");
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace rydimer::cli
