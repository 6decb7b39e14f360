#include "rydimer/master_eq.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "rydimer/errors.hpp"

namespace rydimer {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

struct Entry {
  int row;
  int col;
  cd value;
};
using SparseOp = std::vector<Entry>;

SparseOp to_sparse(const Operator& op) {
  SparseOp out;
  for (int j = 0; j < op.cols(); ++j) {
    for (int i = 0; i < op.rows(); ++i) {
      if (op(i, j) != cd{0.0, 0.0}) out.push_back({i, j, op(i, j)});
    }
  }
  return out;
}

void require_square_same(const Operator& a, const Operator& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw ValidationError(std::string("dimension mismatch: ") + what);
  }
}

// drho/dt = G rho + (G rho)^dag + sum_k L_k rho L_k^dag, G = -iH - K/2.
class RhsKernel {
 public:
  explicit RhsKernel(const LindbladModel& m) : model_(m) {
    const int d = m.dim();
    Operator k = Operator::Zero(d, d);
    for (const auto& l : m.jumps) {
      k.noalias() += l.adjoint() * l;
      SparseOp s = to_sparse(l);
      if (!s.empty()) jumps_.push_back(std::move(s));
    }
    g_static_ = -kI * m.h_static - 0.5 * k;
    g_probe_ = -kI * m.h_probe;
    g_ = Operator::Zero(d, d);
    tmp_ = Operator::Zero(d, d);
  }

  void apply(const Operator& rho, double t, Operator& out) {
    const double c = model_.probe_rabi ? model_.probe_rabi(t) : 0.0;
    g_ = g_static_;
    if (c != 0.0) g_ += c * g_probe_;
    tmp_.noalias() = g_ * rho;
    out = tmp_ + tmp_.adjoint();
    for (const auto& l : jumps_) {
      for (const Entry& a : l) {
        for (const Entry& b : l) {
          out(a.row, b.row) += a.value * rho(a.col, b.col) * std::conj(b.value);
        }
      }
    }
  }

  void apply_state(const StateVector& psi, double t, StateVector& out) const {
    const double c = model_.probe_rabi ? model_.probe_rabi(t) : 0.0;
    out.noalias() = -kI * (model_.h_static * psi);
    if (c != 0.0) out.noalias() += (-kI * c) * (model_.h_probe * psi);
  }

 private:
  const LindbladModel& model_;
  Operator g_static_;
  Operator g_probe_;
  Operator g_;
  Operator tmp_;
  std::vector<SparseOp> jumps_;
};

void check_samples(std::span<const double> t) {
  if (t.empty()) throw ValidationError("evolve needs at least one sample time");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] >= t[i - 1])) throw ValidationError("sample times must be non-decreasing");
  }
}

int steps_for(double span, double dt) {
  return std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
}

}  // namespace

LevelScheme LevelScheme::three_level() { return LevelScheme({Level::g, Level::e, Level::r}); }

LevelScheme LevelScheme::four_level() {
  return LevelScheme({Level::s, Level::g, Level::e, Level::r});
}

bool LevelScheme::has(Level l) const {
  return std::find(levels_.begin(), levels_.end(), l) != levels_.end();
}

int LevelScheme::index(Level l) const {
  auto it = std::find(levels_.begin(), levels_.end(), l);
  if (it == levels_.end()) throw ValidationError("level not present in scheme");
  return static_cast<int>(it - levels_.begin());
}

Operator atom_op(const LevelScheme& scheme, Level alpha, Level beta) {
  const int d = scheme.atom_dim();
  Operator op = Operator::Zero(d, d);
  op(scheme.index(alpha), scheme.index(beta)) = 1.0;
  return op;
}

Operator single_atom_op(const LevelScheme& scheme, Level alpha, Level beta, int atom) {
  if (atom != 1 && atom != 2) throw ValidationError("atom index must be 1 or 2");
  const int d = scheme.atom_dim();
  const int a = scheme.index(alpha);
  const int b = scheme.index(beta);
  Operator op = Operator::Zero(d * d, d * d);
  for (int k = 0; k < d; ++k) {
    if (atom == 1) {
      op(a * d + k, b * d + k) = 1.0;
    } else {
      op(k * d + a, k * d + b) = 1.0;
    }
  }
  return op;
}

Operator build_atom_hamiltonian(const LevelScheme& scheme, const MicrowaveDrive& mw,
                                const ProbeField& probe) {
  Operator h = probe.detuning * atom_op(scheme, Level::g, Level::g) -
               mw.detuning * atom_op(scheme, Level::r, Level::r) -
               probe.rabi * (atom_op(scheme, Level::e, Level::g) + atom_op(scheme, Level::g, Level::e)) -
               mw.rabi * (atom_op(scheme, Level::r, Level::e) + atom_op(scheme, Level::e, Level::r));
  if (scheme.has(Level::s)) h += probe.detuning * atom_op(scheme, Level::s, Level::s);
  return h;
}

Operator build_hamiltonian(const LevelScheme& scheme, double r_um,
                           const InteractionCoefficients& coeffs, const MicrowaveDrive& mw,
                           const ProbeField& probe) {
  if (!(r_um > 0.0)) throw ValidationError("interatomic distance R must be positive");
  const int d = scheme.atom_dim();
  const Operator h1 = build_atom_hamiltonian(scheme, mw, probe);
  const Operator id = Operator::Identity(d, d);
  Operator h = Eigen::kroneckerProduct(h1, id).eval();
  h += Eigen::kroneckerProduct(id, h1).eval();

  const double r3 = r_um * r_um * r_um;
  const double r6 = r3 * r3;
  const int e = scheme.index(Level::e);
  const int r = scheme.index(Level::r);
  auto idx = [d](int i1, int i2) { return i1 * d + i2; };
  h(idx(e, e), idx(e, e)) += coeffs.c6_ee / r6;
  h(idx(r, r), idx(r, r)) += coeffs.c6_rr / r6;
  h(idx(e, r), idx(e, r)) += coeffs.c6_er / r6;
  h(idx(r, e), idx(r, e)) += coeffs.c6_er / r6;
  h(idx(r, e), idx(e, r)) += coeffs.c3_er / r3;
  h(idx(e, r), idx(r, e)) += coeffs.c3_er / r3;
  return h;
}

namespace {

std::vector<Operator> jumps_for(const LevelScheme& scheme, const RelaxationRates& rates,
                                const std::function<Operator(Level, Level)>& op) {
  std::vector<Operator> out;
  out.push_back(std::sqrt(rates.decay_e) * op(Level::g, Level::e));
  out.push_back(std::sqrt(rates.decay_r) * op(Level::g, Level::r));
  Operator z = op(Level::g, Level::g) - op(Level::e, Level::e) - op(Level::r, Level::r);
  if (scheme.has(Level::s)) z += op(Level::s, Level::s);
  out.push_back(std::sqrt(0.5 * rates.dephasing_g) * z);
  return out;
}

}  // namespace

std::vector<Operator> build_jump_operators(const LevelScheme& scheme,
                                           const RelaxationRates& rates) {
  rates.validate();
  std::vector<Operator> out;
  for (int atom = 1; atom <= 2; ++atom) {
    auto ops = jumps_for(scheme, rates, [&](Level a, Level b) {
      return single_atom_op(scheme, a, b, atom);
    });
    for (auto& o : ops) out.push_back(std::move(o));
  }
  return out;
}

std::vector<Operator> build_atom_jump_operators(const LevelScheme& scheme,
                                                const RelaxationRates& rates) {
  rates.validate();
  return jumps_for(scheme, rates, [&](Level a, Level b) { return atom_op(scheme, a, b); });
}

double trace_real(const Operator& rho) { return rho.trace().real(); }

double hermiticity_error(const Operator& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Operator& rho) {
  const Operator herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double expectation(const Operator& rho, const Operator& op) {
  require_square_same(rho, op, "expectation");
  return (rho * op).trace().real();
}

Operator from_pure(const StateVector& psi) { return psi * psi.adjoint(); }

StateVector basis_state(int dim, int index) {
  if (index < 0 || index >= dim) throw ValidationError("basis index out of range");
  StateVector v = StateVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

Operator lindblad_rhs(const Operator& rho, const Operator& h, std::span<const Operator> jumps) {
  require_square_same(rho, h, "lindblad_rhs (rho vs H)");
  Operator out = -kI * (h * rho - rho * h);
  for (const auto& l : jumps) {
    require_square_same(rho, l, "lindblad_rhs (rho vs jump)");
    const Operator ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

Eigen::MatrixXcd liouvillian_superoperator(const Operator& h, std::span<const Operator> jumps) {
  // vec(A X B) = (B^T kron A) vec(X) for column stacking.
  const int d = static_cast<int>(h.rows());
  const Operator id = Operator::Identity(d, d);
  Eigen::MatrixXcd s = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                              Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& l : jumps) {
    require_square_same(h, l, "liouvillian_superoperator");
    const Operator ldl = l.adjoint() * l;
    s += Eigen::kroneckerProduct(l.conjugate(), l).eval();
    s -= 0.5 * Eigen::kroneckerProduct(id, ldl).eval();
    s -= 0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval();
  }
  return s;
}

const double PulseEnvelope::kDefaultEdgeCutoff = std::sqrt(2.0 * std::log(1000.0));

void PulseEnvelope::validate() const {
  if (!(peak >= 0.0)) throw ValidationError("pulse peak must be >= 0");
  if (!(flat_duration >= 0.0)) throw ValidationError("pulse flat duration must be >= 0");
  if (!(edge_sigma > 0.0)) throw ValidationError("pulse edge sigma must be positive");
  if (!(edge_cutoff > 0.0)) throw ValidationError("pulse edge cutoff must be positive");
}

double PulseEnvelope::shape(double t) const {
  const double t1 = rise_end();
  const double t2 = fall_start();
  double x = 0.0;
  if (t < t1) {
    x = (t - t1) / edge_sigma;
  } else if (t > t2) {
    x = (t - t2) / edge_sigma;
  }
  return std::exp(-0.5 * x * x);
}

double PulseEnvelope::derivative(double t) const {
  const double t1 = rise_end();
  const double t2 = fall_start();
  double dt = 0.0;
  if (t < t1) {
    dt = t - t1;
  } else if (t > t2) {
    dt = t - t2;
  }
  return -dt / (edge_sigma * edge_sigma) * value(t);
}

Operator LindbladModel::hamiltonian(double t) const {
  const double c = probe_rabi ? probe_rabi(t) : 0.0;
  return h_static + c * h_probe;
}

void LindbladModel::validate() const {
  const int d = dim();
  if (h_static.rows() != h_static.cols()) throw ValidationError("H must be square");
  if (h_probe.rows() != d || h_probe.cols() != d) {
    throw ValidationError("probe coupling pattern has the wrong dimension");
  }
  for (const auto& l : jumps) {
    if (l.rows() != d || l.cols() != d) throw ValidationError("jump operator dimension mismatch");
  }
}

namespace {

Operator probe_pattern(const LevelScheme& scheme, bool pair) {
  if (!pair) {
    return -(atom_op(scheme, Level::e, Level::g) + atom_op(scheme, Level::g, Level::e));
  }
  Operator p = Operator::Zero(scheme.pair_dim(), scheme.pair_dim());
  for (int atom = 1; atom <= 2; ++atom) {
    p -= single_atom_op(scheme, Level::e, Level::g, atom) +
         single_atom_op(scheme, Level::g, Level::e, atom);
  }
  return p;
}

}  // namespace

LindbladModel make_pair_model(const LevelScheme& scheme, double r_um, const ParameterSet& params,
                              double probe_detuning, const PulseEnvelope& pulse,
                              double rabi_scale) {
  pulse.validate();
  LindbladModel m;
  m.h_static = build_hamiltonian(scheme, r_um, params.coeffs, params.microwave,
                                 ProbeField{0.0, probe_detuning});
  m.h_probe = probe_pattern(scheme, true);
  m.probe_rabi = [pulse, rabi_scale](double t) { return rabi_scale * pulse.value(t); };
  m.probe_peak = std::abs(rabi_scale) * pulse.peak;
  m.jumps = build_jump_operators(scheme, params.rates);
  return m;
}

LindbladModel make_atom_model(const LevelScheme& scheme, const ParameterSet& params,
                              double probe_detuning, const PulseEnvelope& pulse) {
  pulse.validate();
  LindbladModel m;
  m.h_static = build_atom_hamiltonian(scheme, params.microwave, ProbeField{0.0, probe_detuning});
  m.h_probe = probe_pattern(scheme, false);
  m.probe_rabi = [pulse](double t) { return pulse.value(t); };
  m.probe_peak = pulse.peak;
  m.jumps = build_atom_jump_operators(scheme, params.rates);
  return m;
}

double select_time_step(const LindbladModel& model, const EvolveConfig& config) {
  if (!(config.dt_max > 0.0)) throw ValidationError("dt_max must be positive");
  if (!(config.max_phase_per_step > 0.0)) throw ValidationError("max_phase_per_step must be positive");
  const int d = model.dim();
  Operator h = model.h_static + model.probe_peak * model.h_probe;
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  Operator k = Operator::Zero(d, d);
  for (const auto& l : model.jumps) k.noalias() += l.adjoint() * l;
  spread += k.norm();
  if (spread <= 0.0) return config.dt_max;
  return std::min(config.dt_max, config.max_phase_per_step / spread);
}

Trajectory evolve(const Operator& rho0, const LindbladModel& model,
                  std::span<const double> sample_times, const EvolveConfig& config) {
  model.validate();
  check_samples(sample_times);
  if (rho0.rows() != model.dim() || rho0.cols() != model.dim()) {
    throw ValidationError("initial state dimension does not match the model");
  }
  const double dt_target = select_time_step(model, config);
  RhsKernel rhs(model);
  const int d = model.dim();
  Operator rho = rho0;
  Operator k1(d, d), k2(d, d), k3(d, d), k4(d, d), y(d, d);

  Trajectory out;
  out.times.reserve(sample_times.size());
  out.states.reserve(sample_times.size());
  out.times.push_back(sample_times[0]);
  out.states.push_back(rho);
  double t = sample_times[0];
  for (std::size_t s = 1; s < sample_times.size(); ++s) {
    const double span = sample_times[s] - t;
    if (span > 0.0) {
      const int n = steps_for(span, dt_target);
      const double h = span / n;
      for (int i = 0; i < n; ++i) {
        const double ti = t + h * i;
        rhs.apply(rho, ti, k1);
        y = rho + (0.5 * h) * k1;
        rhs.apply(y, ti + 0.5 * h, k2);
        y = rho + (0.5 * h) * k2;
        rhs.apply(y, ti + 0.5 * h, k3);
        y = rho + h * k3;
        rhs.apply(y, ti + h, k4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t = sample_times[s];
    }
    const double drift = std::abs(trace_real(rho) - trace_real(rho0));
    if (!(drift <= config.trace_tolerance)) {
      std::ostringstream os;
      os << "integration failure: trace drift " << drift << " at t = " << t << " s";
      throw NumericalError(os.str());
    }
    out.times.push_back(sample_times[s]);
    out.states.push_back(rho);
  }
  return out;
}

Operator evolve_final(const Operator& rho0, const LindbladModel& model, double t0, double t1,
                      const EvolveConfig& config) {
  const double times[2] = {t0, t1};
  return evolve(rho0, model, times, config).states.back();
}

std::vector<StateVector> evolve_state(const StateVector& psi0, const LindbladModel& model,
                                      std::span<const double> sample_times,
                                      const EvolveConfig& config) {
  model.validate();
  check_samples(sample_times);
  if (psi0.size() != model.dim()) throw ValidationError("state dimension does not match the model");
  LindbladModel coherent = model;
  coherent.jumps.clear();
  const double dt_target = select_time_step(coherent, config);
  RhsKernel rhs(coherent);
  const int d = model.dim();
  StateVector psi = psi0;
  StateVector k1(d), k2(d), k3(d), k4(d), y(d);
  std::vector<StateVector> out;
  out.reserve(sample_times.size());
  out.push_back(psi);
  double t = sample_times[0];
  for (std::size_t s = 1; s < sample_times.size(); ++s) {
    const double span = sample_times[s] - t;
    if (span > 0.0) {
      const int n = steps_for(span, dt_target);
      const double h = span / n;
      for (int i = 0; i < n; ++i) {
        const double ti = t + h * i;
        rhs.apply_state(psi, ti, k1);
        y = psi + (0.5 * h) * k1;
        rhs.apply_state(y, ti + 0.5 * h, k2);
        y = psi + (0.5 * h) * k2;
        rhs.apply_state(y, ti + 0.5 * h, k3);
        y = psi + h * k3;
        rhs.apply_state(y, ti + h, k4);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t = sample_times[s];
    }
    out.push_back(psi);
  }
  return out;
}

}  // namespace rydimer
