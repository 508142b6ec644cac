// dynamics.hpp -- Hamiltonian assembly, Lindblad right-hand side, and time
// integration of the density matrix over the gate window.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qdm/basis.hpp"
#include "qdm/config.hpp"
#include "qdm/errors.hpp"
#include "qdm/pulses.hpp"

namespace qdm {

// ------------------------------ drives ------------------------------------

/// Staircase sampling time: the midpoint of the piecewise-constant level
/// containing t (levels of width pulse_staircase_dt anchored at t_start).
inline double staircase_time(const SimConfig& cfg, double t) {
  const double stair = cfg.pulse_staircase_dt;
  double level = std::floor((t - cfg.t_start) / stair);
  const double n_levels = std::ceil((cfg.t_end - cfg.t_start) / stair);
  level = std::clamp(level, 0.0, n_levels - 1.0);
  return cfg.t_start + (level + 0.5) * stair;
}

/// Omega1 drive value at t, staircase-resolved when the config asks for it.
inline double drive1(const SimConfig& cfg, double t) {
  if (cfg.pulse_staircase_dt > 0.0) t = staircase_time(cfg, t);
  return pulse_value(cfg.pulse1, t);
}

/// Omega2 drive value at t.
inline double drive2(const SimConfig& cfg, double t) {
  if (cfg.pulse_staircase_dt > 0.0) t = staircase_time(cfg, t);
  return pulse_value(cfg.pulse2, t);
}

// --------------------------- Hamiltonian -----------------------------------

namespace detail {

// Directed coupling entries of H; each is mirrored by its conjugate.
// coef selects which scalar multiplies the entry.
enum class HCoef { om1, om2, tau };

struct HEntry {
  int row;
  int col;
  HCoef coef;
};

inline const std::array<HEntry, 6>& h_entries() {
  using B = BasisState;
  static const std::array<HEntry, 6> entries = {{
      {index_of(B::T1_u), index_of(B::G_du), HCoef::om1},
      {index_of(B::T1_d), index_of(B::G_dd), HCoef::om1},
      {index_of(B::I1_u), index_of(B::T1_u), HCoef::tau},
      {index_of(B::I1_d), index_of(B::T1_d), HCoef::tau},
      {index_of(B::T2), index_of(B::G_ud), HCoef::om2},
      {index_of(B::I2), index_of(B::T2), HCoef::tau},
  }};
  return entries;
}

inline double h_value(const HEntry& e, double om1, double om2, double tau) {
  switch (e.coef) {
    case HCoef::om1: return om1;
    case HCoef::om2: return om2;
    default: return tau;
  }
}

}  // namespace detail

/// H(t) with given drive values, exactly Hermitian by construction. All
/// couplings are real, so the conjugate mirror is a plain transpose entry.
inline CMat hamiltonian_from_drives(double om1, double om2, double tau) {
  CMat h = CMat::Zero(kDim, kDim);
  for (const auto& e : detail::h_entries()) {
    const double v = detail::h_value(e, om1, om2, tau);
    h(e.row, e.col) = v;
    h(e.col, e.row) = v;
  }
  return h;
}

/// H(t) for a configuration (staircase-resolved drives when enabled).
inline CMat assemble_hamiltonian(double t, const SimConfig& cfg) {
  return hamiltonian_from_drives(drive1(cfg, t), drive2(cfg, t),
                                 cfg.tau_radps());
}

// ------------------------- Lindblad generator ------------------------------

namespace detail {

struct SparseEntry {
  int row;
  int col;
  cplx val;
};

inline std::vector<SparseEntry> sparse_entries(const CMat& m) {
  std::vector<SparseEntry> out;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) out.push_back({i, j, m(i, j)});
  return out;
}

// Applies the Lindblad map without forming dense products; the Hamiltonian
// and collapse operators have only a handful of nonzero entries.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const SimConfig& cfg) : tau_(cfg.tau_radps()) {
    for (const auto& ch : collapse_ops(cfg)) {
      Channel c;
      c.rate = ch.rate;
      c.c = sparse_entries(ch.op);
      c.cdc = sparse_entries((ch.op.adjoint() * ch.op).eval());
      channels_.push_back(std::move(c));
    }
  }

  // out = -i [H, rho] + sum_i gamma_i (c rho c+ - 1/2 {c+c, rho})
  void rhs(CMat& out, const CMat& rho, double om1, double om2) const {
    out.setZero();
    const cplx mi(0.0, -1.0);
    for (const auto& e : h_entries()) {
      const double v = h_value(e, om1, om2, tau_);
      if (v == 0.0) continue;
      // entry (row, col) and its Hermitian mirror (col, row)
      out.row(e.row) += (mi * v) * rho.row(e.col);
      out.col(e.col) -= (mi * v) * rho.col(e.row);
      out.row(e.col) += (mi * v) * rho.row(e.row);
      out.col(e.row) -= (mi * v) * rho.col(e.col);
    }
    for (const auto& ch : channels_) {
      for (const auto& a : ch.c)
        for (const auto& b : ch.c)
          out(a.row, b.row) += ch.rate * a.val * std::conj(b.val) * rho(a.col, b.col);
      for (const auto& p : ch.cdc) {
        const cplx w = 0.5 * ch.rate * p.val;
        out.row(p.row) -= w * rho.row(p.col);
        out.col(p.col) -= w * rho.col(p.row);
      }
    }
  }

 private:
  struct Channel {
    double rate;
    std::vector<SparseEntry> c;
    std::vector<SparseEntry> cdc;
  };
  double tau_;
  std::vector<Channel> channels_;
};

}  // namespace detail

/// Lindblad right-hand side at (rho, t): -i[H(t), rho] plus the radiative
/// dissipators of the configuration. Hermitian and traceless for Hermitian
/// input.
inline CMat lindblad_rhs(const CMat& rho, double t, const SimConfig& cfg) {
  detail::LindbladGenerator gen(cfg);
  CMat out(kDim, kDim);
  gen.rhs(out, rho, drive1(cfg, t), drive2(cfg, t));
  return out;
}

// ------------------------------ evolution ----------------------------------

/// Sampled run record: populations, drive envelopes, and invariant monitors
/// on a shared strictly-increasing time grid.
struct TimeSeries {
  std::vector<double> times;   // ps
  std::vector<double> omega1;  // rad/ps
  std::vector<double> omega2;  // rad/ps
  std::array<std::vector<double>, kDim> populations;
  std::vector<double> trace_dev;  // |tr rho - 1|
  std::vector<double> purity;     // tr rho^2

  std::size_t size() const { return times.size(); }
};

struct EvolveResult {
  CMat final_rho;
  TimeSeries series;
  double trace_dev_max = 0.0;  // over samples
  double min_eig = 0.0;        // smallest eigenvalue seen at any sample
};

/// Called at every sampled time with the current state.
using SampleObserver = std::function<void(double t, const CMat& rho)>;

namespace detail {

inline void record_sample(TimeSeries& ts, EvolveResult& res,
                          const SimConfig& cfg, double t, const CMat& rho,
                          const SampleObserver& obs) {
  ts.times.push_back(t);
  ts.omega1.push_back(drive1(cfg, t));
  ts.omega2.push_back(drive2(cfg, t));
  for (int k = 0; k < kDim; ++k)
    ts.populations[static_cast<std::size_t>(k)].push_back(rho(k, k).real());
  const double tdev = std::abs(rho.trace() - cplx(1.0, 0.0));
  ts.trace_dev.push_back(tdev);
  ts.purity.push_back(rho.squaredNorm());
  res.trace_dev_max = std::max(res.trace_dev_max, tdev);
  Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
  res.min_eig = std::min(res.min_eig, es.eigenvalues().minCoeff());
  if (obs) obs(t, rho);
}

inline void hermitize(CMat& rho, CMat& tmp) {
  tmp = rho.adjoint();
  rho = 0.5 * (rho + tmp);
}

inline CMat initial_density(const SimConfig& cfg) {
  if (cfg.initial_rho.size() > 0) return cfg.initial_rho;
  return cfg.initial_state * cfg.initial_state.adjoint();
}

// Classic fixed-step RK4. In staircase mode every step lies inside one
// constant-Hamiltonian level, so all four stages share the drive values
// sampled at the step midpoint (segment-wise integration of the
// piecewise-constant system); otherwise the stages use their own times.
inline EvolveResult evolve_rk4(const SimConfig& cfg, const SampleObserver& obs) {
  const detail::LindbladGenerator gen(cfg);
  const double span = cfg.t_end - cfg.t_start;
  const long n_steps = std::max<long>(1, std::llround(std::ceil(span / cfg.dt - 1e-9)));
  const bool staircase = cfg.pulse_staircase_dt > 0.0;

  EvolveResult res;
  res.min_eig = std::numeric_limits<double>::infinity();
  CMat rho = initial_density(cfg);
  CMat k1(kDim, kDim), k2(kDim, kDim), k3(kDim, kDim), k4(kDim, kDim);
  CMat stage(kDim, kDim), tmp(kDim, kDim);

  record_sample(res.series, res, cfg, cfg.t_start, rho, obs);
  for (long k = 0; k < n_steps; ++k) {
    const double t = cfg.t_start + static_cast<double>(k) * cfg.dt;
    const double h = std::min(cfg.dt, cfg.t_end - t);
    if (h <= 0.0) break;
    double om1_0, om2_0, om1_m, om2_m, om1_1, om2_1;
    if (staircase) {
      om1_0 = om1_m = om1_1 = drive1(cfg, t + 0.5 * h);
      om2_0 = om2_m = om2_1 = drive2(cfg, t + 0.5 * h);
    } else {
      om1_0 = drive1(cfg, t);
      om2_0 = drive2(cfg, t);
      om1_m = drive1(cfg, t + 0.5 * h);
      om2_m = drive2(cfg, t + 0.5 * h);
      om1_1 = drive1(cfg, t + h);
      om2_1 = drive2(cfg, t + h);
    }
    gen.rhs(k1, rho, om1_0, om2_0);
    stage = rho + (0.5 * h) * k1;
    gen.rhs(k2, stage, om1_m, om2_m);
    stage = rho + (0.5 * h) * k2;
    gen.rhs(k3, stage, om1_m, om2_m);
    stage = rho + h * k3;
    gen.rhs(k4, stage, om1_1, om2_1);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    hermitize(rho, tmp);

    const double t_next = (k + 1 == n_steps) ? cfg.t_end : t + h;
    if ((k + 1) % cfg.sample_stride == 0 || k + 1 == n_steps)
      record_sample(res.series, res, cfg, t_next, rho, obs);
  }
  res.final_rho = rho;
  return res;
}

// Embedded Dormand-Prince 5(4) with absolute error control on matrix
// entries.
inline EvolveResult evolve_rk45(const SimConfig& cfg, const SampleObserver& obs) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // difference between 5th and 4th order weights
  static const double d1 = 71.0 / 57600, d3 = -71.0 / 16695, d4 = 71.0 / 1920,
                      d5 = -17253.0 / 339200, d6 = 22.0 / 525, d7 = -1.0 / 40;

  const detail::LindbladGenerator gen(cfg);
  EvolveResult res;
  res.min_eig = std::numeric_limits<double>::infinity();
  CMat rho = initial_density(cfg);
  CMat k1(kDim, kDim), k2(kDim, kDim), k3(kDim, kDim), k4(kDim, kDim),
      k5(kDim, kDim), k6(kDim, kDim), k7(kDim, kDim);
  CMat stage(kDim, kDim), cand(kDim, kDim), err(kDim, kDim), tmp(kDim, kDim);

  auto eval = [&](CMat& out, const CMat& r, double t) {
    gen.rhs(out, r, drive1(cfg, t), drive2(cfg, t));
  };

  double t = cfg.t_start;
  double h = cfg.dt;
  long accepted = 0;
  record_sample(res.series, res, cfg, t, rho, obs);
  while (t < cfg.t_end - 1e-12) {
    h = std::min(h, cfg.t_end - t);
    if (h < 1e-9) {
      IntegrationError e(t, "adaptive step underflow (dt < 1e-9 ps)");
      res.final_rho = rho;
      throw e;
    }
    eval(k1, rho, t);
    stage = rho + h * (a21 * k1);
    eval(k2, stage, t + c2 * h);
    stage = rho + h * (a31 * k1 + a32 * k2);
    eval(k3, stage, t + c3 * h);
    stage = rho + h * (a41 * k1 + a42 * k2 + a43 * k3);
    eval(k4, stage, t + c4 * h);
    stage = rho + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    eval(k5, stage, t + c5 * h);
    stage = rho + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    eval(k6, stage, t + h);
    cand = rho + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    eval(k7, cand, t + h);
    err = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    const double err_norm = err.cwiseAbs().maxCoeff();

    if (err_norm <= cfg.adaptive_tol) {
      t += h;
      rho = cand;
      hermitize(rho, tmp);
      ++accepted;
      if (accepted % cfg.sample_stride == 0 || t >= cfg.t_end - 1e-12)
        record_sample(res.series, res, cfg, t, rho, obs);
    }
    const double scale =
        err_norm > 0.0
            ? 0.9 * std::pow(cfg.adaptive_tol / err_norm, 0.2)
            : 5.0;
    h *= std::clamp(scale, 0.2, 5.0);
  }
  if (res.series.times.empty() || res.series.times.back() < cfg.t_end - 1e-12)
    record_sample(res.series, res, cfg, cfg.t_end, rho, obs);
  res.final_rho = rho;
  return res;
}

}  // namespace detail

/// Integrates the master equation over [t_start, t_end]. Deterministic for a
/// fixed config. The observer, when given, is invoked at every sampled time.
inline EvolveResult evolve(const SimConfig& cfg, const SampleObserver& obs = {}) {
  cfg.validate();
  if (cfg.integrator == IntegratorKind::rk4_fixed)
    return detail::evolve_rk4(cfg, obs);
  return detail::evolve_rk45(cfg, obs);
}

// -------------------------- convergence check ------------------------------

struct ConvergenceReport {
  double max_pop_diff = 0.0;    // final populations, dt vs dt/2
  double fidelity_diff = 0.0;   // drift of <target|rho|target>
  double fidelity_dt = 0.0;
  double fidelity_half_dt = 0.0;
};

/// Runs the fixed-step integrator at dt and dt/2 and reports how much the
/// final populations and the target-state fidelity move.
inline ConvergenceReport convergence_check(const SimConfig& cfg,
                                           const CVec& target) {
  if (cfg.integrator != IntegratorKind::rk4_fixed)
    throw ConfigError("integrator", "convergence_check needs rk4_fixed");
  SimConfig half = cfg;
  half.dt = 0.5 * cfg.dt;
  half.sample_stride = 2 * cfg.sample_stride;
  const EvolveResult full = evolve(cfg);
  const EvolveResult fine = evolve(half);

  ConvergenceReport rep;
  for (int k = 0; k < kDim; ++k) {
    rep.max_pop_diff = std::max(
        rep.max_pop_diff,
        std::abs(full.final_rho(k, k).real() - fine.final_rho(k, k).real()));
  }
  rep.fidelity_dt = (target.adjoint() * full.final_rho * target)(0).real();
  rep.fidelity_half_dt = (target.adjoint() * fine.final_rho * target)(0).real();
  rep.fidelity_diff = std::abs(rep.fidelity_dt - rep.fidelity_half_dt);
  return rep;
}

}  // namespace qdm
