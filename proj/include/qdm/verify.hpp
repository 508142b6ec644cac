// verify.hpp -- the self-check suite behind the `verify` command: closed-form
// oracles against the integrator, the superoperator-exponential equivalence,
// and the step-halving convergence probe.

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "qdm/config.hpp"
#include "qdm/dynamics.hpp"
#include "qdm/metrics.hpp"
#include "qdm/oracles.hpp"

namespace qdm {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  double dt_override = 0.0;  // > 0 replaces each check's step size
  bool negate_tau = false;   // debug hook: corrupt the integrator-side tau sign
};

namespace detail {

inline std::string fmt_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

}  // namespace detail

/// Dark state annihilation: embed (tau, -Omega1) into the 3-level sector and
/// apply the sector Hamiltonian; the residual must vanish to 1e-14.
inline CheckResult check_dark_state() {
  double worst = 0.0;
  const double pairs[][2] = {{0.0, 2.0}, {4.43, 3.04}, {3.04, 3.04}, {7.0, 0.5}};
  for (const auto& p : pairs) {
    const CVec d = dark_state(p[0], p[1]);
    CMat h = CMat::Zero(3, 3);
    h(1, 0) = h(0, 1) = p[0];  // ground-trion drive
    h(2, 1) = h(1, 2) = p[1];  // trion-indirect tunneling
    CVec embedded(3);
    embedded << d(0), 0.0, d(1);
    worst = std::max(worst, (h * embedded).cwiseAbs().maxCoeff());
  }
  return {"dark_state annihilation",
          worst <= 1e-14,
          "max |H d| = " + detail::fmt_sci(worst) + " (tol 1e-14)"};
}

/// Constant-drive three-level law vs the integrator, full density matrix.
/// tau = 2, Omega2 = 10 rad/ps, closed system, start in G_ud.
inline CheckResult check_three_level_rabi(const VerifyOptions& opt = {}) {
  SimConfig cfg;
  cfg.unit_mode = UnitMode::hbar_unity;
  cfg.tau = opt.negate_tau ? -2.0 : 2.0;
  cfg.gamma1 = cfg.gamma2 = 0.0;
  cfg.pulse1 = PulseShape::constant_pulse(0.0);
  cfg.pulse2 = PulseShape::constant_pulse(10.0);
  cfg.t_start = 0.0;
  cfg.t_end = 1.0;
  cfg.dt = opt.dt_override > 0.0 ? opt.dt_override : 0.0005;
  cfg.sample_stride = std::max<int>(1, static_cast<int>(std::llround(0.01 / cfg.dt)));
  cfg.initial_state = basis_vector(BasisState::G_ud);

  const int g = index_of(BasisState::G_ud);
  const int e = index_of(BasisState::T2);
  const int i = index_of(BasisState::I2);
  double worst = 0.0;
  auto compare = [&](double t, const CMat& rho) {
    const CVec psi = three_level_rabi({2.0, 10.0, t});
    CMat expected = CMat::Zero(kDim, kDim);
    const int idx[3] = {g, e, i};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        expected(idx[a], idx[b]) = psi(a) * std::conj(psi(b));
    worst = std::max(worst, (rho - expected).cwiseAbs().maxCoeff());
  };
  evolve(cfg, compare);
  return {"three-level constant-drive law",
          worst <= 1e-9,
          "max |rho - psi psi+| = " + detail::fmt_sci(worst) + " (tol 1e-9)"};
}

/// Isolated T2 decay against exp(-gamma t).
inline CheckResult check_damping_law(const VerifyOptions& opt = {}) {
  SimConfig cfg;
  cfg.unit_mode = UnitMode::hbar_unity;
  cfg.tau = 0.0;
  cfg.gamma1 = 0.0;
  cfg.gamma2 = 0.001;
  cfg.pulse1 = PulseShape::constant_pulse(0.0);
  cfg.pulse2 = PulseShape::constant_pulse(0.0);
  cfg.t_start = 0.0;
  cfg.t_end = 500.0;
  cfg.dt = opt.dt_override > 0.0 ? opt.dt_override : 0.01;
  cfg.sample_stride = 100;
  cfg.initial_state = basis_vector(BasisState::T2);

  const int e = index_of(BasisState::T2);
  double worst = 0.0;
  auto compare = [&](double t, const CMat& rho) {
    worst = std::max(worst, std::abs(rho(e, e).real() - damped_two_level(0.001, t)));
  };
  evolve(cfg, compare);
  return {"two-level damping law",
          worst <= 1e-9,
          "max |pop - exp(-gamma t)| = " + detail::fmt_sci(worst) + " (tol 1e-9)"};
}

/// Staircased default pulses: segment-wise RK4 against the superoperator
/// exponential, compared entry-by-entry at every sampled time.
inline double staircase_equivalence_max_diff(SimConfig cfg, double stair_dt,
                                             int substeps) {
  cfg.pulse_staircase_dt = stair_dt;
  cfg.dt = stair_dt / substeps;
  cfg.integrator = IntegratorKind::rk4_fixed;
  cfg.validate();

  std::vector<std::pair<double, CMat>> snapshots;
  evolve(cfg, [&](double t, const CMat& rho) { snapshots.emplace_back(t, rho); });

  SuperopStaircase oracle(cfg);
  CVec v = vec_density(cfg.initial_rho.size() > 0
                           ? CMat(cfg.initial_rho)
                           : CMat(cfg.initial_state * cfg.initial_state.adjoint()));
  double worst = 0.0;
  std::size_t next_snap = 0;
  auto compare_at = [&](double t) {
    while (next_snap < snapshots.size() &&
           std::abs(snapshots[next_snap].first - t) < 0.25 * cfg.dt) {
      worst = std::max(
          worst,
          (unvec_density(v) - snapshots[next_snap].second).cwiseAbs().maxCoeff());
      ++next_snap;
    }
  };
  compare_at(cfg.t_start);
  for (long level = 0; level < oracle.n_levels(); ++level) {
    oracle.step(v, level);
    compare_at(cfg.t_start + (static_cast<double>(level) + 1.0) * stair_dt);
  }
  return worst;
}

inline CheckResult check_expm_equivalence(const VerifyOptions& opt = {}) {
  SimConfig cfg;
  cfg.t_start = -2.0;
  cfg.t_end = 2.0;
  cfg.sample_stride = 200;
  const double stair = opt.dt_override > 0.0 ? opt.dt_override : 0.0005;
  if (opt.negate_tau) cfg.tau = -cfg.tau;
  const double worst = staircase_equivalence_max_diff(cfg, stair, 2);
  return {"superoperator exponential vs RK4 (staircase)",
          worst <= 1e-8,
          "max entry diff = " + detail::fmt_sci(worst) + " (tol 1e-8)"};
}

/// Step-halving drift of the gate fidelity on the default run.
inline CheckResult check_convergence(const VerifyOptions& opt = {}) {
  SimConfig cfg;
  if (opt.dt_override > 0.0) cfg.dt = opt.dt_override;
  const ConvergenceReport rep = convergence_check(cfg, ideal_output(cfg.initial_state));
  return {"step-halving convergence",
          rep.fidelity_diff <= 1e-8,
          "fidelity drift = " + detail::fmt_sci(rep.fidelity_diff) +
              ", max pop drift = " + detail::fmt_sci(rep.max_pop_diff) +
              " (tol 1e-8)"};
}

inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
  return {check_dark_state(), check_three_level_rabi(opt), check_damping_law(opt),
          check_expm_equivalence(opt), check_convergence(opt)};
}

}  // namespace qdm
