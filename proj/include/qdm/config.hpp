// config.hpp -- simulation parameters, their reference defaults, and the
// decay-channel set derived from them.

#pragma once

#include <cmath>
#include <vector>

#include "qdm/basis.hpp"
#include "qdm/errors.hpp"
#include "qdm/pulses.hpp"

namespace qdm {

/// Which channel the gamma2 rate drives. The dot-2 sector's radiative load
/// can be read as sitting on the trion T2 or on the indirect excitons
/// (I1_u, I1_d, I2); both readings are exposed and swappable with gamma_ind.
enum class ChannelAttachment { trion, indirect };

enum class IntegratorKind { rk4_fixed, rk45_adaptive };

/// Equal superposition of the four ground states, 1/2 (1,1,1,1,0,...).
inline CVec ground_superposition() {
  CVec v = CVec::Zero(kDim);
  v(0) = v(1) = v(2) = v(3) = 0.5;
  return v;
}

/// All physical and numerical parameters of one run. Default-constructed
/// instances carry the reference parameter set: tau = 2 meV,
/// gamma1 = gamma2 = 1 ns^-1, t0 = 1 ps Gaussian pulses, window
/// [-60, 60] ps, RK4 at dt = 0.001 ps.
struct SimConfig {
  UnitMode unit_mode = UnitMode::physical;

  // Tunneling rate as quoted: meV in physical mode, rad/ps in hbar_unity.
  double tau = 2.0;

  // Decay rates, internal units ps^-1 (1 ns^-1 = 0.001 ps^-1).
  double gamma1 = 0.001;
  double gamma2 = 0.001;
  double gamma_ind = 0.0;
  ChannelAttachment channel_attachment = ChannelAttachment::trion;

  // Omega1: wide Gaussian, amplitude 5 sqrt(pi)/(2 t0), width factor 0.05.
  // Omega2: narrow Gaussian, amplitude 2 sqrt(pi)/t0 (area pi), width factor 2.
  PulseShape pulse1 = PulseShape::gaussian_pulse(2.5 * std::sqrt(M_PI), 0.05);
  PulseShape pulse2 = PulseShape::gaussian_pulse(2.0 * std::sqrt(M_PI), 2.0);

  double t_start = -60.0;  // ps
  double t_end = 60.0;     // ps
  double dt = 0.001;       // ps

  IntegratorKind integrator = IntegratorKind::rk4_fixed;
  double adaptive_tol = 1e-10;
  int sample_stride = 100;

  // Pure initial state (used when initial_rho is empty).
  CVec initial_state = ground_superposition();
  // Optional mixed initial state; takes precedence when sized kDim x kDim.
  CMat initial_rho;

  // When > 0, the pulse envelopes are sampled piecewise-constant on levels
  // of this width (anchored at t_start) and the integrator advances each
  // level as a constant-Hamiltonian segment. Requires rk4_fixed and
  // pulse_staircase_dt an integer multiple of dt.
  double pulse_staircase_dt = 0.0;

  /// Tunneling rate in internal units (rad/ps).
  double tau_radps() const {
    return energy_to_angular_frequency(tau, unit_mode);
  }

  void validate() const {
    if (!(t_start < t_end))
      throw ConfigError("t_start", "window must satisfy t_start < t_end");
    if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
    if (!(adaptive_tol > 0.0)) throw ConfigError("adaptive_tol", "must be > 0");
    if (sample_stride < 1) throw ConfigError("sample_stride", "must be >= 1");
    if (gamma1 < 0.0) throw ConfigError("gamma1", "rate must be >= 0");
    if (gamma2 < 0.0) throw ConfigError("gamma2", "rate must be >= 0");
    if (gamma_ind < 0.0) throw ConfigError("gamma_ind", "rate must be >= 0");
    if (pulse1.amplitude < 0.0) throw ConfigError("pulse1.amplitude", "must be >= 0");
    if (pulse2.amplitude < 0.0) throw ConfigError("pulse2.amplitude", "must be >= 0");
    for (const auto* p : {&pulse1, &pulse2}) {
      if (p->kind == PulseShape::Kind::gaussian &&
          (p->width_param <= 0.0 || p->t0 <= 0.0)) {
        throw ConfigError(p == &pulse1 ? "pulse1" : "pulse2",
                          "gaussian pulse needs width_param > 0 and t0 > 0");
      }
    }
    if (pulse_staircase_dt < 0.0)
      throw ConfigError("pulse_staircase_dt", "must be >= 0");
    if (pulse_staircase_dt > 0.0) {
      if (integrator != IntegratorKind::rk4_fixed)
        throw ConfigError("pulse_staircase_dt", "requires the rk4_fixed integrator");
      const double ratio = pulse_staircase_dt / dt;
      if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0 - 1e-9)
        throw ConfigError("pulse_staircase_dt", "must be an integer multiple of dt");
    }
    if (initial_rho.size() > 0) {
      if (initial_rho.rows() != kDim || initial_rho.cols() != kDim)
        throw ConfigError("initial_density_matrix", "must be 10x10");
      if (std::abs(initial_rho.trace().real() - 1.0) > 1e-9 ||
          std::abs(initial_rho.trace().imag()) > 1e-12)
        throw ConfigError("initial_density_matrix", "trace must be 1");
      if ((initial_rho - initial_rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw ConfigError("initial_density_matrix", "must be Hermitian");
    } else {
      if (initial_state.size() != kDim)
        throw ConfigError("initial_state", "must have 10 amplitudes");
      if (std::abs(initial_state.norm() - 1.0) > 1e-9)
        throw ConfigError("initial_state", "must be normalized");
    }
  }
};

inline SimConfig default_config() { return SimConfig{}; }

/// The decay-channel set for a configuration: (gamma1, c1) on the dot-1
/// trions always; gamma2 and gamma_ind drive the dot-2 trion and the
/// indirect excitons, swapped according to channel_attachment. Channels of
/// rate zero are omitted.
inline std::vector<CollapseChannel> collapse_ops(const SimConfig& cfg) {
  if (cfg.gamma1 < 0.0) throw ConfigError("gamma1", "rate must be >= 0");
  if (cfg.gamma2 < 0.0) throw ConfigError("gamma2", "rate must be >= 0");
  if (cfg.gamma_ind < 0.0) throw ConfigError("gamma_ind", "rate must be >= 0");

  const bool trion = cfg.channel_attachment == ChannelAttachment::trion;
  const double rate_t2 = trion ? cfg.gamma2 : cfg.gamma_ind;
  const double rate_ind = trion ? cfg.gamma_ind : cfg.gamma2;

  std::vector<CollapseChannel> chans;
  if (cfg.gamma1 > 0.0) chans.push_back({cfg.gamma1, collapse_trion1()});
  if (rate_t2 > 0.0) chans.push_back({rate_t2, collapse_trion2()});
  if (rate_ind > 0.0) {
    chans.push_back({rate_ind, collapse_indirect1()});
    chans.push_back({rate_ind, collapse_indirect2()});
  }
  return chans;
}

}  // namespace qdm
