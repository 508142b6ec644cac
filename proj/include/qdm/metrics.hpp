// metrics.hpp -- gate-level observables: ideal target state, fidelity,
// relative-phase table, and gate-time estimate.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <future>
#include <limits>
#include <stdexcept>

#include "qdm/basis.hpp"
#include "qdm/config.hpp"
#include "qdm/dynamics.hpp"

namespace qdm {

/// Ideal controlled-phase action on a ground-manifold state: the G_ud
/// amplitude flips sign, everything else is untouched. Accepts a 4-vector
/// over the ground states or a full 10-vector supported on them.
inline CVec ideal_output(const CVec& initial) {
  if (initial.size() != 4 && initial.size() != kDim)
    throw std::domain_error("ideal_output: state must have 4 or 10 amplitudes");
  for (Eigen::Index k = 4; k < initial.size(); ++k) {
    if (std::abs(initial(k)) > 1e-12)
      throw std::domain_error("ideal_output: support outside the ground manifold");
  }
  CVec out = initial;
  out(index_of(BasisState::G_ud)) = -out(index_of(BasisState::G_ud));
  return out;
}

/// Pure-target fidelity <target|rho|target>, clamped into [0, 1].
inline double state_fidelity(const CMat& rho, const CVec& target) {
  if (std::abs(target.norm() - 1.0) > 1e-9)
    throw std::domain_error("state_fidelity: target must be normalized");
  const cplx f = (target.adjoint() * rho * target)(0);
  if (std::abs(f.imag()) > 1e-12)
    throw std::domain_error("state_fidelity: density matrix is not Hermitian");
  return std::clamp(f.real(), 0.0, 1.0);
}

/// Duration between the first and last samples where either drive envelope
/// exceeds threshold_fraction of its own peak.
inline double gate_time(const TimeSeries& series, double threshold_fraction) {
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
    throw std::domain_error("gate_time: threshold_fraction must be in (0, 1)");
  if (series.times.empty())
    throw std::domain_error("gate_time: empty time series");
  const double peak1 =
      *std::max_element(series.omega1.begin(), series.omega1.end());
  const double peak2 =
      *std::max_element(series.omega2.begin(), series.omega2.end());
  double first = std::numeric_limits<double>::quiet_NaN();
  double last = first;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const bool on = series.omega1[i] > threshold_fraction * peak1 ||
                    series.omega2[i] > threshold_fraction * peak2;
    if (on) {
      if (std::isnan(first)) first = series.times[i];
      last = series.times[i];
    }
  }
  if (std::isnan(first))
    throw std::domain_error("gate_time: pulses never exceed the threshold");
  return last - first;
}

/// Per-basis-state gate table. Each ground state is evolved on its own for
/// the retained population m_k, and each of G_ud, G_du, G_dd is evolved in
/// an equal superposition with G_uu so the relative phase phi_k can be read
/// off the final G_uu coherence. Entries are sqrt(m_k) exp(i phi_k); the
/// G_uu entry is its own retained population (1 for every config). Ideal
/// gate: (1, -1, 1, 1).
inline std::array<cplx, 4> phase_table(const SimConfig& cfg) {
  auto run = [cfg](const CVec& init) {
    SimConfig c = cfg;
    c.initial_state = init;
    c.initial_rho = CMat();
    return evolve(c).final_rho;
  };

  std::array<std::future<CMat>, 4> pop_runs;
  for (int k = 0; k < 4; ++k) {
    pop_runs[static_cast<std::size_t>(k)] = std::async(
        std::launch::async, run, basis_vector(build_basis()[static_cast<std::size_t>(k)]));
  }
  std::array<std::future<CMat>, 3> coh_runs;
  for (int k = 1; k < 4; ++k) {
    CVec plus = CVec::Zero(kDim);
    plus(0) = plus(k) = 1.0 / std::sqrt(2.0);
    coh_runs[static_cast<std::size_t>(k - 1)] = std::async(std::launch::async, run, plus);
  }

  std::array<cplx, 4> table;
  table[0] = pop_runs[0].get()(0, 0).real();
  for (int k = 1; k < 4; ++k) {
    const double m = std::max(0.0, pop_runs[static_cast<std::size_t>(k)].get()(k, k).real());
    const cplx coh = coh_runs[static_cast<std::size_t>(k - 1)].get()(k, 0);
    const double phi = std::arg(coh);
    table[static_cast<std::size_t>(k)] = std::sqrt(m) * std::exp(cplx(0.0, phi));
  }
  return table;
}

/// Everything the CLI and sweep report about one gate run.
struct GateReport {
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  bool has_phase_table = false;
  std::array<cplx, 4> phase_table{};
  double gate_time = std::numeric_limits<double>::quiet_NaN();
  double gate_time_threshold = 0.01;
  double trace_dev_max = 0.0;
  double min_eig = 0.0;
  UnitMode unit_mode = UnitMode::physical;
};

/// Runs the configured gate and collects the report. Fidelity is measured
/// against ideal_output of the configured pure initial state and is left NaN
/// for mixed or non-ground initial states. The phase table costs seven more
/// evolutions and is filled on request only.
inline GateReport gate_report(const SimConfig& cfg, bool with_phase_table = false) {
  cfg.validate();
  GateReport rep;
  rep.unit_mode = cfg.unit_mode;
  const EvolveResult run = evolve(cfg);
  rep.trace_dev_max = run.trace_dev_max;
  rep.min_eig = run.min_eig;
  try {
    rep.gate_time = gate_time(run.series, rep.gate_time_threshold);
  } catch (const std::domain_error&) {
    // pulses never crossed the threshold; leave NaN
  }
  if (cfg.initial_rho.size() == 0) {
    bool ground = true;
    for (int k = 4; k < kDim; ++k)
      if (std::abs(cfg.initial_state(k)) > 1e-12) ground = false;
    if (ground)
      rep.fidelity = state_fidelity(run.final_rho, ideal_output(cfg.initial_state));
  }
  if (with_phase_table) {
    rep.phase_table = phase_table(cfg);
    rep.has_phase_table = true;
  }
  return rep;
}

}  // namespace qdm
