// sweep.hpp -- one-parameter scans over SimConfig producing a GateReport per
// value. Points execute independently (optionally in parallel) and results
// keep the input order.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qdm/config.hpp"
#include "qdm/errors.hpp"
#include "qdm/metrics.hpp"

namespace qdm {

struct SweepSpec {
  SimConfig base;
  std::string parameter;       // numeric field path, e.g. "gamma2_per_ns"
  std::vector<double> values;  // in the field's external units
  std::vector<std::string> outputs = {"fidelity"};
};

struct SweepPoint {
  double value = 0.0;
  std::optional<GateReport> report;
  std::string error;  // set instead of report when the run failed
};

/// Writes one swept value into a config. Rate parameters are quoted per
/// nanosecond, matching the JSON schema; unit_mode accepts 0 (physical) and
/// 1 (hbar_unity).
inline void apply_parameter(SimConfig& cfg, const std::string& name, double value) {
  if (name == "tau") cfg.tau = value;
  else if (name == "gamma1_per_ns") cfg.gamma1 = value * 1e-3;
  else if (name == "gamma2_per_ns") cfg.gamma2 = value * 1e-3;
  else if (name == "gamma_ind_per_ns") cfg.gamma_ind = value * 1e-3;
  else if (name == "t_start") cfg.t_start = value;
  else if (name == "t_end") cfg.t_end = value;
  else if (name == "dt") cfg.dt = value;
  else if (name == "adaptive_tol") cfg.adaptive_tol = value;
  else if (name == "sample_stride") cfg.sample_stride = static_cast<int>(value);
  else if (name == "pulse_staircase_dt") cfg.pulse_staircase_dt = value;
  else if (name == "pulse1.amplitude") cfg.pulse1.amplitude = value;
  else if (name == "pulse1.width_param") cfg.pulse1.width_param = value;
  else if (name == "pulse1.center") cfg.pulse1.center = value;
  else if (name == "pulse1.t0") cfg.pulse1.t0 = value;
  else if (name == "pulse2.amplitude") cfg.pulse2.amplitude = value;
  else if (name == "pulse2.width_param") cfg.pulse2.width_param = value;
  else if (name == "pulse2.center") cfg.pulse2.center = value;
  else if (name == "pulse2.t0") cfg.pulse2.t0 = value;
  else if (name == "unit_mode") {
    if (value == 0.0) cfg.unit_mode = UnitMode::physical;
    else if (value == 1.0) cfg.unit_mode = UnitMode::hbar_unity;
    else throw ConfigError("unit_mode", "sweep values must be 0 (physical) or 1 (hbar_unity)");
  } else {
    throw ConfigError(name, "unknown sweep parameter");
  }
}

inline bool is_sweep_parameter(const std::string& name) {
  static const char* known[] = {
      "tau",          "gamma1_per_ns",    "gamma2_per_ns", "gamma_ind_per_ns",
      "t_start",      "t_end",            "dt",            "adaptive_tol",
      "sample_stride", "pulse_staircase_dt", "unit_mode",
      "pulse1.amplitude", "pulse1.width_param", "pulse1.center", "pulse1.t0",
      "pulse2.amplitude", "pulse2.width_param", "pulse2.center", "pulse2.t0"};
  for (const char* k : known)
    if (name == k) return true;
  return false;
}

/// One full gate simulation per value; deterministic, ordered like the
/// input, and tolerant of per-point failures.
inline std::vector<SweepPoint> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty())
    throw ConfigError("values", "sweep needs at least one value");
  if (!is_sweep_parameter(spec.parameter))
    throw ConfigError(spec.parameter, "unknown sweep parameter");
  const bool want_table =
      std::find(spec.outputs.begin(), spec.outputs.end(), "phase_table") !=
      spec.outputs.end();

  std::vector<SweepPoint> points(spec.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < spec.values.size();
         i = next.fetch_add(1)) {
      points[i].value = spec.values[i];
      try {
        SimConfig cfg = spec.base;
        apply_parameter(cfg, spec.parameter, spec.values[i]);
        cfg.validate();
        points[i].report = gate_report(cfg, want_table);
      } catch (const std::exception& e) {
        points[i].error = e.what();
      }
    }
  };

  const std::size_t n_threads = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), spec.values.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return points;
}

}  // namespace qdm
