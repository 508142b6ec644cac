// io.hpp -- JSON configuration loading (strict, reference defaults for
// missing fields), CSV emitters for time series and sweeps, gate-report
// JSON, and the run manifest written alongside every output.

#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdm/config.hpp"
#include "qdm/dynamics.hpp"
#include "qdm/errors.hpp"
#include "qdm/metrics.hpp"
#include "qdm/sweep.hpp"
#include "qdm/version.hpp"

namespace qdm {

using nlohmann::json;

namespace detail {

// 17 significant digits: doubles survive a CSV round trip losslessly.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void require_keys(const json& j, const std::set<std::string>& known,
                         const std::string& scope) {
  for (const auto& item : j.items()) {
    if (!known.count(item.key()))
      throw ConfigError(scope.empty() ? item.key() : scope + "." + item.key(),
                        "unknown field");
  }
}

inline double number_at(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(key, "expected a number");
  return j.at(key).get<double>();
}

inline PulseShape pulse_from_json(const json& j, const std::string& scope,
                                  const PulseShape& fallback) {
  require_keys(j, {"kind", "amplitude", "width_param", "center", "t0"}, scope);
  PulseShape p = fallback;
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian") p.kind = PulseShape::Kind::gaussian;
    else if (kind == "constant") p.kind = PulseShape::Kind::constant;
    else throw ConfigError(scope + ".kind", "must be \"gaussian\" or \"constant\"");
  }
  p.amplitude = number_at(j, "amplitude", p.amplitude);
  p.width_param = number_at(j, "width_param", p.width_param);
  p.center = number_at(j, "center", p.center);
  p.t0 = number_at(j, "t0", p.t0);
  if (p.amplitude < 0.0) throw ConfigError(scope + ".amplitude", "must be >= 0");
  if (p.kind == PulseShape::Kind::gaussian && (p.width_param <= 0.0 || p.t0 <= 0.0))
    throw ConfigError(scope, "gaussian pulse needs width_param > 0 and t0 > 0");
  return p;
}

inline json pulse_to_json(const PulseShape& p) {
  return json{{"kind", p.kind == PulseShape::Kind::gaussian ? "gaussian" : "constant"},
              {"amplitude", p.amplitude},
              {"width_param", p.width_param},
              {"center", p.center},
              {"t0", p.t0}};
}

inline cplx cplx_from_json(const json& j, const std::string& scope) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw ConfigError(scope, "expected a number or an [re, im] pair");
}

}  // namespace detail

/// Builds a SimConfig from parsed JSON. Missing fields take the reference
/// defaults; unknown fields and invariant violations raise ConfigError
/// naming the field.
inline SimConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  detail::require_keys(
      j,
      {"unit_mode", "tau", "gamma1_per_ns", "gamma2_per_ns", "gamma_ind_per_ns",
       "channel_attachment", "pulse1", "pulse2", "t_start", "t_end", "dt",
       "integrator", "adaptive_tol", "sample_stride", "initial_state",
       "initial_density_matrix", "pulse_staircase_dt", "resolved"},
      "");

  SimConfig cfg;
  if (j.contains("unit_mode")) {
    const std::string m = j.at("unit_mode").get<std::string>();
    if (m == "physical") cfg.unit_mode = UnitMode::physical;
    else if (m == "hbar_unity") cfg.unit_mode = UnitMode::hbar_unity;
    else throw ConfigError("unit_mode", "must be \"physical\" or \"hbar_unity\"");
  }
  cfg.tau = detail::number_at(j, "tau", cfg.tau);
  cfg.gamma1 = detail::number_at(j, "gamma1_per_ns", cfg.gamma1 * 1e3) * 1e-3;
  cfg.gamma2 = detail::number_at(j, "gamma2_per_ns", cfg.gamma2 * 1e3) * 1e-3;
  cfg.gamma_ind = detail::number_at(j, "gamma_ind_per_ns", cfg.gamma_ind * 1e3) * 1e-3;
  if (j.contains("channel_attachment")) {
    const std::string a = j.at("channel_attachment").get<std::string>();
    if (a == "trion") cfg.channel_attachment = ChannelAttachment::trion;
    else if (a == "indirect") cfg.channel_attachment = ChannelAttachment::indirect;
    else throw ConfigError("channel_attachment", "must be \"trion\" or \"indirect\"");
  }
  if (j.contains("pulse1"))
    cfg.pulse1 = detail::pulse_from_json(j.at("pulse1"), "pulse1", cfg.pulse1);
  if (j.contains("pulse2"))
    cfg.pulse2 = detail::pulse_from_json(j.at("pulse2"), "pulse2", cfg.pulse2);
  cfg.t_start = detail::number_at(j, "t_start", cfg.t_start);
  cfg.t_end = detail::number_at(j, "t_end", cfg.t_end);
  cfg.dt = detail::number_at(j, "dt", cfg.dt);
  if (j.contains("integrator")) {
    const std::string i = j.at("integrator").get<std::string>();
    if (i == "rk4_fixed") cfg.integrator = IntegratorKind::rk4_fixed;
    else if (i == "rk45_adaptive") cfg.integrator = IntegratorKind::rk45_adaptive;
    else throw ConfigError("integrator", "must be \"rk4_fixed\" or \"rk45_adaptive\"");
  }
  cfg.adaptive_tol = detail::number_at(j, "adaptive_tol", cfg.adaptive_tol);
  if (j.contains("sample_stride")) {
    if (!j.at("sample_stride").is_number_integer())
      throw ConfigError("sample_stride", "expected an integer");
    cfg.sample_stride = j.at("sample_stride").get<int>();
  }
  cfg.pulse_staircase_dt =
      detail::number_at(j, "pulse_staircase_dt", cfg.pulse_staircase_dt);

  if (j.contains("initial_state")) {
    const json& s = j.at("initial_state");
    if (s.is_string()) {
      const std::string name = s.get<std::string>();
      if (name == "psi0") {
        cfg.initial_state = ground_superposition();
      } else if (auto st = state_from_label(name)) {
        cfg.initial_state = basis_vector(*st);
      } else {
        throw ConfigError("initial_state", "unknown state name \"" + name + "\"");
      }
    } else if (s.is_array() && s.size() == kDim) {
      CVec v(kDim);
      for (int k = 0; k < kDim; ++k)
        v(k) = detail::cplx_from_json(s[static_cast<std::size_t>(k)], "initial_state");
      cfg.initial_state = v;
    } else {
      throw ConfigError("initial_state", "expected a state name or 10 amplitudes");
    }
  }
  if (j.contains("initial_density_matrix")) {
    const json& m = j.at("initial_density_matrix");
    if (!m.is_array() || m.size() != kDim)
      throw ConfigError("initial_density_matrix", "expected 10 rows");
    CMat rho(kDim, kDim);
    for (int r = 0; r < kDim; ++r) {
      const json& row = m[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != kDim)
        throw ConfigError("initial_density_matrix", "expected 10 columns per row");
      for (int c = 0; c < kDim; ++c)
        rho(r, c) = detail::cplx_from_json(row[static_cast<std::size_t>(c)],
                                           "initial_density_matrix");
    }
    cfg.initial_rho = rho;
  }

  cfg.validate();
  return cfg;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("parse failure: ") + e.what());
  }
  return config_from_json(j);
}

/// Fully resolved echo of a config: every default materialized, plus a
/// "resolved" block with the internal rad/ps and ps^-1 values. Feeding the
/// echo back through load_config reproduces the run.
inline json config_echo_json(const SimConfig& cfg) {
  json j;
  j["unit_mode"] = cfg.unit_mode == UnitMode::physical ? "physical" : "hbar_unity";
  j["tau"] = cfg.tau;
  j["gamma1_per_ns"] = cfg.gamma1 * 1e3;
  j["gamma2_per_ns"] = cfg.gamma2 * 1e3;
  j["gamma_ind_per_ns"] = cfg.gamma_ind * 1e3;
  j["channel_attachment"] =
      cfg.channel_attachment == ChannelAttachment::trion ? "trion" : "indirect";
  j["pulse1"] = detail::pulse_to_json(cfg.pulse1);
  j["pulse2"] = detail::pulse_to_json(cfg.pulse2);
  j["t_start"] = cfg.t_start;
  j["t_end"] = cfg.t_end;
  j["dt"] = cfg.dt;
  j["integrator"] =
      cfg.integrator == IntegratorKind::rk4_fixed ? "rk4_fixed" : "rk45_adaptive";
  j["adaptive_tol"] = cfg.adaptive_tol;
  j["sample_stride"] = cfg.sample_stride;
  j["pulse_staircase_dt"] = cfg.pulse_staircase_dt;
  if (cfg.initial_rho.size() > 0) {
    json m = json::array();
    for (int r = 0; r < kDim; ++r) {
      json row = json::array();
      for (int c = 0; c < kDim; ++c)
        row.push_back({cfg.initial_rho(r, c).real(), cfg.initial_rho(r, c).imag()});
      m.push_back(row);
    }
    j["initial_density_matrix"] = m;
  } else {
    json s = json::array();
    for (int k = 0; k < kDim; ++k)
      s.push_back({cfg.initial_state(k).real(), cfg.initial_state(k).imag()});
    j["initial_state"] = s;
  }
  j["resolved"] = {{"tau_radps", cfg.tau_radps()},
                   {"gamma1_per_ps", cfg.gamma1},
                   {"gamma2_per_ps", cfg.gamma2},
                   {"gamma_ind_per_ps", cfg.gamma_ind},
                   {"hbar_meV_ps", kHbarMeVPs}};
  return j;
}

// ------------------------------- reports -----------------------------------

inline json gate_report_json(const GateReport& rep) {
  json j;
  if (std::isnan(rep.fidelity)) j["fidelity"] = nullptr;
  else j["fidelity"] = rep.fidelity;
  if (rep.has_phase_table) {
    json t = json::array();
    for (const cplx& z : rep.phase_table) t.push_back({z.real(), z.imag()});
    j["phase_table"] = t;
  }
  if (std::isnan(rep.gate_time)) j["gate_time_ps"] = nullptr;
  else j["gate_time_ps"] = rep.gate_time;
  j["gate_time_threshold"] = rep.gate_time_threshold;
  j["trace_dev_max"] = rep.trace_dev_max;
  j["min_eig"] = rep.min_eig;
  j["unit_mode"] = rep.unit_mode == UnitMode::physical ? "physical" : "hbar_unity";
  return j;
}

// ----------------------------- CSV emitters --------------------------------

inline constexpr const char* kTimeSeriesHeader =
    "t_ps,omega1,omega2,pop_G_uu,pop_G_ud,pop_G_du,pop_G_dd,pop_T1_u,"
    "pop_T1_d,pop_I1_u,pop_I1_d,pop_T2,pop_I2,trace_dev,purity";

/// Locale-independent CSV, LF line endings, 17 significant digits. A failure
/// time, when given, appends a marker row after the retained samples.
inline void write_timeseries_csv(std::ostream& out, const TimeSeries& ts,
                                 std::optional<double> failure_t = std::nullopt) {
  out << kTimeSeriesHeader << "\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out << detail::fmt17(ts.times[i]) << ',' << detail::fmt17(ts.omega1[i]) << ','
        << detail::fmt17(ts.omega2[i]);
    for (int k = 0; k < kDim; ++k)
      out << ',' << detail::fmt17(ts.populations[static_cast<std::size_t>(k)][i]);
    out << ',' << detail::fmt17(ts.trace_dev[i]) << ',' << detail::fmt17(ts.purity[i])
        << "\n";
  }
  if (failure_t)
    out << "# integration_failure,t_ps=" << detail::fmt17(*failure_t) << "\n";
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "value,fidelity,trace_dev_max,min_eig\n";
  for (const auto& p : points) {
    out << detail::fmt17(p.value) << ',';
    if (p.report) {
      out << detail::fmt17(p.report->fidelity) << ','
          << detail::fmt17(p.report->trace_dev_max) << ','
          << detail::fmt17(p.report->min_eig);
    } else {
      out << ",,";
    }
    out << "\n";
  }
}

inline json sweep_summary_json(const SweepSpec& spec,
                               const std::vector<SweepPoint>& points) {
  json j;
  j["parameter"] = spec.parameter;
  json pts = json::array();
  for (const auto& p : points) {
    json entry;
    entry["value"] = p.value;
    if (p.report) entry["report"] = gate_report_json(*p.report);
    else entry["error"] = p.error;
    pts.push_back(entry);
  }
  j["points"] = pts;
  return j;
}

// ------------------------------ sweep spec ---------------------------------

inline SweepSpec sweep_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("spec", "top level must be an object");
  detail::require_keys(j, {"base", "parameter", "values", "outputs"}, "");
  SweepSpec spec;
  if (j.contains("base")) spec.base = config_from_json(j.at("base"));
  if (!j.contains("parameter") || !j.at("parameter").is_string())
    throw ConfigError("parameter", "sweep spec needs a parameter name");
  spec.parameter = j.at("parameter").get<std::string>();
  if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty())
    throw ConfigError("values", "sweep spec needs a non-empty values array");
  for (const auto& v : j.at("values")) {
    if (!v.is_number()) throw ConfigError("values", "entries must be numbers");
    spec.values.push_back(v.get<double>());
  }
  if (j.contains("outputs")) {
    spec.outputs.clear();
    for (const auto& o : j.at("outputs")) spec.outputs.push_back(o.get<std::string>());
  }
  return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("spec", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("spec", std::string("parse failure: ") + e.what());
  }
  return sweep_spec_from_json(j);
}

// ------------------------------- manifest ----------------------------------

struct RunManifest {
  json config_echo;
  std::string tool_version;
  std::string command;
  std::vector<std::string> output_paths;
};

inline json manifest_json(const RunManifest& m) {
  return json{{"tool_version", m.tool_version},
              {"command", m.command},
              {"config_echo", m.config_echo},
              {"output_paths", m.output_paths}};
}

inline void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path);
  out << manifest_json(m).dump(2) << "\n";
}

}  // namespace qdm
