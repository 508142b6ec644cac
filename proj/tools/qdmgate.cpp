// qdmgate -- command-line front end: simulate / verify / gate-table / sweep.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qdm/dynamics.hpp"
#include "qdm/io.hpp"
#include "qdm/metrics.hpp"
#include "qdm/oracles.hpp"
#include "qdm/sweep.hpp"
#include "qdm/verify.hpp"
#include "qdm/version.hpp"

namespace {

using qdm::json;

std::string manifest_path_for(const std::string& output_path) {
  std::filesystem::path p(output_path);
  p.replace_extension();
  return p.string() + ".manifest.json";
}

qdm::SimConfig load_with_overrides(const std::string& config_path,
                                   const std::string& unit_mode_flag) {
  qdm::SimConfig cfg =
      config_path.empty() ? qdm::default_config() : qdm::load_config(config_path);
  if (!unit_mode_flag.empty()) {
    if (unit_mode_flag == "physical") cfg.unit_mode = qdm::UnitMode::physical;
    else if (unit_mode_flag == "hbar_unity") cfg.unit_mode = qdm::UnitMode::hbar_unity;
    else throw qdm::ConfigError("unit_mode", "must be \"physical\" or \"hbar_unity\"");
  }
  return cfg;
}

void emit_manifest(const qdm::SimConfig& cfg, const std::string& command,
                   const std::vector<std::string>& outputs) {
  qdm::RunManifest m;
  m.config_echo = qdm::config_echo_json(cfg);
  m.tool_version = std::string(qdm::kToolName) + " " + qdm::kToolVersion;
  m.command = command;
  m.output_paths = outputs;
  if (!outputs.empty()) qdm::write_manifest(manifest_path_for(outputs.front()), m);
}

int cmd_simulate(const std::string& config_path, const std::string& out_csv,
                 const std::string& out_json, const std::string& unit_mode) {
  const qdm::SimConfig cfg = load_with_overrides(config_path, unit_mode);

  // Accumulate samples through the observer so a partial series survives an
  // integration failure.
  qdm::TimeSeries series;
  auto observer = [&](double t, const qdm::CMat& rho) {
    series.times.push_back(t);
    series.omega1.push_back(qdm::drive1(cfg, t));
    series.omega2.push_back(qdm::drive2(cfg, t));
    for (int k = 0; k < qdm::kDim; ++k)
      series.populations[static_cast<std::size_t>(k)].push_back(rho(k, k).real());
    series.trace_dev.push_back(std::abs(rho.trace() - qdm::cplx(1.0, 0.0)));
    series.purity.push_back(rho.squaredNorm());
  };

  std::optional<double> failure_t;
  qdm::GateReport rep;
  try {
    const qdm::EvolveResult run = qdm::evolve(cfg, observer);
    rep.unit_mode = cfg.unit_mode;
    rep.trace_dev_max = run.trace_dev_max;
    rep.min_eig = run.min_eig;
    try {
      rep.gate_time = qdm::gate_time(run.series, rep.gate_time_threshold);
    } catch (const std::domain_error&) {
    }
    if (cfg.initial_rho.size() == 0) {
      bool ground = true;
      for (int k = 4; k < qdm::kDim; ++k)
        if (std::abs(cfg.initial_state(k)) > 1e-12) ground = false;
      if (ground)
        rep.fidelity =
            qdm::state_fidelity(run.final_rho, qdm::ideal_output(cfg.initial_state));
    }
    rep.phase_table = qdm::phase_table(cfg);
    rep.has_phase_table = true;
  } catch (const qdm::IntegrationError& e) {
    failure_t = e.t_fail();
    std::cerr << "integration failure: " << e.what() << "\n";
  }

  {
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_csv << "\n";
      return 1;
    }
    qdm::write_timeseries_csv(out, series, failure_t);
  }
  if (!failure_t) {
    std::ofstream out(out_json, std::ios::binary);
    out << qdm::gate_report_json(rep).dump(2) << "\n";
  }
  emit_manifest(cfg, "simulate", {out_csv, out_json});
  if (failure_t) return 1;
  std::printf("wrote %s (%zu samples) and %s\n", out_csv.c_str(), series.size(),
              out_json.c_str());
  return 0;
}

int cmd_verify(double dt_override, bool negate_tau) {
  qdm::VerifyOptions opt;
  opt.dt_override = dt_override;
  opt.negate_tau = negate_tau;
  bool all_pass = true;
  for (const qdm::CheckResult& r : qdm::run_verification(opt)) {
    std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}

int cmd_gate_table(const std::string& config_path, const std::string& out_json,
                   const std::string& unit_mode, bool analytic) {
  json out;
  if (analytic) {
    out["analytic"] = {{"phase_table", {{1.0, 0.0}, {-1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}}}};
    std::printf("analytic phase table: (1, -1, 1, 1)\n");
  } else {
    const qdm::SimConfig base = load_with_overrides(config_path, unit_mode);
    std::vector<qdm::UnitMode> modes;
    if (!unit_mode.empty()) modes = {base.unit_mode};
    else modes = {qdm::UnitMode::physical, qdm::UnitMode::hbar_unity};
    for (qdm::UnitMode m : modes) {
      qdm::SimConfig cfg = base;
      cfg.unit_mode = m;
      const qdm::GateReport rep = qdm::gate_report(cfg, true);
      const char* name = m == qdm::UnitMode::physical ? "physical" : "hbar_unity";
      out[name] = qdm::gate_report_json(rep);
      std::printf("%s: fidelity %.6f, table", name, rep.fidelity);
      for (const qdm::cplx& z : rep.phase_table)
        std::printf("  (%.4f%+.4fi)", z.real(), z.imag());
      std::printf("\n");
    }
    emit_manifest(base, "gate-table", {out_json});
  }
  std::ofstream f(out_json, std::ios::binary);
  f << out.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_csv,
              const std::string& out_json, const std::string& unit_mode) {
  qdm::SweepSpec spec = qdm::load_sweep_spec(spec_path);
  if (!unit_mode.empty()) {
    spec.base.unit_mode = unit_mode == "physical" ? qdm::UnitMode::physical
                                                  : qdm::UnitMode::hbar_unity;
  }
  const std::vector<qdm::SweepPoint> points = qdm::run_sweep(spec);
  {
    std::ofstream out(out_csv, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_csv << "\n";
      return 1;
    }
    qdm::write_sweep_csv(out, points);
  }
  {
    std::ofstream out(out_json, std::ios::binary);
    out << qdm::sweep_summary_json(spec, points).dump(2) << "\n";
  }
  emit_manifest(spec.base, "sweep", {out_csv, out_json});
  int failures = 0;
  for (const auto& p : points) {
    if (!p.report) {
      ++failures;
      std::fprintf(stderr, "point %.6g failed: %s\n", p.value, p.error.c_str());
    }
  }
  std::printf("sweep of %s over %zu values -> %s\n", spec.parameter.c_str(),
              points.size(), out_csv.c_str());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lindblad simulator for the tunneling-mediated controlled-phase "
               "gate in a quantum dot molecule"};
  app.set_version_flag("--version",
                       std::string(qdm::kToolName) + " " + qdm::kToolVersion);
  app.require_subcommand(1);

  std::string config_path, out_csv = "series.csv", report_json = "gate_report.json";
  std::string unit_mode;

  auto* sim = app.add_subcommand("simulate", "integrate the gate and write the "
                                             "time-series CSV and gate report");
  sim->add_option("--config", config_path, "JSON configuration (defaults when omitted)");
  sim->add_option("--out", out_csv, "time-series CSV path");
  sim->add_option("--report", report_json, "gate report JSON path");
  sim->add_option("--unit-mode", unit_mode, "override: physical | hbar_unity");

  auto* ver = app.add_subcommand("verify", "run the oracle self-check suite");
  double verify_dt = 0.0;
  bool negate_tau = false;
  ver->add_option("--dt", verify_dt, "override the checks' step size (ps)");
  ver->add_flag("--debug-negate-tau", negate_tau,
                "corrupt the integrator-side tau sign (sensitivity canary)");

  std::string table_json = "gate_table.json";
  bool analytic = false;
  auto* tab = app.add_subcommand("gate-table", "phase table and fidelity, both "
                                               "unit modes unless one is pinned");
  tab->add_option("--config", config_path, "JSON configuration");
  tab->add_option("--out", table_json, "output JSON path");
  tab->add_option("--unit-mode", unit_mode, "pin one unit mode");
  tab->add_flag("--analytic", analytic, "print the ideal table, no dynamics");

  std::string spec_path, sweep_csv = "sweep.csv", sweep_json = "sweep_summary.json";
  auto* swp = app.add_subcommand("sweep", "scan one parameter, one gate run per value");
  swp->add_option("--spec", spec_path, "sweep spec JSON")->required();
  swp->add_option("--out", sweep_csv, "sweep CSV path");
  swp->add_option("--summary", sweep_json, "summary JSON path");
  swp->add_option("--unit-mode", unit_mode, "override: physical | hbar_unity");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_csv, report_json, unit_mode);
    if (ver->parsed()) return cmd_verify(verify_dt, negate_tau);
    if (tab->parsed()) return cmd_gate_table(config_path, table_json, unit_mode, analytic);
    if (swp->parsed()) return cmd_sweep(spec_path, sweep_csv, sweep_json, unit_mode);
  } catch (const qdm::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
