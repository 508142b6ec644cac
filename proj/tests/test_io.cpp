#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "qdm/io.hpp"

using namespace qdm;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

TEST_CASE("empty JSON yields the full default configuration", "[io]") {
  const SimConfig cfg = config_from_json(json::object());
  REQUIRE(cfg.unit_mode == UnitMode::physical);
  REQUIRE(cfg.tau == 2.0);
  REQUIRE(cfg.gamma1 == 0.001);
  REQUIRE(cfg.gamma2 == 0.001);
  REQUIRE(cfg.gamma_ind == 0.0);
  REQUIRE(cfg.channel_attachment == ChannelAttachment::trion);
  REQUIRE(cfg.t_start == -60.0);
  REQUIRE(cfg.t_end == 60.0);
  REQUIRE(cfg.dt == 0.001);
  REQUIRE(cfg.sample_stride == 100);
  REQUIRE(cfg.integrator == IntegratorKind::rk4_fixed);
  REQUIRE_THAT(cfg.pulse1.amplitude, WithinAbs(4.4311346272637901, 1e-12));
  REQUIRE(cfg.pulse1.width_param == 0.05);
  REQUIRE_THAT(cfg.pulse2.amplitude, WithinAbs(3.5449077018110320, 1e-12));
  REQUIRE(cfg.pulse2.width_param == 2.0);
  REQUIRE(cfg.pulse1.t0 == 1.0);
  REQUIRE(cfg.initial_state(0) == cplx(0.5, 0.0));
  REQUIRE(cfg.initial_state(9) == cplx(0.0, 0.0));
}

TEST_CASE("configuration errors name the offending field", "[io]") {
  SECTION("negative decay rate") {
    try {
      config_from_json(json{{"gamma2_per_ns", -1.0}});
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE_THAT(e.what(), ContainsSubstring("gamma2"));
    }
  }

  SECTION("unknown top-level field") {
    try {
      config_from_json(json{{"gamme2_per_ns", 1.0}});
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE_THAT(e.what(), ContainsSubstring("gamme2_per_ns"));
      REQUIRE_THAT(e.what(), ContainsSubstring("unknown"));
    }
  }

  SECTION("unknown pulse field") {
    REQUIRE_THROWS_AS(
        config_from_json(json{{"pulse1", {{"amp", 1.0}}}}), ConfigError);
  }

  SECTION("bad enum strings") {
    REQUIRE_THROWS_AS(config_from_json(json{{"unit_mode", "si"}}), ConfigError);
    REQUIRE_THROWS_AS(config_from_json(json{{"integrator", "euler"}}), ConfigError);
    REQUIRE_THROWS_AS(config_from_json(json{{"channel_attachment", "both"}}),
                      ConfigError);
  }

  SECTION("window and step validation") {
    REQUIRE_THROWS_AS(config_from_json(json{{"t_start", 60.0}, {"t_end", -60.0}}),
                      ConfigError);
    REQUIRE_THROWS_AS(config_from_json(json{{"dt", 0.0}}), ConfigError);
    REQUIRE_THROWS_AS(config_from_json(json{{"sample_stride", 0}}), ConfigError);
  }
}

TEST_CASE("hbar_unity reads tau as rad/ps", "[io]") {
  const SimConfig cfg = config_from_json(json{{"unit_mode", "hbar_unity"}});
  REQUIRE(cfg.tau_radps() == 2.0);
  const SimConfig phys = config_from_json(json::object());
  REQUIRE_THAT(phys.tau_radps(), WithinAbs(3.0385348959922548, 1e-12));
}

TEST_CASE("initial state parsing", "[io]") {
  SECTION("named states") {
    REQUIRE(config_from_json(json{{"initial_state", "psi0"}}).initial_state(2) ==
            cplx(0.5, 0.0));
    const SimConfig cfg = config_from_json(json{{"initial_state", "G_dd"}});
    REQUIRE(cfg.initial_state(3) == cplx(1.0, 0.0));
    REQUIRE_THROWS_AS(config_from_json(json{{"initial_state", "G_xx"}}), ConfigError);
  }

  SECTION("amplitude array with [re, im] pairs") {
    json arr = json::array();
    for (int k = 0; k < 10; ++k) arr.push_back(json::array({k == 1 ? 1.0 : 0.0, 0.0}));
    const SimConfig cfg = config_from_json(json{{"initial_state", arr}});
    REQUIRE(cfg.initial_state(1) == cplx(1.0, 0.0));
  }

  SECTION("unnormalized array is rejected") {
    json arr = json::array();
    for (int k = 0; k < 10; ++k) arr.push_back(0.5);
    REQUIRE_THROWS_AS(config_from_json(json{{"initial_state", arr}}), ConfigError);
  }

  SECTION("density matrix input") {
    json m = json::array();
    for (int r = 0; r < 10; ++r) {
      json row = json::array();
      for (int c = 0; c < 10; ++c) row.push_back((r == c && r < 2) ? 0.5 : 0.0);
      m.push_back(row);
    }
    const SimConfig cfg = config_from_json(json{{"initial_density_matrix", m}});
    REQUIRE(cfg.initial_rho(1, 1) == cplx(0.5, 0.0));
    m[0][0] = 0.9;  // trace 1.4
    REQUIRE_THROWS_AS(config_from_json(json{{"initial_density_matrix", m}}),
                      ConfigError);
    m[0][0] = 0.5;
    m[0][1] = 0.25;  // no conjugate partner
    REQUIRE_THROWS_AS(config_from_json(json{{"initial_density_matrix", m}}),
                      ConfigError);
  }
}

TEST_CASE("the config echo reloads to the same resolved run", "[io]") {
  json j;
  j["unit_mode"] = "hbar_unity";
  j["tau"] = 1.3;
  j["gamma2_per_ns"] = 0.25;
  j["channel_attachment"] = "indirect";
  j["pulse2"] = {{"kind", "constant"}, {"amplitude", 7.0}};
  j["t_start"] = -3.0;
  j["t_end"] = 3.0;
  j["dt"] = 0.0005;
  j["pulse_staircase_dt"] = 0.001;
  j["initial_state"] = "G_ud";
  const SimConfig cfg = config_from_json(j);

  const json echo = config_echo_json(cfg);
  REQUIRE(echo.contains("resolved"));
  REQUIRE_THAT(echo["resolved"]["tau_radps"].get<double>(), WithinAbs(1.3, 1e-15));

  const SimConfig back = config_from_json(echo);
  REQUIRE(back.tau_radps() == cfg.tau_radps());
  REQUIRE(back.gamma2 == cfg.gamma2);
  REQUIRE(back.channel_attachment == cfg.channel_attachment);
  REQUIRE(back.pulse2.kind == PulseShape::Kind::constant);
  REQUIRE(back.pulse2.amplitude == 7.0);
  REQUIRE(back.pulse_staircase_dt == cfg.pulse_staircase_dt);
  REQUIRE((back.initial_state - cfg.initial_state).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("time-series CSV format", "[io]") {
  TimeSeries ts;
  ts.times = {0.0, 0.1};
  ts.omega1 = {1.0, 2.0};
  ts.omega2 = {0.5, 0.25};
  for (int k = 0; k < kDim; ++k)
    ts.populations[static_cast<std::size_t>(k)] = {k * 0.01, k * 0.02};
  ts.trace_dev = {1e-12, 2e-12};
  ts.purity = {1.0, 0.625};

  std::ostringstream out;
  write_timeseries_csv(out, ts);
  const std::string text = out.str();

  REQUIRE_THAT(text, ContainsSubstring(
      "t_ps,omega1,omega2,pop_G_uu,pop_G_ud,pop_G_du,pop_G_dd,pop_T1_u,"
      "pop_T1_d,pop_I1_u,pop_I1_d,pop_T2,pop_I2,trace_dev,purity\n"));
  REQUIRE(text.find("\r") == std::string::npos);
  REQUIRE(text.find(";") == std::string::npos);

  // three header-plus-two-rows lines, 15 columns each
  std::istringstream lines(text);
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    REQUIRE(std::count(line.begin(), line.end(), ',') == 14);
    ++rows;
  }
  REQUIRE(rows == 3);

  // 17 significant digits survive a round trip
  std::ostringstream rt;
  write_timeseries_csv(rt, ts);
  const std::string row = rt.str().substr(rt.str().find('\n') + 1);
  double t_back = -1.0, om1_back = -1.0;
  REQUIRE(std::sscanf(row.c_str(), "%lf,%lf", &t_back, &om1_back) == 2);
  REQUIRE(t_back == 0.0);
  REQUIRE(om1_back == 1.0);

  std::ostringstream failed;
  write_timeseries_csv(failed, ts, 0.05);
  REQUIRE_THAT(failed.str(), ContainsSubstring("# integration_failure,t_ps="));
}

TEST_CASE("sweep CSV leaves gaps for failed points", "[io]") {
  std::vector<SweepPoint> points(2);
  points[0].value = 0.0;
  GateReport rep;
  rep.fidelity = 0.5;
  rep.trace_dev_max = 1e-10;
  rep.min_eig = -1e-12;
  points[0].report = rep;
  points[1].value = 1.0;
  points[1].error = "boom";

  std::ostringstream out;
  write_sweep_csv(out, points);
  REQUIRE_THAT(out.str(), ContainsSubstring("value,fidelity,trace_dev_max,min_eig\n"));
  REQUIRE_THAT(out.str(), ContainsSubstring("1,,,\n"));

  SweepSpec spec;
  spec.parameter = "gamma2_per_ns";
  const json summary = sweep_summary_json(spec, points);
  REQUIRE(summary["points"][1]["error"] == "boom");
  REQUIRE_THAT(summary["points"][0]["report"]["fidelity"].get<double>(),
               WithinAbs(0.5, 1e-15));
}

TEST_CASE("sweep spec JSON parsing", "[io]") {
  json j;
  j["parameter"] = "gamma2_per_ns";
  j["values"] = {0.0, 0.25, 0.5};
  j["base"] = {{"t_end", 1.0}, {"t_start", 0.0}};
  const SweepSpec spec = sweep_spec_from_json(j);
  REQUIRE(spec.parameter == "gamma2_per_ns");
  REQUIRE(spec.values.size() == 3);
  REQUIRE(spec.base.t_end == 1.0);

  j["values"] = json::array();
  REQUIRE_THROWS_AS(sweep_spec_from_json(j), ConfigError);
  j.erase("values");
  REQUIRE_THROWS_AS(sweep_spec_from_json(j), ConfigError);
}

TEST_CASE("manifest JSON carries the reproduction recipe", "[io]") {
  RunManifest m;
  m.config_echo = config_echo_json(default_config());
  m.tool_version = "qdmgate 0.1.0";
  m.command = "simulate";
  m.output_paths = {"series.csv", "gate_report.json"};
  const json j = manifest_json(m);
  REQUIRE(j["tool_version"] == "qdmgate 0.1.0");
  REQUIRE(j["command"] == "simulate");
  REQUIRE(j["output_paths"].size() == 2);
  REQUIRE(j["config_echo"]["dt"] == 0.001);

  // the echoed config itself reloads
  REQUIRE_NOTHROW(config_from_json(j["config_echo"]));
}

TEST_CASE("gate report JSON", "[io]") {
  GateReport rep;
  rep.fidelity = 0.98;
  rep.gate_time = 85.8;
  rep.trace_dev_max = 1e-11;
  rep.min_eig = -1e-10;
  rep.unit_mode = UnitMode::hbar_unity;
  rep.has_phase_table = true;
  rep.phase_table = {cplx(1, 0), cplx(-1, 0), cplx(1, 0), cplx(1, 0)};
  const json j = gate_report_json(rep);
  REQUIRE_THAT(j["fidelity"].get<double>(), WithinAbs(0.98, 1e-15));
  REQUIRE(j["unit_mode"] == "hbar_unity");
  REQUIRE(j["phase_table"][1][0] == -1.0);

  GateReport empty;
  const json je = gate_report_json(empty);
  REQUIRE(je["fidelity"].is_null());
  REQUIRE_FALSE(je.contains("phase_table"));
}
