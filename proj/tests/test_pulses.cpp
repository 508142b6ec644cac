#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qdm/config.hpp"
#include "qdm/pulses.hpp"

using namespace qdm;
using Catch::Matchers::WithinAbs;

TEST_CASE("default envelopes evaluate the reference formulas", "[pulses]") {
  const SimConfig cfg;

  // peak values: 2 sqrt(pi)/t0 and 5 sqrt(pi)/(2 t0)
  REQUIRE_THAT(pulse_value(cfg.pulse2, 0.0), WithinAbs(3.5449077018110320, 1e-12));
  REQUIRE_THAT(pulse_value(cfg.pulse1, 0.0), WithinAbs(4.4311346272637901, 1e-12));

  // (0.05 * 20)^2 = 1, one e-folding down
  REQUIRE_THAT(pulse_value(cfg.pulse1, 20.0), WithinAbs(1.6301233304332305, 1e-12));

  // symmetric about the center
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 50.0);
  for (int i = 0; i < 50; ++i) {
    const double dt = dist(rng);
    REQUIRE(pulse_value(cfg.pulse1, dt) == pulse_value(cfg.pulse1, -dt));
  }
}

TEST_CASE("gaussian tail bound at four widths", "[pulses]") {
  const SimConfig cfg;
  for (const PulseShape* p : {&cfg.pulse1, &cfg.pulse2}) {
    const double t_edge = p->center + 4.0 * p->t0 / p->width_param;
    REQUIRE(pulse_value(*p, t_edge) <= 1.2e-7 * p->amplitude);
  }
}

TEST_CASE("pulse_area integrates the envelopes", "[pulses]") {
  const SimConfig cfg;

  SECTION("the narrow pulse carries area pi") {
    REQUIRE_THAT(pulse_area(cfg.pulse2, -10.0, 10.0), WithinAbs(M_PI, 1e-9));
  }

  SECTION("constant pulse over a rectangle") {
    const PulseShape flat = PulseShape::constant_pulse(2.5);
    REQUIRE_THAT(pulse_area(flat, 0.0, 8.0), WithinAbs(20.0, 1e-10));
  }

  SECTION("empty interval") {
    REQUIRE(pulse_area(cfg.pulse1, 3.0, 3.0) == 0.0);
    REQUIRE_THROWS_AS(pulse_area(cfg.pulse1, 3.0, 2.0), std::invalid_argument);
  }

  SECTION("additive over adjacent intervals") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-6.0, 6.0);
    for (int i = 0; i < 20; ++i) {
      double a = dist(rng), b = dist(rng), m = dist(rng);
      if (a > b) std::swap(a, b);
      m = std::clamp(m, a, b);
      const double whole = pulse_area(cfg.pulse2, a, b);
      const double split = pulse_area(cfg.pulse2, a, m) + pulse_area(cfg.pulse2, m, b);
      REQUIRE_THAT(split, WithinAbs(whole, 1e-10));
    }
  }
}

TEST_CASE("energy conversion between meV and rad/ps", "[pulses]") {
  // 2 meV / (0.6582119569 meV ps)
  REQUIRE_THAT(energy_to_angular_frequency(2.0, UnitMode::physical),
               WithinAbs(3.0385348959922548, 1e-12));
  REQUIRE(energy_to_angular_frequency(0.0, UnitMode::physical) == 0.0);
  REQUIRE(energy_to_angular_frequency(0.0, UnitMode::hbar_unity) == 0.0);
  REQUIRE_THAT(energy_to_angular_frequency(kHbarMeVPs, UnitMode::physical),
               WithinAbs(1.0, 1e-15));
  REQUIRE(energy_to_angular_frequency(2.0, UnitMode::hbar_unity) == 2.0);
}

TEST_CASE("pulse factories reject invalid shapes", "[pulses]") {
  REQUIRE_THROWS_AS(PulseShape::gaussian_pulse(-1.0, 2.0), ConfigError);
  REQUIRE_THROWS_AS(PulseShape::gaussian_pulse(1.0, 0.0), ConfigError);
  REQUIRE_THROWS_AS(PulseShape::gaussian_pulse(1.0, 2.0, 0.0, -1.0), ConfigError);
  REQUIRE_THROWS_AS(PulseShape::constant_pulse(-0.1), ConfigError);
}
