// pulses.hpp -- laser envelope shapes, pulse areas, and unit conversion.

#pragma once

#include <cmath>
#include <stdexcept>

#include "qdm/errors.hpp"

namespace qdm {

/// hbar in meV*ps (CODATA).
inline constexpr double kHbarMeVPs = 0.6582119569;

/// How quoted energies map onto angular frequencies.
///   physical:   value in meV, divided by hbar = 0.6582119569 meV*ps
///   hbar_unity: the quoted number is used as rad/ps directly
enum class UnitMode { physical, hbar_unity };

inline double energy_to_angular_frequency(double value, UnitMode mode) {
  return mode == UnitMode::physical ? value / kHbarMeVPs : value;
}

/// Rabi-frequency envelope. Gaussian kind evaluates
///   amplitude * exp(-(width_param*(t - center))^2 / t0^2),
/// constant kind is flat.
struct PulseShape {
  enum class Kind { gaussian, constant };

  Kind kind = Kind::gaussian;
  double amplitude = 0.0;    // rad/ps
  double width_param = 1.0;  // dimensionless factor on (t - center)
  double center = 0.0;       // ps
  double t0 = 1.0;           // ps

  static PulseShape gaussian_pulse(double amplitude, double width_param,
                                   double center = 0.0, double t0 = 1.0) {
    if (amplitude < 0.0) throw ConfigError("pulse.amplitude", "must be >= 0");
    if (width_param <= 0.0) throw ConfigError("pulse.width_param", "must be > 0");
    if (t0 <= 0.0) throw ConfigError("pulse.t0", "must be > 0");
    return PulseShape{Kind::gaussian, amplitude, width_param, center, t0};
  }

  static PulseShape constant_pulse(double amplitude) {
    if (amplitude < 0.0) throw ConfigError("pulse.amplitude", "must be >= 0");
    return PulseShape{Kind::constant, amplitude, 1.0, 0.0, 1.0};
  }
};

inline double pulse_value(const PulseShape& p, double t) {
  if (p.kind == PulseShape::Kind::constant) return p.amplitude;
  const double arg = p.width_param * (t - p.center) / p.t0;
  return p.amplitude * std::exp(-arg * arg);
}

namespace detail {

// Adaptive Simpson on a smooth integrand.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Integral of the envelope over [t_start, t_end], adaptive Simpson with
/// absolute tolerance 1e-12.
inline double pulse_area(const PulseShape& p, double t_start, double t_end) {
  if (t_start > t_end) {
    throw std::invalid_argument("pulse_area: t_start must not exceed t_end");
  }
  if (t_start == t_end) return 0.0;
  auto f = [&p](double t) { return pulse_value(p, t); };
  const double fa = f(t_start);
  const double fb = f(t_end);
  const double fm = f(0.5 * (t_start + t_end));
  const double whole = (t_end - t_start) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson(f, t_start, t_end, fa, fm, fb, whole, 1e-12,
                                  48);
}

}  // namespace qdm
