// oracles.hpp -- closed-form and brute-force reference solutions used to
// validate the integrator: the dark state of the tunneling-coupled lambda
// sector, the constant-drive three-level evolution, the two-level damping
// law, and a vectorized-superoperator matrix-exponential propagator.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qdm/basis.hpp"
#include "qdm/config.hpp"
#include "qdm/dynamics.hpp"

namespace qdm {

// ----------------------------- closed forms --------------------------------

/// Zero-eigenvalue superposition (tau, -omega1)/sqrt(tau^2 + omega1^2) of the
/// {ground, indirect} pair; it carries no trion component and is annihilated
/// by the ground-trion-indirect sector Hamiltonian.
inline CVec dark_state(double omega1, double tau) {
  const double n2 = tau * tau + omega1 * omega1;
  if (n2 == 0.0)
    throw std::domain_error("dark_state: omega1 and tau both zero leave the direction undefined");
  const double n = std::sqrt(n2);
  CVec d(2);
  d(0) = tau / n;
  d(1) = -omega1 / n;
  return d;
}

/// Constant drive omega coupling g-e, tunneling tau coupling e-i.
struct ThreeLevelParams {
  double tau = 0.0;    // rad/ps
  double omega = 0.0;  // rad/ps
  double t = 0.0;      // ps
};

/// State (g, e, i) reached from |g> after time t under the constant-drive
/// three-level chain, normalized:
///   g = (tau^2 + omega^2 cos(w t)) / w^2          w = sqrt(tau^2 + omega^2)
///   e = -i (omega / w) sin(w t)
///   i = tau omega (cos(w t) - 1) / w^2
inline CVec three_level_rabi(const ThreeLevelParams& p) {
  const double w2 = p.tau * p.tau + p.omega * p.omega;
  if (w2 == 0.0)
    throw std::invalid_argument("three_level_rabi: tau and omega both zero");
  const double w = std::sqrt(w2);
  const double c = std::cos(w * p.t);
  const double s = std::sin(w * p.t);
  CVec v(3);
  v(0) = (p.tau * p.tau + p.omega * p.omega * c) / w2;
  v(1) = cplx(0.0, -1.0) * (p.omega / w) * s;
  v(2) = p.tau * p.omega * (c - 1.0) / w2;
  return v;
}

/// Excited-state population of an isolated amplitude-damping channel,
/// exp(-gamma t). Requires gamma >= 0 and t >= 0.
inline double damped_two_level(double gamma, double t) {
  return std::exp(-gamma * t);
}

// --------------------- vectorized superoperator oracle ---------------------

/// Column-stacks rho into a kDim^2 vector, v(i + kDim*j) = rho(i, j).
inline CVec vec_density(const CMat& rho) {
  return Eigen::Map<const CVec>(rho.data(), rho.size());
}

inline CMat unvec_density(const CVec& v) {
  return Eigen::Map<const CMat>(v.data(), kDim, kDim);
}

namespace detail {

// Standard Kronecker product, kron(A,B)(p*n+q, r*n+s) = A(p,r) B(q,s).
inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index r = 0; r < a.cols(); ++r)
      out.block(p * b.rows(), r * b.cols(), b.rows(), b.cols()) = a(p, r) * b;
  return out;
}

}  // namespace detail

/// The kDim^2 x kDim^2 Lindbladian superoperator in column-stacking
/// convention: vec(d rho/dt) = L vec(rho) with
///   L = -i (I x H - H^T x I)
///       + sum_i gamma_i (conj(c) x c - 1/2 I x c+c - 1/2 (c+c)^T x I).
inline CMat build_superoperator(const CMat& h,
                                const std::vector<CollapseChannel>& channels) {
  const CMat id = CMat::Identity(kDim, kDim);
  const cplx mi(0.0, -1.0);
  CMat sup = mi * (detail::kron(id, h) - detail::kron(h.transpose(), id));
  for (const auto& ch : channels) {
    const CMat cdc = ch.op.adjoint() * ch.op;
    sup += ch.rate * (detail::kron(ch.op.conjugate(), ch.op) -
                      0.5 * detail::kron(id, cdc) -
                      0.5 * detail::kron(cdc.transpose(), id));
  }
  return sup;
}

/// Propagates rho over one interval of constant H: unstack(exp(L dt) vec(rho)).
/// The dense exponential is scaling-and-squaring Pade (Eigen MatrixFunctions).
inline CMat expm_propagate(const CMat& rho0, const CMat& h,
                           const std::vector<CollapseChannel>& channels,
                           double dt) {
  const CMat sup = build_superoperator(h, channels);
  const CMat propagator = (sup * dt).exp();
  return unvec_density((propagator * vec_density(rho0)).eval());
}

// ----------------------- staircase exponential driver ----------------------

namespace detail {

// exp(Z) v by scaled truncated Taylor application; cheap and accurate to
// ~1e-15 because each substep satisfies ||Z|| <= 0.5. Cross-checked against
// the dense Pade exponential in the test suite.
template <typename ApplyFn>
void expm_apply_scaled(const ApplyFn& apply_scaled_once, int squarings, CVec& v,
                       CVec& term, CVec& accum) {
  for (int rep = 0; rep < (1 << squarings); ++rep) {
    term = v;
    accum = v;
    for (int k = 1; k <= 64; ++k) {
      apply_scaled_once(term, 1.0 / k);
      accum += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-17 * accum.cwiseAbs().maxCoeff())
        break;
    }
    v = accum;
  }
}

}  // namespace detail

/// Exact (to ~1e-15 per level) propagation of the piecewise-constant pulse
/// staircase through the vectorized superoperator exponential. The
/// Lindbladian is split as L(t) = C0 + Omega1(t) C1 + Omega2(t) C2 with
/// constant sparse components, and each level applies exp(L dt) to vec(rho)
/// with the same drive values the segment-wise integrator sees.
class SuperopStaircase {
 public:
  explicit SuperopStaircase(const SimConfig& cfg) : cfg_(cfg) {
    if (cfg.pulse_staircase_dt <= 0.0)
      throw ConfigError("pulse_staircase_dt", "staircase oracle needs a staircase config");
    const auto channels = collapse_ops(cfg);
    const CMat h_tau = hamiltonian_from_drives(0.0, 0.0, cfg.tau_radps());
    const CMat h_om1 = hamiltonian_from_drives(1.0, 0.0, 0.0);
    const CMat h_om2 = hamiltonian_from_drives(0.0, 1.0, 0.0);
    c0_ = sparse_of(build_superoperator(h_tau, channels));
    c1_ = sparse_of(build_superoperator(h_om1, {}));
    c2_ = sparse_of(build_superoperator(h_om2, {}));
    norm0_ = one_norm(c0_);
    norm1_ = one_norm(c1_);
    norm2_ = one_norm(c2_);
    term_.resize(kDim * kDim);
    accum_.resize(kDim * kDim);
    scratch_.resize(kDim * kDim);
  }

  double stair() const { return cfg_.pulse_staircase_dt; }

  long n_levels() const {
    return std::llround(
        std::ceil((cfg_.t_end - cfg_.t_start) / cfg_.pulse_staircase_dt - 1e-9));
  }

  /// Advances vec(rho) across level number `level`.
  void step(CVec& v, long level) {
    const double t_mid =
        cfg_.t_start + (static_cast<double>(level) + 0.5) * stair();
    const double om1 = pulse_value(cfg_.pulse1, t_mid);
    const double om2 = pulse_value(cfg_.pulse2, t_mid);
    const double bound = (norm0_ + om1 * norm1_ + om2 * norm2_) * stair();
    const int squarings =
        bound > 0.5 ? static_cast<int>(std::ceil(std::log2(bound / 0.5))) : 0;
    const double h = stair() / static_cast<double>(1 << squarings);
    auto apply_once = [&](CVec& x, double over_k) {
      scratch_.setZero();
      apply_sparse(c0_, 1.0, x, scratch_);
      apply_sparse(c1_, om1, x, scratch_);
      apply_sparse(c2_, om2, x, scratch_);
      x = (h * over_k) * scratch_;
    };
    detail::expm_apply_scaled(apply_once, squarings, v, term_, accum_);
  }

 private:
  struct Entry {
    int row;
    int col;
    cplx val;
  };

  static std::vector<Entry> sparse_of(const CMat& m) {
    std::vector<Entry> out;
    for (int j = 0; j < m.cols(); ++j)
      for (int i = 0; i < m.rows(); ++i)
        if (m(i, j) != 0.0) out.push_back({i, j, m(i, j)});
    return out;
  }

  static double one_norm(const std::vector<Entry>& entries) {
    std::array<double, kDim * kDim> colsum{};
    for (const auto& e : entries) colsum[static_cast<std::size_t>(e.col)] += std::abs(e.val);
    double m = 0.0;
    for (double c : colsum) m = std::max(m, c);
    return m;
  }

  static void apply_sparse(const std::vector<Entry>& entries, double scale,
                           const CVec& in, CVec& out) {
    if (scale == 0.0) return;
    for (const auto& e : entries) out(e.row) += scale * e.val * in(e.col);
  }

  SimConfig cfg_;
  std::vector<Entry> c0_, c1_, c2_;
  double norm0_ = 0.0, norm1_ = 0.0, norm2_ = 0.0;
  CVec term_, accum_, scratch_;
};

}  // namespace qdm
