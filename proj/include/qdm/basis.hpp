// basis.hpp -- the 10-level effective basis of the quantum dot molecule and
// the elementary operators built on it.
//
// Level layout (dot-1 occupation left of the comma, dot-2 right):
//   0..3  ground spin states  |s1, s2>
//   4,5   dot-1 trion with spectator dot-2 spin
//   6,7   indirect exciton after the dot-1 hole tunneled into dot 2
//   8     dot-2 trion (dot-1 spin up)
//   9     indirect exciton after the dot-2 hole tunneled into dot 1

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <string_view>

namespace qdm {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr int kDim = 10;

enum class BasisState : int {
  G_uu = 0,  // |up, up>
  G_ud = 1,  // |up, down>      (the state the gate phase-flips)
  G_du = 2,  // |down, up>
  G_dd = 3,  // |down, down>
  T1_u = 4,  // |down-up-Dn, up>    dot-1 trion
  T1_d = 5,  // |down-up-Dn, down>
  I1_u = 6,  // |down-up, Dn-up>    hole in dot 2
  I1_d = 7,  // |down-up, Dn-down>
  T2   = 8,  // |up, down-up-Dn>    dot-2 trion
  I2   = 9,  // |up-Dn, down-up>    hole in dot 1
};

constexpr int index_of(BasisState s) { return static_cast<int>(s); }

constexpr std::array<BasisState, kDim> build_basis() {
  return {BasisState::G_uu, BasisState::G_ud, BasisState::G_du,
          BasisState::G_dd, BasisState::T1_u, BasisState::T1_d,
          BasisState::I1_u, BasisState::I1_d, BasisState::T2,
          BasisState::I2};
}

constexpr std::string_view label(BasisState s) {
  constexpr std::string_view names[kDim] = {"G_uu", "G_ud", "G_du", "G_dd",
                                            "T1_u", "T1_d", "I1_u", "I1_d",
                                            "T2",   "I2"};
  return names[index_of(s)];
}

inline std::optional<BasisState> state_from_label(std::string_view name) {
  for (BasisState s : build_basis()) {
    if (label(s) == name) return s;
  }
  return std::nullopt;
}

/// |to><from| as a dense kDim x kDim matrix.
inline CMat transition_op(BasisState from, BasisState to) {
  CMat m = CMat::Zero(kDim, kDim);
  m(index_of(to), index_of(from)) = 1.0;
  return m;
}

/// Unit basis vector |s>.
inline CVec basis_vector(BasisState s) {
  CVec v = CVec::Zero(kDim);
  v(index_of(s)) = 1.0;
  return v;
}

/// One spontaneous-decay channel: rate in ps^-1 and its lowering operator.
struct CollapseChannel {
  double rate = 0.0;  // ps^-1
  CMat op;            // kDim x kDim lowering operator c_i
};

// Lowering operators of the four physical decay channels. Each maps excited
// manifolds onto the ground manifold and annihilates every ground state.

/// Dot-1 trion recombination: T1_s -> G_ds, spectator spin preserved.
inline CMat collapse_trion1() {
  return transition_op(BasisState::T1_u, BasisState::G_du) +
         transition_op(BasisState::T1_d, BasisState::G_dd);
}

/// Dot-2 trion recombination: T2 -> G_ud.
inline CMat collapse_trion2() {
  return transition_op(BasisState::T2, BasisState::G_ud);
}

/// Indirect-exciton recombination in the dot-1 sector: I1_s -> G_ds.
inline CMat collapse_indirect1() {
  return transition_op(BasisState::I1_u, BasisState::G_du) +
         transition_op(BasisState::I1_d, BasisState::G_dd);
}

/// Indirect-exciton recombination in the dot-2 sector: I2 -> G_ud.
inline CMat collapse_indirect2() {
  return transition_op(BasisState::I2, BasisState::G_ud);
}

}  // namespace qdm
