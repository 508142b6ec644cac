#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qdm/oracles.hpp"
#include "qdm/verify.hpp"

using namespace qdm;
using Catch::Matchers::WithinAbs;

TEST_CASE("dark state limits and normalization", "[oracles]") {
  SECTION("pulse off leaves the bare ground state") {
    const CVec d = dark_state(0.0, 1.7);
    REQUIRE(d(0) == cplx(1.0, 0.0));
    REQUIRE(d(1) == cplx(0.0, 0.0));
  }

  SECTION("equal weights") {
    const CVec d = dark_state(2.0, 2.0);
    REQUIRE_THAT(d(0).real(), WithinAbs(0.7071067811865475, 1e-12));
    REQUIRE_THAT(d(1).real(), WithinAbs(-0.7071067811865475, 1e-12));
  }

  SECTION("undefined direction") {
    REQUIRE_THROWS_AS(dark_state(0.0, 0.0), std::domain_error);
  }
}

TEST_CASE("dark state is a zero eigenvector of the sector Hamiltonian", "[oracles]") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.01, 8.0);
  for (int i = 0; i < 40; ++i) {
    const double om = dist(rng), tau = dist(rng);
    const CVec d = dark_state(om, tau);
    REQUIRE_THAT(d.norm(), WithinAbs(1.0, 1e-14));
    CMat h = CMat::Zero(3, 3);
    h(1, 0) = h(0, 1) = om;
    h(2, 1) = h(1, 2) = tau;
    CVec embedded(3);
    embedded << d(0), 0.0, d(1);
    REQUIRE((h * embedded).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("three-level law at the reference points", "[oracles]") {
  SECTION("initial condition") {
    const CVec v = three_level_rabi({2.0, 10.0, 0.0});
    REQUIRE(v(0) == cplx(1.0, 0.0));
    REQUIRE(v(1) == cplx(0.0, 0.0));
    REQUIRE(v(2) == cplx(0.0, 0.0));
  }

  SECTION("half period of tau = 2, omega = 10") {
    const double t1 = M_PI / std::sqrt(104.0);
    const CVec v = three_level_rabi({2.0, 10.0, t1});
    REQUIRE_THAT(v(0).real(), WithinAbs(-12.0 / 13.0, 1e-12));
    REQUIRE(std::abs(v(1)) < 1e-12);
    REQUIRE_THAT(v(2).real(), WithinAbs(-5.0 / 13.0, 1e-12));
  }

  SECTION("strong drive returns minus the initial state") {
    const double tau = 0.01, om = 10.0;
    const double t1 = M_PI / std::sqrt(tau * tau + om * om);
    const CVec v = three_level_rabi({tau, om, t1});
    REQUIRE_THAT(v(0).real(), WithinAbs(-1.0, 1e-4));
  }

  SECTION("degenerate parameters") {
    REQUIRE_THROWS_AS(three_level_rabi({0.0, 0.0, 1.0}), std::invalid_argument);
  }
}

TEST_CASE("three-level law against the eigendecomposition propagator", "[oracles]") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(0.05, 9.0);
  std::uniform_real_distribution<double> tdist(0.0, 3.0);
  for (int i = 0; i < 40; ++i) {
    const double tau = dist(rng), om = dist(rng), t = tdist(rng);
    CMat h = CMat::Zero(3, 3);
    h(1, 0) = h(0, 1) = om;
    h(2, 1) = h(1, 2) = tau;
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    CVec phases(3);
    for (int k = 0; k < 3; ++k)
      phases(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * t));
    CVec start(3);
    start << 1.0, 0.0, 0.0;
    const CVec expected =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * start;

    const CVec got = three_level_rabi({tau, om, t});
    REQUIRE((got - expected).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE_THAT(got.norm(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("ground amplitude at the half period is (tau^2-om^2)/(tau^2+om^2)",
          "[oracles]") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(0.05, 9.0);
  for (int i = 0; i < 30; ++i) {
    const double tau = dist(rng), om = dist(rng);
    const double w2 = tau * tau + om * om;
    const CVec v = three_level_rabi({tau, om, M_PI / std::sqrt(w2)});
    REQUIRE_THAT(v(0).real(), WithinAbs((tau * tau - om * om) / w2, 1e-12));
    REQUIRE(std::abs(v(0).imag()) < 1e-15);
  }
}

TEST_CASE("damping law reference values", "[oracles]") {
  REQUIRE(damped_two_level(0.001, 0.0) == 1.0);
  REQUIRE_THAT(damped_two_level(0.001, 1000.0), WithinAbs(0.3678794411714423, 1e-14));
  REQUIRE(damped_two_level(0.0, 5432.1) == 1.0);
}

TEST_CASE("vectorization uses column stacking", "[oracles]") {
  CMat rho(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) rho(i, j) = cplx(i, j);
  const CVec v = vec_density(rho);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) REQUIRE(v(i + kDim * j) == rho(i, j));
  REQUIRE((unvec_density(v) - rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("superoperator action equals the Lindblad map", "[oracles]") {
  std::mt19937 rng(17);
  std::normal_distribution<double> dist(0.0, 1.0);
  SimConfig cfg;
  cfg.gamma_ind = 0.0004;

  CMat a(kDim, kDim);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) a(i, j) = cplx(dist(rng), dist(rng));
  CMat rho = a * a.adjoint();
  rho /= rho.trace().real();

  for (double t : {-3.0, 0.05}) {
    const CMat sup = build_superoperator(assemble_hamiltonian(t, cfg), collapse_ops(cfg));
    const CMat via_sup = unvec_density((sup * vec_density(rho)).eval());
    const CMat direct = lindblad_rhs(rho, t, cfg);
    REQUIRE((via_sup - direct).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("expm_propagate limits and conservation laws", "[oracles]") {
  SimConfig cfg;
  cfg.unit_mode = UnitMode::hbar_unity;
  const CMat h = assemble_hamiltonian(0.0, cfg);
  const auto channels = collapse_ops(cfg);
  const CMat rho0 = ground_superposition() * ground_superposition().adjoint();

  SECTION("zero-time propagator is the identity") {
    const CMat out = expm_propagate(rho0, h, channels, 0.0);
    REQUIRE((out - rho0).cwiseAbs().maxCoeff() < 1e-14);
  }

  SECTION("free decay matches the damping law") {
    SimConfig decay = cfg;
    decay.tau = 0.0;
    decay.gamma1 = 0.0;
    decay.gamma2 = 0.02;
    const CMat rho_t2 =
        basis_vector(BasisState::T2) * basis_vector(BasisState::T2).adjoint();
    const CMat out = expm_propagate(rho_t2, CMat::Zero(kDim, kDim),
                                    collapse_ops(decay), 37.0);
    const int e = index_of(BasisState::T2);
    const int g = index_of(BasisState::G_ud);
    REQUIRE_THAT(out(e, e).real(), WithinAbs(damped_two_level(0.02, 37.0), 1e-12));
    REQUIRE_THAT(out(g, g).real(), WithinAbs(1.0 - damped_two_level(0.02, 37.0), 1e-12));
  }

  SECTION("trace and hermiticity preserved per step") {
    std::mt19937 rng(29);
    std::normal_distribution<double> dist(0.0, 1.0);
    CMat a(kDim, kDim);
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) a(i, j) = cplx(dist(rng), dist(rng));
    CMat rho = a * a.adjoint();
    rho /= rho.trace().real();
    SimConfig strong = cfg;
    strong.gamma1 = 0.3;
    strong.gamma2 = 0.5;
    const CMat out = expm_propagate(rho, h, collapse_ops(strong), 0.7);
    REQUIRE_THAT(out.trace().real(), WithinAbs(1.0, 1e-12));
    REQUIRE(std::abs(out.trace().imag()) < 1e-13);
    REQUIRE((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("closed system agrees with the unitary eigendecomposition") {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const double t = 0.9;
    CVec phases(kDim);
    for (int k = 0; k < kDim; ++k)
      phases(k) = std::exp(cplx(0.0, -es.eigenvalues()(k) * t));
    const CMat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const CMat expected = u * rho0 * u.adjoint();
    const CMat got = expm_propagate(rho0, h, {}, t);
    REQUIRE((got - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("staircase driver matches the dense exponential step by step",
          "[oracles]") {
  SimConfig cfg;
  cfg.t_start = -0.5;
  cfg.t_end = 0.5;
  cfg.pulse_staircase_dt = 0.05;
  cfg.dt = 0.05;

  SuperopStaircase oracle(cfg);
  CVec v = vec_density(CMat(cfg.initial_state * cfg.initial_state.adjoint()));
  CMat rho = cfg.initial_state * cfg.initial_state.adjoint();
  const auto channels = collapse_ops(cfg);
  for (long level = 0; level < oracle.n_levels(); ++level) {
    const double t_mid = cfg.t_start + (static_cast<double>(level) + 0.5) * 0.05;
    rho = expm_propagate(rho, assemble_hamiltonian(t_mid, cfg), channels, 0.05);
    oracle.step(v, level);
    REQUIRE((unvec_density(v) - rho).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("segment-wise RK4 tracks the staircase exponential", "[oracles]") {
  const CheckResult r = check_expm_equivalence();
  INFO(r.detail);
  REQUIRE(r.pass);
}
