// Adiabatic passage in isolation: start in |down,down>, keep the fast pulse
// off, and watch the population ride the dark state into the indirect
// exciton and back while the trion stays almost empty.

#include <cstdio>

#include "qdm/dynamics.hpp"
#include "qdm/oracles.hpp"

int main() {
  qdm::SimConfig cfg;
  cfg.gamma1 = cfg.gamma2 = 0.0;
  cfg.pulse2 = qdm::PulseShape::constant_pulse(0.0);
  cfg.initial_state = qdm::basis_vector(qdm::BasisState::G_dd);
  cfg.sample_stride = 10000;  // print every 10 ps

  const double tau = cfg.tau_radps();
  std::printf("%8s %10s %10s %10s %12s\n", "t_ps", "pop_G_dd", "pop_T1_d",
              "pop_I1_d", "dark_weight");
  qdm::evolve(cfg, [&](double t, const qdm::CMat& rho) {
    // instantaneous dark state of the G_dd / T1_d / I1_d sector
    const qdm::CVec d = qdm::dark_state(qdm::drive1(cfg, t), tau);
    qdm::CVec embedded = qdm::CVec::Zero(qdm::kDim);
    embedded(qdm::index_of(qdm::BasisState::G_dd)) = d(0);
    embedded(qdm::index_of(qdm::BasisState::I1_d)) = d(1);
    const double weight = (embedded.adjoint() * rho * embedded)(0).real();
    std::printf("%8.1f %10.6f %10.2e %10.6f %12.6f\n", t,
                rho(3, 3).real(), rho(5, 5).real(), rho(7, 7).real(), weight);
  });
  return 0;
}
