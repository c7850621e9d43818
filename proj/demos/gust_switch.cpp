// A triangular gust pushes the deck energy over the threshold and back;
// torsion is only fed while the switch sits at -1.
#include <cstdio>

#include "bridge/truebeam.hpp"

using namespace bridge;
using namespace bridge::truebeam;

int main() {
  TrueBeamConfig cfg;
  cfg.modes_M = 3;
  cfg.nl = cubic(0.5);
  cfg.damping_delta = 0.05;
  cfg.threshold_Ebar = 1.0;
  cfg.forcing.knots = {{0.0, 0.0}, {2.0, 2.0}, {4.0, 0.0}};
  cfg.forcing.p = {1.0};
  cfg.forcing.q = {0.0, 0.5};

  const auto tr = integrate_truebeam(cfg, ModalState::zero(3), 12.0);
  const EnergyMeter meter(cfg, 3);
  for (const auto& e : tr.events) std::printf("switch -> %+d at t = %.9f\n", e.direction, e.t_switch);

  std::printf("\n%6s %7s %12s %12s %12s\n", "t", "switch", "a1", "b2", "energy");
  double next = 0.0;
  for (const auto& s : tr.samples) {
    if (s.t + 1e-12 < next) continue;
    std::printf("%6.2f %+7d %12.5e %12.5e %12.5e\n", s.t, s.switch_value, s.a[0], s.b[1], meter(s));
    next += 0.5;
  }
}
