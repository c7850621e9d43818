// Navier modes of the square plate sharing sqrt(lambda) = 625, and the
// flutter speed of a deck whose half width doubles.
#include <cmath>
#include <cstdio>

#include "bridge/energy.hpp"
#include "bridge/plate.hpp"

using namespace bridge;

int main() {
  const auto geom = plate::PlateGeom::navier_square();
  std::printf("modes with m^2 + n^2 = 625:\n");
  for (const auto& md : plate::navier_square_search(625)) {
    const auto r = plate::verify_mode(geom, md, plate::BcKind::navier, 64);
    std::printf("  (m,n) = (%2d,%2d)  lambda = %.0f  residual = %.2e\n", md.m_index, md.n_index, md.lambda, r.max());
  }

  energy::FlutterParams p;
  p.omega_B = 0.8;
  p.omega_T = 1.3;
  p.alpha_mass = 0.02;
  std::printf("\n%8s %10s %12s\n", "l", "r", "V_c");
  for (double l : {3.0, 6.0, 12.0}) {
    p.half_width_l = l;
    p.gyration_r = l / std::sqrt(2.0);
    std::printf("%8.2f %10.4f %12.6f\n", l, p.gyration_r, energy::flutter_speed(p));
  }
}
