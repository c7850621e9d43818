// Blow-up time of w'''' + k w'' + w + w^3 = 0 from (1,0,0,0) as k varies.
// Prints a small table; near k = 4 the oscillating phase stretches out.
#include <cstdio>
#include <string>

#include "bridge/ode4.hpp"

using namespace bridge;

int main() {
  IntegratorConfig cfg;
  cfg.t_end = 400.0;
  std::printf("%6s %12s %10s %6s\n", "k", "R_est", "R_err", "zeros");
  for (double k = 0.0; k <= 4.0 + 1e-9; k += 0.25) {
    const auto tr = ode4::integrate(ode4::canonical(k, cubic(1.0)), State4{0, 1, 0, 0, 0}, cfg);
    const auto rep = ode4::detect_blowup(tr, cfg);
    if (rep.blew_up) {
      std::printf("%6.2f %12.6f %10.2e %6zu\n", k, rep.R_est, rep.R_err, rep.zeros.size());
    } else {
      std::printf("%6.2f %12s %10s %6zu  (%s)\n", k, "-", "-", rep.zeros.size(),
                  std::string(to_string(tr.termination)).c_str());
    }
  }
}
