#pragma once

// Flutter speed, wind-energy input and the energy bookkeeping that drives the
// vertical/torsional switch.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bridge/errors.hpp"
#include "bridge/nonlin.hpp"
#include "bridge/quadrature.hpp"

namespace bridge::energy {

struct FlutterParams {
  double half_width_l = 1.0;
  double gyration_r = std::numbers::sqrt2 / 2.0;
  double omega_B = 1.0;
  double omega_T = 2.0;
  double alpha_mass = 0.02;

  void validate() const {
    if (!(half_width_l > 0.0) || !(gyration_r > 0.0) || !(omega_B > 0.0) || !(omega_T > 0.0) ||
        !(alpha_mass > 0.0)) {
      throw InvalidParameter("flutter: all parameters must be > 0");
    }
  }
};

/// V_c = sqrt(2 r^2 l^2 / (2 r^2 + l^2) * (omega_T^2 - omega_B^2) / alpha).
inline double flutter_speed(const FlutterParams& p) {
  p.validate();
  const double r2 = p.gyration_r * p.gyration_r, l2 = p.half_width_l * p.half_width_l;
  const double dw = p.omega_T * p.omega_T - p.omega_B * p.omega_B;
  if (dw < 0.0) throw InvalidParameter("flutter: omega_T < omega_B gives no flutter threshold");
  return std::sqrt(2.0 * r2 * l2 / (2.0 * r2 + l2) * dw / p.alpha_mass);
}

/// Integral of phi(x1, x2, t)^2 over the region at time t.
template <class Phi>
quad::Estimate gust_energy(Phi&& phi, double t, const quad::Rect& region, std::size_t quadrature_n = 16) {
  if (quadrature_n < 8) throw InvalidParameter("gust_energy: quadrature_n must be >= 8");
  return quad::tensor_gauss_estimate(
      [&](double x1, double x2) {
        const double v = phi(x1, x2, t);
        return v * v;
      },
      region, quadrature_n);
}

struct EnergyLedger {
  double total_E = 0.0;
  double threshold_Ebar = 1.0;
  std::vector<double> schedule;  // E_1 < ... < E_mu = Ebar
  int switch_value = 1;

  void validate() const {
    if (!(threshold_Ebar > 0.0)) throw InvalidParameter("ledger: threshold must be > 0");
    for (std::size_t i = 1; i < schedule.size(); ++i) {
      if (!(schedule[i] > schedule[i - 1])) throw InvalidParameter("ledger: schedule must be strictly ascending");
    }
    if (!schedule.empty() && schedule.back() != threshold_Ebar) {
      throw InvalidParameter("ledger: last threshold must equal Ebar");
    }
  }
};

/// +1 if E <= Ebar, -1 otherwise.
inline int switch_state(double total_E, double threshold_Ebar) { return total_E <= threshold_Ebar ? 1 : -1; }

inline int switch_state(const EnergyLedger& ledger) { return switch_state(ledger.total_E, ledger.threshold_Ebar); }

inline EnergyLedger make_ledger(double total_E, double threshold_Ebar, std::vector<double> schedule) {
  EnergyLedger l{total_E, threshold_Ebar, std::move(schedule), 1};
  if (l.schedule.empty()) l.schedule.push_back(threshold_Ebar);
  l.validate();
  l.switch_value = switch_state(l);
  return l;
}

struct ModeActivity {
  int active_modes = 1;
  bool torsional_active = false;
};

inline ModeActivity active_mode_count(const EnergyLedger& ledger) {
  ledger.validate();
  ModeActivity a;
  a.active_modes = 1 + static_cast<int>(std::count_if(ledger.schedule.begin(), ledger.schedule.end(),
                                                      [&](double e) { return e < ledger.total_E; }));
  a.torsional_active = ledger.total_E > ledger.threshold_Ebar;
  return a;
}

struct NetInputParams {
  double weight_w = 1.0;
  double H_w = 1.0;
  double EA_stiff = 1.0;
  double length_L = 1.0;
  double damp_C = 1.0;

  void validate() const {
    if (!(weight_w > 0.0) || !(H_w > 0.0) || !(EA_stiff > 0.0) || !(length_L > 0.0) || !(damp_C > 0.0)) {
      throw InvalidParameter("net input: all parameters must be > 0");
    }
  }
};

/// A = (w^2/H_w^2)(EA/L) int eta - C int eta^2, eta sampled uniformly on [0, L].
inline double net_energy_input(std::span<const double> eta, const NetInputParams& p) {
  p.validate();
  if (eta.size() < 2) throw InvalidParameter("net input: need at least 2 samples");
  const double h = p.length_L / static_cast<double>(eta.size() - 1);
  std::vector<double> sq(eta.size());
  std::transform(eta.begin(), eta.end(), sq.begin(), [](double v) { return v * v; });
  const double i1 = quad::simpson_uniform(eta, h);
  const double i2 = quad::simpson_uniform(sq, h);
  return p.weight_w * p.weight_w / (p.H_w * p.H_w) * p.EA_stiff / p.length_L * i1 - p.damp_C * i2;
}

/// Gamma_m = int_0^L (sqrt(1 + (m pi/L)^2 a^2 cos^2(m pi x/L)) - 1) dx, adaptive
/// Gauss-Kronrod to `tol`.
inline quad::Estimate elongation_mode(double a_m, int m, double L, double tol = 1e-10) {
  if (m < 1) throw InvalidParameter("elongation: m must be >= 1");
  if (!(L > 0.0)) throw InvalidParameter("elongation: L must be > 0");
  const double k = m * std::numbers::pi / L;
  const double c = k * k * a_m * a_m;
  auto g = [&](double x) {
    const double cs = std::cos(k * x);
    const double q = c * cs * cs;
    // sqrt(1+q) - 1 without cancellation
    return q / (std::sqrt(1.0 + q) + 1.0);
  };
  double err = 0.0;
  // Integrate one half-period per panel so each panel is smooth and short.
  double total = 0.0;
  const double panel = L / m;
  for (int j = 0; j < m; ++j) {
    double e = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, j * panel, (j + 1) * panel, 15, tol,
                                                                          &e);
    err += e;
  }
  return {total, err};
}

/// Second derivatives and value of a plate displacement at one point.
struct PlatePoint {
  double u = 0.0;
  double u11 = 0.0, u22 = 0.0, u12 = 0.0;
};

/// int_omega [ (Delta u)^2/2 + (sigma - 1) det D^2 u + u_t^2/2 + F(u) ].
/// `u_field(x1, x2)` returns a PlatePoint, `ut_field(x1, x2)` the velocity.
template <class UField, class UtField>
quad::Estimate local_energy(UField&& u_field, UtField&& ut_field, const Nonlinearity& nl, double sigma,
                            const quad::Rect& region, std::size_t n = 24) {
  return quad::tensor_gauss_estimate(
      [&](double x1, double x2) {
        const PlatePoint p = u_field(x1, x2);
        const double lap = p.u11 + p.u22;
        const double det = p.u11 * p.u22 - p.u12 * p.u12;
        const double v = ut_field(x1, x2);
        return 0.5 * lap * lap + (sigma - 1.0) * det + 0.5 * v * v + nl.antiderivative(p.u);
      },
      region, n);
}

/// int_omega (sqrt(1 + |grad u|^2) - 1); `grad(x1, x2)` returns {u_x1, u_x2}.
template <class Grad>
quad::Estimate stretching_energy(Grad&& grad, const quad::Rect& region, std::size_t n = 24) {
  return quad::tensor_gauss_estimate(
      [&](double x1, double x2) {
        const std::array<double, 2> g = grad(x1, x2);
        const double q = g[0] * g[0] + g[1] * g[1];
        return q / (std::sqrt(1.0 + q) + 1.0);
      },
      region, n);
}

}  // namespace bridge::energy
