#pragma once

// Coupled vertical/torsional second-order systems:
//
//   McKenna (trigonometric)  (m l^2/3) theta'' = l cos(theta) [f(y - l sin theta) - f(y + l sin theta)]
//                            m y''             = -[f(y - l sin theta) + f(y + l sin theta)]
//   small-angle reduction    x'' + w2 f(y+x) - w2 f(y-x) = 0,   y'' + f(y+x) + f(y-x) = 0
//   blow-up system           x'' - f(y-x) + beta (y+x) = 0,     y'' - f(y-x) + delta (y+x) = 0
//
// The blow-up system reduces through w = y - x, z = y + x to
//   w'''' + (beta + delta) w'' + 2 (delta - beta) f(w) = 0,   w'' = -(delta - beta) z.
// Also: the limit linear classifier and the closed-form linear torsion model
//   I [theta'' + 2 zeta omega theta' + omega^2 theta] = A theta' + B theta.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "bridge/errors.hpp"
#include "bridge/nonlin.hpp"
#include "bridge/ode4.hpp"
#include "bridge/trajectory.hpp"

namespace bridge::systems {

struct McKennaParams {
  double mass_m = 1.0;
  double half_width_l = 1.0;
  double omega2 = 3.0;

  void validate() const {
    if (!(mass_m > 0.0)) throw InvalidParameter("McKenna: mass must be > 0");
    if (!(half_width_l > 0.0)) throw InvalidParameter("McKenna: half width must be > 0");
  }
};

struct MiosystParams {
  double beta = -1.0;
  double delta = 1.0;

  /// beta < delta <= -beta, the regime of the oscillatory blow-up theorem.
  bool theorem_regime() const { return beta < delta && delta <= -beta; }
};

namespace detail {

inline std::array<double, 2> xy(const Vec4& v) { return {v[0], v[2]}; }

}  // namespace detail

/// Accelerations (theta'', y'') of the trigonometric McKenna system.
inline std::array<double, 2> coupled_accel(const McKennaParams& p, const Nonlinearity& nl, const Vec4& s) {
  const double th = s[0], y = s[2];
  const double ls = p.half_width_l * std::sin(th);
  const double fm = nl.f(y - ls), fp = nl.f(y + ls);
  return {3.0 / (p.mass_m * p.half_width_l) * std::cos(th) * (fm - fp), -(fm + fp) / p.mass_m};
}

/// x holds the angle theta. Events are the zeros of theta.
inline SysTrajectory integrate_coupled(const McKennaParams& p, const Nonlinearity& nl, const SysState& s0,
                                       const IntegratorConfig& cfg) {
  p.validate();
  auto rhs = [&](double, const Vec4& s, Vec4& d) {
    const auto a = coupled_accel(p, nl, s);
    d = {s[1], a[0], s[3], a[1]};
  };
  return run_dense(rhs, s0, cfg, 0, detail::xy);
}

/// Residual of the expanded cubic form of the McKenna system
///   (m l^2/3) theta'' + 2 l^2 cos sin (1 + 3 eps y^2 + eps l^2 sin^2) = 0
///   m y'' + 2 (1 + 3 eps l^2 sin^2) y + 2 eps y^3 = 0
/// with theta'', y'' taken from the trigonometric right-hand side.
inline double cubic_expansion_residual(const McKennaParams& p, double eps, const SysState& s) {
  const auto nl = cubic(eps);
  const auto a = coupled_accel(p, nl, s.vec());
  const double l = p.half_width_l, m = p.mass_m;
  const double sn = std::sin(s.x), cs = std::cos(s.x), y = s.y;
  const double r1 = m * l * l / 3.0 * a[0] + 2.0 * l * l * cs * sn * (1.0 + 3.0 * eps * y * y + eps * l * l * sn * sn);
  const double r2 = m * a[1] + 2.0 * (1.0 + 3.0 * eps * l * l * sn * sn) * y + 2.0 * eps * y * y * y;
  return std::max(std::abs(r1), std::abs(r2));
}

inline SysTrajectory integrate_truesystem(double omega2, const Nonlinearity& nl, const SysState& s0,
                                          const IntegratorConfig& cfg) {
  auto rhs = [omega2, &nl](double, const Vec4& s, Vec4& d) {
    const double x = s[0], y = s[2];
    const double fp = nl.f(y + x), fm = nl.f(y - x);
    d = {s[1], -omega2 * (fp - fm), s[3], -(fp + fm)};
  };
  return run_dense(rhs, s0, cfg, 0, detail::xy);
}

inline std::array<double, 2> miosyst_accel(const MiosystParams& p, const Nonlinearity& nl, const Vec4& s) {
  const double x = s[0], y = s[2];
  const double fw = nl.f(y - x);
  return {fw - p.beta * (y + x), fw - p.delta * (y + x)};
}

inline SysTrajectory integrate_miosyst(const MiosystParams& p, const Nonlinearity& nl, const SysState& s0,
                                       const IntegratorConfig& cfg) {
  if (nl.kind() != NonlinKind::cubic && nl.kind() != NonlinKind::mckenna_cubic) {
    throw InvalidParameter("miosyst: nonlinearity must be cubic or mckenna_cubic");
  }
  auto rhs = [&](double, const Vec4& s, Vec4& d) {
    const auto a = miosyst_accel(p, nl, s);
    d = {s[1], a[0], s[3], a[1]};
  };
  return run_dense(rhs, s0, cfg, 0, detail::xy);
}

/// (x, x', y, y') -> (w, w', w'', w''') with w = y - x, w'' = -(delta - beta)(y + x).
inline Vec4 reduce_state(const MiosystParams& p, const Vec4& s) {
  const double g = p.delta - p.beta;
  return {s[2] - s[0], s[3] - s[1], -g * (s[2] + s[0]), -g * (s[3] + s[1])};
}

/// Maps a blow-up-system trajectory to the fourth-order variables. Dense
/// segments map through the same linear change; events become the zeros of w.
inline Trajectory to_fourth_order(const MiosystParams& p, const SysTrajectory& sys) {
  if (p.delta == p.beta) throw InvalidParameter("to_fourth_order: degenerate delta == beta");
  Trajectory out;
  out.termination = sys.termination;
  out.event_component = 0;
  out.samples.reserve(sys.samples.size());
  for (const auto& s : sys.samples) out.samples.push_back(State4::from(s.t, reduce_state(p, s.vec())));
  out.segments.reserve(sys.segments.size());
  for (const auto& seg : sys.segments) {
    rk::DenseSegment<Vec4> m;
    m.t0 = seg.t0;
    m.h = seg.h;
    for (std::size_t i = 0; i < m.coef.size(); ++i) m.coef[i] = reduce_state(p, seg.coef[i]);
    out.segments.push_back(m);
  }
  for (std::size_t i = 0; i < out.segments.size(); ++i) {
    const double a = out.samples[i].w, b = out.samples[i + 1].w;
    if (bridge::detail::crosses_zero(a, b)) {
      out.events.push_back(b == 0.0 ? out.samples[i + 1].t : bridge::detail::locate_zero(out.segments[i], 0));
    }
  }
  return out;
}

/// w'''' + (beta + delta) w'' + 2 (delta - beta) f(w), with w'''' obtained from
/// the system accelerations through the change of variables.
inline double reduction_residual(const MiosystParams& p, const Nonlinearity& nl, const SysState& s) {
  const auto a = miosyst_accel(p, nl, s.vec());
  const double g = p.delta - p.beta;
  const Vec4 r = reduce_state(p, s.vec());
  const double w4 = -g * (a[0] + a[1]);
  return w4 + (p.beta + p.delta) * r[2] + 2.0 * g * nl.f(r[0]);
}

struct FirstIntegralTerms {
  double kinetic = 0.0, cross = 0.0, potential = 0.0, curvature = 0.0;

  double value() const { return kinetic + cross + potential + curvature; }
  double scale() const {
    return std::abs(kinetic) + std::abs(cross) + std::abs(potential) + std::abs(curvature);
  }
};

/// E = (beta+delta)/2 (w')^2 + w' w''' + 2 (delta-beta) F(w) - (w'')^2 / 2.
inline FirstIntegralTerms first_integral_terms(const MiosystParams& p, const Nonlinearity& nl, const State4& s) {
  if (p.delta == p.beta) throw InvalidParameter("first_integral_E: degenerate delta == beta");
  FirstIntegralTerms e;
  e.kinetic = 0.5 * (p.beta + p.delta) * s.w1 * s.w1;
  e.cross = s.w1 * s.w3;
  e.potential = 2.0 * (p.delta - p.beta) * nl.antiderivative(s.w);
  e.curvature = -0.5 * s.w2 * s.w2;
  return e;
}

inline double first_integral_E(const MiosystParams& p, const Nonlinearity& nl, const State4& s) {
  return first_integral_terms(p, nl, s).value();
}

/// (3 beta - delta) x0 y1 + (3 delta - beta) x1 y0 > (beta + delta)(x0 x1 + y0 y1).
inline bool check_initial_oscill(const MiosystParams& p, const SysState& s0) {
  const double x0 = s0.x, x1 = s0.xd, y0 = s0.y, y1 = s0.yd;
  return (3.0 * p.beta - p.delta) * x0 * y1 + (3.0 * p.delta - p.beta) * x1 * y0 >
         (p.beta + p.delta) * (x0 * x1 + y0 * y1);
}

enum class F0Regime { oscillatory, double_root, real_exponential };

inline std::string_view to_string(F0Regime r) {
  switch (r) {
    case F0Regime::oscillatory: return "oscillatory";
    case F0Regime::double_root: return "double_root";
    case F0Regime::real_exponential: return "real_exponential";
  }
  return "?";
}

struct F0Classification {
  double A_sum = 0.0, B_diff = 0.0, Delta_disc = 0.0;
  F0Regime regime = F0Regime::oscillatory;
};

/// Shape of the solutions to the eps = 0 limit
///   x'' + (beta+1) x + (beta-1) y = 0,  y'' + (delta+1) x + (delta-1) y = 0.
inline F0Classification classify_f0(double beta, double delta) {
  F0Classification c;
  c.A_sum = beta + delta;
  c.B_diff = 2.0 * (delta - beta);
  c.Delta_disc = (beta + delta) * (beta + delta) + 8.0 * (beta - delta);
  c.regime = c.Delta_disc < 0.0   ? F0Regime::oscillatory
             : c.Delta_disc == 0.0 ? F0Regime::double_root
                                   : F0Regime::real_exponential;
  return c;
}

struct ScanlanParams {
  double inertia_I = 1.0;
  double zeta = 0.0;
  double omega_n = 1.0;
  double A_lift = 0.0;
  double B_lift = 0.0;

  void validate() const {
    if (!(inertia_I > 0.0)) throw InvalidParameter("scanlan: inertia must be > 0");
    if (!(omega_n > 0.0)) throw InvalidParameter("scanlan: natural frequency must be > 0");
    if (!(zeta >= 0.0)) throw InvalidParameter("scanlan: damping ratio must be >= 0");
  }
};

struct ScanlanSample {
  double t, theta, thetad;
};

struct ScanlanSolution {
  std::array<std::complex<double>, 2> roots;
  double growth_exponent = 0.0;
  std::vector<ScanlanSample> samples;
};

/// Closed-form solution of I theta'' + (2 zeta omega I - A) theta' + (omega^2 I - B) theta = 0,
/// sampled at n_samples uniform points on [0, t_end].
inline ScanlanSolution solve_scanlan(const ScanlanParams& p, double theta0, double thetad0, double t_end,
                                     std::size_t n_samples = 2001) {
  p.validate();
  if (n_samples < 2) throw InvalidParameter("scanlan: need at least two samples");
  const double b = 2.0 * p.zeta * p.omega_n - p.A_lift / p.inertia_I;
  const double c = p.omega_n * p.omega_n - p.B_lift / p.inertia_I;
  const double disc = b * b - 4.0 * c;

  ScanlanSolution sol;
  std::function<std::pair<double, double>(double)> eval;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    // Stable pair of real roots.
    const double q = -0.5 * (b + std::copysign(sq, b));
    double r1 = q, r2 = q != 0.0 ? c / q : 0.0;
    if (q == 0.0) {
      r1 = 0.5 * sq;
      r2 = -0.5 * sq;
    }
    sol.roots = {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
    const double c1 = (thetad0 - r2 * theta0) / (r1 - r2);
    const double c2 = theta0 - c1;
    eval = [=](double t) {
      const double e1 = std::exp(r1 * t), e2 = std::exp(r2 * t);
      return std::pair{c1 * e1 + c2 * e2, c1 * r1 * e1 + c2 * r2 * e2};
    };
    sol.growth_exponent = std::max(r1, r2);
  } else if (disc == 0.0) {
    const double r = -0.5 * b;
    sol.roots = {std::complex<double>(r, 0.0), std::complex<double>(r, 0.0)};
    const double slope = thetad0 - r * theta0;
    eval = [=](double t) {
      const double e = std::exp(r * t);
      return std::pair{(theta0 + slope * t) * e, (slope + r * (theta0 + slope * t)) * e};
    };
    sol.growth_exponent = r;
  } else {
    const double re = -0.5 * b, im = 0.5 * std::sqrt(-disc);
    sol.roots = {std::complex<double>(re, im), std::complex<double>(re, -im)};
    const double s = (thetad0 - re * theta0) / im;
    eval = [=](double t) {
      const double e = std::exp(re * t), cs = std::cos(im * t), sn = std::sin(im * t);
      const double th = e * (theta0 * cs + s * sn);
      const double thd = re * th + e * im * (-theta0 * sn + s * cs);
      return std::pair{th, thd};
    };
    sol.growth_exponent = re;
  }
  sol.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = t_end * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const auto [th, thd] = eval(t);
    sol.samples.push_back({t, th, thd});
  }
  return sol;
}

struct EnvelopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through log|theta| at the local maxima of |theta|
/// (all nonzero samples when fewer than three maxima exist).
inline EnvelopeFit fit_log_envelope(const std::vector<ScanlanSample>& s) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double a = std::abs(s[i].theta);
    if (a > 0.0 && a >= std::abs(s[i - 1].theta) && a > std::abs(s[i + 1].theta)) {
      pts.emplace_back(s[i].t, std::log(a));
    }
  }
  if (pts.size() < 3) {
    pts.clear();
    for (const auto& v : s) {
      if (v.theta != 0.0) pts.emplace_back(v.t, std::log(std::abs(v.theta)));
    }
  }
  EnvelopeFit fit;
  fit.points = pts.size();
  if (pts.size() < 2) return fit;
  double mt = 0.0, my = 0.0;
  for (auto [t, y] : pts) {
    mt += t;
    my += y;
  }
  mt /= pts.size();
  my /= pts.size();
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (auto [t, y] : pts) {
    stt += (t - mt) * (t - mt);
    sty += (t - mt) * (y - my);
    syy += (y - my) * (y - my);
  }
  fit.slope = stt > 0.0 ? sty / stt : 0.0;
  fit.intercept = my - fit.slope * mt;
  fit.r_squared = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
  return fit;
}

}  // namespace bridge::systems
