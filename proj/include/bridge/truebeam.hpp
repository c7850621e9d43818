#pragma once

// Modal Galerkin solver for the switching plate model
//
//   u_tt + bilaplacian u + delta u_t + f(u) = phi(x, t)   on (0, L) x (-l, l)
//   u_t(x1,-l) + u(x1,-l) = E(t) [u_t(x1,l) + u(x1,l)],   E = +1 iff int phi^2 <= Ebar
//
// with u = sum_m (a_m + b_m x2) sin(m pi x1 / L). The dynamic boundary law is
// imposed as a stiff penalty: on the torsional equations while E = +1, on the
// vertical ones while E = -1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bridge/dopri5.hpp"
#include "bridge/energy.hpp"
#include "bridge/errors.hpp"
#include "bridge/nonlin.hpp"
#include "bridge/plate.hpp"
#include "bridge/quadrature.hpp"
#include "bridge/trajectory.hpp"

namespace bridge::truebeam {

/// phi(x, t) = env(t) * sum_m (p_m + q_m x2) sin(m pi x1 / L); env is
/// piecewise linear through `knots` and constant outside them.
struct GustSpec {
  std::vector<std::pair<double, double>> knots;  // (t, amplitude), t ascending
  std::vector<double> p;                         // vertical profile, m = 1..
  std::vector<double> q;                         // torsional profile, m = 1..

  bool is_zero() const {
    auto nz = [](const std::vector<double>& v) {
      return std::any_of(v.begin(), v.end(), [](double c) { return c != 0.0; });
    };
    return knots.empty() || (!nz(p) && !nz(q));
  }

  void validate() const {
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (!(knots[i].first > knots[i - 1].first)) throw InvalidParameter("gust: knot times must be ascending");
    }
    for (const auto& [t, a] : knots) {
      if (!std::isfinite(t) || !std::isfinite(a)) throw InvalidParameter("gust: knots must be finite");
    }
  }

  double envelope(double t) const {
    if (knots.empty()) return 0.0;
    if (t <= knots.front().first) return knots.front().second;
    if (t >= knots.back().first) return knots.back().second;
    auto it = std::upper_bound(knots.begin(), knots.end(), t,
                               [](double v, const auto& k) { return v < k.first; });
    const auto& [t1, a1] = *it;
    const auto& [t0, a0] = *(it - 1);
    return a0 + (a1 - a0) * (t - t0) / (t1 - t0);
  }

  double profile(const plate::PlateGeom& g, double x1, double x2) const {
    double s = 0.0;
    const std::size_t n = std::max(p.size(), q.size());
    for (std::size_t m = 0; m < n; ++m) {
      const double c = (m < p.size() ? p[m] : 0.0) + (m < q.size() ? q[m] * x2 : 0.0);
      s += c * std::sin((m + 1) * std::numbers::pi * x1 / g.length_L);
    }
    return s;
  }

  double phi(const plate::PlateGeom& g, double x1, double x2, double t) const {
    return is_zero() ? 0.0 : envelope(t) * profile(g, x1, x2);
  }
};

struct TrueBeamConfig {
  plate::PlateGeom geom{std::numbers::pi, 0.5, 0.2};
  double damping_delta = 0.0;
  Nonlinearity nl = linear();
  double threshold_Ebar = 1.0;
  GustSpec forcing;
  int modes_M = 4;
  double bc_penalty_kappa = 100.0;
  /// Holds E(t) at this value instead of following the gust energy.
  std::optional<int> frozen_switch;
  IntegratorConfig integrator{1e-10, 1e-10, 0.05, 1e6, 10.0, 1e100};

  void validate() const {
    geom.validate();
    forcing.validate();
    if (modes_M < 1) throw InvalidParameter("truebeam: modes_M must be >= 1");
    if (!(bc_penalty_kappa > 0.0)) throw InvalidParameter("truebeam: kappa must be > 0");
    if (!(damping_delta >= 0.0)) throw InvalidParameter("truebeam: damping must be >= 0");
    if (!(threshold_Ebar > 0.0)) throw InvalidParameter("truebeam: Ebar must be > 0");
    if (frozen_switch && *frozen_switch != 1 && *frozen_switch != -1) {
      throw InvalidParameter("truebeam: frozen switch must be +1 or -1");
    }
    integrator.validate();
  }
};

struct ModalState {
  double t = 0.0;
  std::vector<double> a, ad, b, bd;
  int switch_value = 1;

  static ModalState zero(int M) {
    ModalState s;
    s.a.assign(M, 0.0);
    s.ad.assign(M, 0.0);
    s.b.assign(M, 0.0);
    s.bd.assign(M, 0.0);
    return s;
  }

  int modes() const { return static_cast<int>(a.size()); }

  std::vector<double> flat() const {
    std::vector<double> v;
    v.reserve(4 * a.size());
    for (const auto* part : {&a, &ad, &b, &bd}) v.insert(v.end(), part->begin(), part->end());
    return v;
  }

  static ModalState from_flat(double t, const std::vector<double>& v, int sw) {
    const std::size_t M = v.size() / 4;
    ModalState s;
    s.t = t;
    s.switch_value = sw;
    s.a.assign(v.begin(), v.begin() + M);
    s.ad.assign(v.begin() + M, v.begin() + 2 * M);
    s.b.assign(v.begin() + 2 * M, v.begin() + 3 * M);
    s.bd.assign(v.begin() + 3 * M, v.end());
    return s;
  }

  /// u(x1, x2) from the modal expansion.
  double displacement(const plate::PlateGeom& g, double x1, double x2) const {
    double u = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
      u += (a[m] + b[m] * x2) * std::sin((m + 1) * std::numbers::pi * x1 / g.length_L);
    }
    return u;
  }
};

struct SwitchEvent {
  double t_switch = 0.0;
  int direction = 0;  // switch value after the event
};

struct TrueBeamTrajectory {
  std::vector<ModalState> samples;
  std::vector<rk::DenseSegment<std::vector<double>>> segments;
  std::vector<SwitchEvent> events;
  Termination termination = Termination::reached_t_end;
  int modes_M = 0;

  /// Dense value of flat component `i` (layout a, ad, b, bd) at t.
  double component_at(double t, std::size_t i) const {
    if (segments.empty() || t <= segments.front().t0) return samples.front().flat()[i];
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double v, const auto& s) { return v < s.t0; });
    const auto& seg = *(it == segments.begin() ? it : std::prev(it));
    return seg.component(std::min(t, seg.t1()), i);
  }

  /// Zero crossings of flat component `i`, bisected on the dense output.
  std::vector<double> zero_crossings(std::size_t i) const {
    std::vector<double> z;
    for (const auto& seg : segments) {
      const double va = seg.component(seg.t0, i), vb = seg.component(seg.t1(), i);
      if (bridge::detail::crosses_zero(va, vb)) {
        z.push_back(vb == 0.0 ? seg.t1() : rk::bisect_root([&](double t) { return seg.component(t, i); },
                                                           seg.t0, seg.t1(), 1e-13));
      }
    }
    return z;
  }
};

namespace detail {

inline double vertical_norm(const plate::PlateGeom& g) { return g.length_L * g.half_width_l; }
inline double torsional_norm(const plate::PlateGeom& g) {
  return g.length_L * g.half_width_l * g.half_width_l * g.half_width_l / 3.0;
}

/// Tensor Gauss grid carrying sin(k_m x1) at every x1 node.
class ProjectionGrid {
 public:
  ProjectionGrid(const plate::PlateGeom& g, int M, std::size_t nx, std::size_t ny) : M_(M) {
    const auto rx = quad::map_rule(quad::gauss_legendre(nx), 0.0, g.length_L);
    const auto ry = quad::map_rule(quad::gauss_legendre(ny), -g.half_width_l, g.half_width_l);
    x1_ = rx.x;
    w1_ = rx.w;
    x2_ = ry.x;
    w2_ = ry.w;
    sines_.assign(static_cast<std::size_t>(M) * nx, 0.0);
    for (int m = 0; m < M; ++m) {
      for (std::size_t i = 0; i < nx; ++i) {
        sines_[m * nx + i] = std::sin((m + 1) * std::numbers::pi * x1_[i] / g.length_L);
      }
    }
    nv_ = vertical_norm(g);
    nt_ = torsional_norm(g);
  }

  std::size_t nx() const { return x1_.size(); }
  std::size_t ny() const { return x2_.size(); }

  /// Projections (P^v_m, P^t_m) of g(u) for u = sum (a + b x2) sin; also
  /// returns the quadrature of G(u) through `integral` when requested.
  template <class Fn, class Gn>
  void project(const double* a, const double* b, Fn&& fu, double* pv, double* pt, Gn&& Gu,
               double* integral) const {
    std::fill(pv, pv + M_, 0.0);
    std::fill(pt, pt + M_, 0.0);
    double total = 0.0;
    const std::size_t nx = x1_.size();
    for (std::size_t i = 0; i < nx; ++i) {
      double ca = 0.0, cb = 0.0;
      for (int m = 0; m < M_; ++m) {
        ca += a[m] * sines_[m * nx + i];
        cb += b[m] * sines_[m * nx + i];
      }
      double s0 = 0.0, s1 = 0.0;
      for (std::size_t j = 0; j < x2_.size(); ++j) {
        const double u = ca + cb * x2_[j];
        const double fv = w2_[j] * fu(u);
        s0 += fv;
        s1 += fv * x2_[j];
        if (integral) total += w1_[i] * w2_[j] * Gu(u);
      }
      for (int m = 0; m < M_; ++m) {
        pv[m] += w1_[i] * s0 * sines_[m * nx + i];
        pt[m] += w1_[i] * s1 * sines_[m * nx + i];
      }
    }
    for (int m = 0; m < M_; ++m) {
      pv[m] /= nv_;
      pt[m] /= nt_;
    }
    if (integral) *integral = total;
  }

 private:
  int M_;
  std::vector<double> x1_, w1_, x2_, w2_, sines_;
  double nv_ = 1.0, nt_ = 1.0;
};

// Starting at (4M) x 8, doubles the grid until projecting a representative
// state agrees with the doubled grid to 1e-8.
inline ProjectionGrid make_projection_grid(const plate::PlateGeom& g, const Nonlinearity& nl, int M,
                                           const std::vector<double>& a_probe,
                                           const std::vector<double>& b_probe) {
  std::size_t nx = 4 * static_cast<std::size_t>(M), ny = 8;
  std::vector<double> pv0(M), pt0(M), pv1(M), pt1(M);
  auto f = [&nl](double u) { return nl.f(u); };
  auto none = [](double) { return 0.0; };
  for (int round = 0; round < 6; ++round) {
    ProjectionGrid coarse(g, M, nx, ny);
    ProjectionGrid fine(g, M, 2 * nx, 2 * ny);
    coarse.project(a_probe.data(), b_probe.data(), f, pv0.data(), pt0.data(), none, nullptr);
    fine.project(a_probe.data(), b_probe.data(), f, pv1.data(), pt1.data(), none, nullptr);
    double diff = 0.0, mag = 0.0;
    for (int m = 0; m < M; ++m) {
      diff = std::max({diff, std::abs(pv0[m] - pv1[m]), std::abs(pt0[m] - pt1[m])});
      mag = std::max({mag, std::abs(pv1[m]), std::abs(pt1[m])});
    }
    if (diff <= 1e-8 * (1.0 + mag)) return coarse;
    nx *= 2;
    ny *= 2;
  }
  return ProjectionGrid(g, M, nx, ny);
}

}  // namespace detail

/// int phi(., t)^2: the envelope squared times the spatial integral of the
/// profile, the latter by tensor Gauss quadrature.
class GustEnergy {
 public:
  GustEnergy(const plate::PlateGeom& g, const GustSpec& gust) : gust_(gust) {
    if (gust.is_zero()) return;
    const quad::Rect r{0.0, g.length_L, -g.half_width_l, g.half_width_l};
    const std::size_t n = std::max<std::size_t>(16, 4 * std::max(gust.p.size(), gust.q.size()));
    spatial_ = energy::gust_energy([&](double x1, double x2, double) { return gust.profile(g, x1, x2); }, 0.0,
                                   r, n)
                   .value;
  }

  double operator()(double t) const {
    if (gust_.is_zero()) return 0.0;
    const double e = gust_.envelope(t);
    return e * e * spatial_;
  }

  double spatial_integral() const { return spatial_; }

 private:
  GustSpec gust_;
  double spatial_ = 0.0;
};

/// Times in (t0, t1) where E(t) changes value, located by bisection to 1e-14
/// on monotone pieces of the gust energy.
inline std::vector<SwitchEvent> switch_times(const GustEnergy& energy, const GustSpec& gust, double Ebar,
                                             double t0, double t1) {
  std::vector<SwitchEvent> out;
  if (gust.is_zero()) return out;
  std::vector<double> cuts{t0};
  for (std::size_t i = 0; i < gust.knots.size(); ++i) {
    const double tk = gust.knots[i].first;
    if (tk > t0 && tk < t1) cuts.push_back(tk);
    if (i + 1 < gust.knots.size()) {
      const auto [ta, aa] = gust.knots[i];
      const auto [tb, ab] = gust.knots[i + 1];
      // the envelope changes sign inside the piece: E is not monotone there
      if ((aa < 0.0 && ab > 0.0) || (aa > 0.0 && ab < 0.0)) {
        const double tz = ta + (tb - ta) * aa / (aa - ab);
        if (tz > t0 && tz < t1) cuts.push_back(tz);
      }
    }
  }
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end());
  auto side = [&](double t) { return energy::switch_state(energy(t), Ebar); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    const int sa = side(a), sb = side(b);
    if (sa == sb || !(b > a)) continue;
    for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
      const double m = 0.5 * (a + b);
      if (side(m) == sa) {
        a = m;
      } else {
        b = m;
      }
    }
    out.push_back({b, sb});
  }
  return out;
}

/// Least-squares modal coefficients of (u0, u1) by Gauss quadrature against
/// the orthogonal basis.
template <class U0, class U1>
ModalState project_initial(U0&& u0, U1&& u1, const plate::PlateGeom& g, int M) {
  g.validate();
  if (M < 1) throw InvalidParameter("project_initial: M must be >= 1");
  const std::size_t nx = std::max<std::size_t>(64, 8 * static_cast<std::size_t>(M));
  const auto rx = quad::map_rule(quad::gauss_legendre(nx), 0.0, g.length_L);
  const auto ry = quad::map_rule(quad::gauss_legendre(16), -g.half_width_l, g.half_width_l);
  ModalState s = ModalState::zero(M);
  const double nv = detail::vertical_norm(g), nt = detail::torsional_norm(g);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ry.x.size(); ++j) {
      const double x1 = rx.x[i], x2 = ry.x[j], w = rx.w[i] * ry.w[j];
      const double v0 = u0(x1, x2), v1 = u1(x1, x2);
      for (int m = 0; m < M; ++m) {
        const double sn = std::sin((m + 1) * std::numbers::pi * x1 / g.length_L);
        s.a[m] += w * v0 * sn / nv;
        s.ad[m] += w * v1 * sn / nv;
        s.b[m] += w * v0 * x2 * sn / nt;
        s.bd[m] += w * v1 * x2 * sn / nt;
      }
    }
  }
  return s;
}

/// max over the x1 grid of |u1(x1,-l) + u0(x1,-l) - E0 (u1(x1,l) + u0(x1,l))|.
template <class U0, class U1>
double check_compatibility(U0&& u0, U1&& u1, int E0, const plate::PlateGeom& g, int grid_n) {
  if (E0 != 1 && E0 != -1) throw InvalidParameter("check_compatibility: E0 must be +1 or -1");
  if (grid_n < 1) throw InvalidParameter("check_compatibility: grid_n must be >= 1");
  const double l = g.half_width_l;
  double worst = 0.0;
  for (int i = 0; i <= grid_n; ++i) {
    const double x1 = g.length_L * i / grid_n;
    const double lhs = u1(x1, -l) + u0(x1, -l);
    const double rhs = E0 * (u1(x1, l) + u0(x1, l));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

/// Modal energy: kinetic + bending + int F(u) + penalty potential of the
/// active boundary law. Non-increasing without forcing.
class EnergyMeter {
 public:
  EnergyMeter(const TrueBeamConfig& cfg, int M)
      : cfg_(cfg),
        grid_(detail::make_projection_grid(cfg.geom, cfg.nl, M, std::vector<double>(M, 1.0),
                                           std::vector<double>(M, 1.0))) {}

  double operator()(const ModalState& s) const {
    const auto& g = cfg_.geom;
    const double nv = detail::vertical_norm(g), nt = detail::torsional_norm(g);
    double e = 0.0;
    for (int m = 0; m < s.modes(); ++m) {
      const double k = (m + 1) * std::numbers::pi / g.length_L, lam = k * k * k * k;
      e += 0.5 * nv * (s.ad[m] * s.ad[m] + lam * s.a[m] * s.a[m]);
      e += 0.5 * nt * (s.bd[m] * s.bd[m] + lam * s.b[m] * s.b[m]);
      if (s.switch_value == 1) {
        e += 0.5 * cfg_.bc_penalty_kappa * nt * s.b[m] * s.b[m];
      } else {
        e += 0.5 * cfg_.bc_penalty_kappa * nv * s.a[m] * s.a[m];
      }
    }
    std::vector<double> pv(s.modes()), pt(s.modes());
    double fint = 0.0;
    const auto& nl = cfg_.nl;
    grid_.project(s.a.data(), s.b.data(), [](double) { return 0.0; }, pv.data(), pt.data(),
                  [&nl](double u) { return nl.antiderivative(u); }, &fint);
    return e + fint;
  }

 private:
  TrueBeamConfig cfg_;
  detail::ProjectionGrid grid_;
};

/// Integrates the truncated modal system from state0 to t_end. The switch is
/// re-evaluated from the gust energy; each flip ends the current integration
/// leg exactly at the bisected switch time.
inline TrueBeamTrajectory integrate_truebeam(const TrueBeamConfig& cfg, const ModalState& state0, double t_end) {
  cfg.validate();
  const int M = cfg.modes_M;
  if (state0.modes() != M || state0.ad.size() != static_cast<std::size_t>(M) ||
      state0.b.size() != static_cast<std::size_t>(M) || state0.bd.size() != static_cast<std::size_t>(M)) {
    throw InvalidParameter("truebeam: initial state must carry modes_M coefficients per family");
  }
  const std::vector<double> y0 = state0.flat();
  for (double v : y0) {
    if (!std::isfinite(v)) throw InvalidParameter("truebeam: initial state must be finite");
  }
  if (!std::isfinite(t_end)) throw InvalidParameter("truebeam: t_end must be finite");

  const auto& g = cfg.geom;
  const GustEnergy gust_energy(g, cfg.forcing);
  const bool linear_f = cfg.nl.kind() == NonlinKind::linear || cfg.nl.kind() == NonlinKind::zero;
  std::vector<double> probe(M, 1.0);
  for (int m = 0; m < M; ++m) probe[m] = std::max(1.0, std::max(std::abs(state0.a[m]), std::abs(state0.b[m])));
  const auto grid = detail::make_projection_grid(g, cfg.nl, M, probe, probe);

  std::vector<double> lam(M), fp(M), fq(M);
  for (int m = 0; m < M; ++m) {
    const double k = (m + 1) * std::numbers::pi / g.length_L;
    lam[m] = k * k * k * k;
    // forcing projections are exact by orthogonality
    fp[m] = m < static_cast<int>(cfg.forcing.p.size()) ? cfg.forcing.p[m] : 0.0;
    fq[m] = m < static_cast<int>(cfg.forcing.q.size()) ? cfg.forcing.q[m] : 0.0;
  }
  const double lin_coef = cfg.nl.kind() == NonlinKind::linear ? 1.0 : 0.0;

  TrueBeamTrajectory traj;
  traj.modes_M = M;
  auto current_switch = [&](double t) {
    return cfg.frozen_switch ? *cfg.frozen_switch : energy::switch_state(gust_energy(t), cfg.threshold_Ebar);
  };
  int sw = current_switch(state0.t);
  traj.samples.push_back(ModalState::from_flat(state0.t, y0, sw));
  if (t_end <= state0.t) return traj;

  // Leg boundaries: envelope knots (forcing kinks) and switch flips.
  std::vector<double> breaks;
  for (const auto& [tk, ak] : cfg.forcing.knots) {
    if (tk > state0.t && tk < t_end && !cfg.forcing.is_zero()) breaks.push_back(tk);
  }
  if (!cfg.frozen_switch) {
    for (const auto& ev : switch_times(gust_energy, cfg.forcing, cfg.threshold_Ebar, state0.t, t_end)) {
      breaks.push_back(ev.t_switch);
    }
  }
  breaks.push_back(t_end);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<double> y = y0;
  double t = state0.t;
  const double kappa = cfg.bc_penalty_kappa, delta = cfg.damping_delta;
  for (double leg_end : breaks) {
    const int leg_switch = sw;
    auto rhs = [&, leg_switch](double tt, const std::vector<double>& s, std::vector<double>& d) {
      const double* a = s.data();
      const double* ad = a + M;
      const double* b = ad + M;
      const double* bd = b + M;
      thread_local std::vector<double> pv, pt;
      pv.assign(M, 0.0);
      pt.assign(M, 0.0);
      if (linear_f) {
        for (int m = 0; m < M; ++m) {
          pv[m] = lin_coef * a[m];
          pt[m] = lin_coef * b[m];
        }
      } else {
        grid.project(a, b, [&](double u) { return cfg.nl.f(u); }, pv.data(), pt.data(),
                     [](double) { return 0.0; }, nullptr);
      }
      const double env = cfg.forcing.is_zero() ? 0.0 : cfg.forcing.envelope(tt);
      for (int m = 0; m < M; ++m) {
        d[m] = ad[m];
        d[2 * M + m] = bd[m];
        double acc_a = -lam[m] * a[m] - delta * ad[m] - pv[m] + env * fp[m];
        double acc_b = -lam[m] * b[m] - delta * bd[m] - pt[m] + env * fq[m];
        if (leg_switch == 1) {
          acc_b -= kappa * (bd[m] + b[m]);
        } else {
          acc_a -= kappa * (ad[m] + a[m]);
        }
        d[M + m] = acc_a;
        d[3 * M + m] = acc_b;
      }
    };
    auto stepper = rk::make_stepper<std::vector<double>>(rhs, t, y, cfg.integrator.step_control());
    while (stepper.t() < leg_end) {
      if (stepper.step(leg_end) == rk::StepOutcome::underflow) {
        if (traj.samples.size() == 1) throw StepUnderflow("truebeam: step size underflow before any progress");
        traj.termination = Termination::step_underflow;
        return traj;
      }
      traj.segments.push_back(stepper.last_segment());
      traj.samples.push_back(ModalState::from_flat(stepper.t(), stepper.y(), leg_switch));
      double norm = 0.0;
      bool finite = true;
      for (double v : stepper.y()) {
        norm = std::max(norm, std::abs(v));
        finite = finite && std::isfinite(v);
      }
      if (!finite || norm >= cfg.integrator.blowup_threshold) {
        traj.termination = Termination::blowup_detected;
        return traj;
      }
    }
    t = stepper.t();
    y = stepper.y();
    if (leg_end < t_end) {
      const int next = current_switch(std::nextafter(leg_end, t_end));
      if (next != sw) {
        traj.events.push_back({leg_end, next});
        sw = next;
        traj.samples.back().switch_value = sw;
      }
    }
  }
  traj.termination = Termination::reached_t_end;
  return traj;
}

}  // namespace bridge::truebeam
