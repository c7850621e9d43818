#pragma once

// Fourth-order ODE families with finite-time blow-up:
//
//   canonical        w'''' = -k w'' - f(w)
//   rocard_wave      w'''' = (alpha w + beta) w'' - f(w)       (f linear: - w)
//   pedestrian_wave  gamma w'''' = -c^2 w'' - delta c w' - f(w)
//   general          w'''' = -a w''' - k w'' - b w' - c w - |w|^q w
//
// integrated as first-order systems in (w, w', w'', w''').

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bridge/errors.hpp"
#include "bridge/nonlin.hpp"
#include "bridge/quadrature.hpp"
#include "bridge/trajectory.hpp"

namespace bridge::ode4 {

enum class FamilyKind { canonical, rocard_wave, pedestrian_wave, general };

inline std::string_view to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::canonical: return "canonical";
    case FamilyKind::rocard_wave: return "rocard_wave";
    case FamilyKind::pedestrian_wave: return "pedestrian_wave";
    case FamilyKind::general: return "general";
  }
  return "?";
}

inline FamilyKind family_kind_from_string(std::string_view s) {
  for (auto k : {FamilyKind::canonical, FamilyKind::rocard_wave, FamilyKind::pedestrian_wave,
                 FamilyKind::general}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidParameter("unknown ODE family '" + std::string(s) + "'");
}

struct OdeFamily {
  FamilyKind kind = FamilyKind::canonical;
  double k_coef = 0.0;                                  // canonical
  double alpha_r = 0.0, beta_r = 0.0;                   // rocard_wave
  double gamma_p = 1.0, c_speed = 0.0, delta_damp = 0.0;  // pedestrian_wave
  double a3 = 0.0, b1 = 0.0, c0 = 0.0, k2 = 0.0, q_exp = 2.0;  // general
  Nonlinearity nl = linear();

  void validate() const {
    if (kind == FamilyKind::pedestrian_wave && !(gamma_p > 0.0)) {
      throw InvalidParameter("pedestrian_wave: gamma must be > 0");
    }
    if (kind == FamilyKind::general) {
      if (!(q_exp > 0.0)) throw InvalidParameter("general: q must be > 0");
      if (c0 < 0.0) throw InvalidParameter("general: c must be >= 0");
    }
  }

  /// w'''' as a function of the state.
  double fourth_derivative(const Vec4& s) const {
    const double w = s[0], w1 = s[1], w2 = s[2], w3 = s[3];
    switch (kind) {
      case FamilyKind::canonical: return -k_coef * w2 - nl.f(w);
      case FamilyKind::rocard_wave: return (alpha_r * w + beta_r) * w2 - nl.f(w);
      case FamilyKind::pedestrian_wave:
        return (-c_speed * c_speed * w2 - delta_damp * c_speed * w1 - nl.f(w)) / gamma_p;
      case FamilyKind::general:
        return -a3 * w3 - k2 * w2 - b1 * w1 - c0 * w - std::pow(std::abs(w), q_exp) * w;
    }
    return 0.0;
  }
};

inline OdeFamily canonical(double k, Nonlinearity nl) {
  OdeFamily f;
  f.kind = FamilyKind::canonical;
  f.k_coef = k;
  f.nl = nl;
  return f;
}

/// Integrates the family from state0 until cfg.t_end or blow-up. Events are
/// the zeros of w.
inline Trajectory integrate(const OdeFamily& family, const State4& state0, const IntegratorConfig& cfg) {
  family.validate();
  auto rhs = [&family](double, const Vec4& y, Vec4& dy) {
    dy[0] = y[1];
    dy[1] = y[2];
    dy[2] = y[3];
    dy[3] = family.fourth_derivative(y);
  };
  return run_dense(rhs, state0, cfg, 0, [](const Vec4& y) { return std::array<double, 1>{y[0]}; });
}

struct BlowupReport {
  bool blew_up = false;
  double R_est = std::numeric_limits<double>::infinity();
  /// Spread between the two most recent blow-up time estimates.
  double R_err = std::numeric_limits<double>::infinity();
  std::vector<double> zeros;
  /// (int w^2 / int w''^2, int w'^2 / int w''^2) on each (z_j, z_{j+1}).
  std::vector<std::array<double, 2>> ratios;
};

namespace detail {

// Zeros of a blowing-up solution accumulate geometrically at R; Aitken's
// extrapolation of the last three zeros estimates the accumulation point.
inline std::optional<double> geometric_limit(double z0, double z1, double z2) {
  const double d1 = z1 - z0, d2 = z2 - z1;
  if (!(d1 > 0.0) || !(d2 > 0.0)) return std::nullopt;
  const double q = d2 / d1;
  if (!(q < 1.0)) return std::nullopt;
  return z2 + d2 * q / (1.0 - q);
}

// Linear extrapolation to zero of 1/max|w| over the last sign intervals.
template <class Sample>
double reciprocal_amplitude_limit(const BasicTrajectory<Sample>& traj, std::size_t comp) {
  std::vector<std::pair<double, double>> peaks;  // (time, 1/amplitude)
  const auto& ev = traj.events;
  double amp = 0.0, tpk = traj.t_begin();
  std::size_t next_event = 0;
  for (const auto& s : traj.samples) {
    while (next_event < ev.size() && s.t > ev[next_event]) {
      if (amp > 0.0) peaks.emplace_back(tpk, 1.0 / amp);
      amp = 0.0;
      ++next_event;
    }
    const double a = std::abs(s.vec()[comp]);
    if (a >= amp) {
      amp = a;
      tpk = s.t;
    }
  }
  if (amp > 0.0) peaks.emplace_back(tpk, 1.0 / amp);
  const double t_last = traj.t_last();
  if (peaks.size() < 2) return t_last;
  const auto [ta, ga] = peaks[peaks.size() - 2];
  const auto [tb, gb] = peaks.back();
  if (!(tb > ta) || !(gb < ga)) return t_last;
  const double slope = (gb - ga) / (tb - ta);
  return std::max(t_last, tb - gb / slope);
}

}  // namespace detail

/// Interval ratios of the displacement and velocity energies against the
/// acceleration energy, by composite Simpson on `points` uniform samples of
/// the dense output per sign interval. Components (0, 1, 2) = (w, w', w'').
inline std::vector<std::array<double, 2>> energy_ratios(const Trajectory& traj,
                                                        const std::vector<double>& zeros,
                                                        std::size_t points = 1025) {
  std::vector<std::array<double, 2>> out;
  std::vector<double> w0(points), w1(points), w2(points);
  for (std::size_t j = 0; j + 1 < zeros.size(); ++j) {
    const double a = zeros[j], b = zeros[j + 1];
    const double h = (b - a) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
      const auto s = traj.at(a + h * static_cast<double>(i));
      w0[i] = s.w * s.w;
      w1[i] = s.w1 * s.w1;
      w2[i] = s.w2 * s.w2;
    }
    const double iw = quad::simpson_uniform(w0, h);
    const double iw1 = quad::simpson_uniform(w1, h);
    const double iw2 = quad::simpson_uniform(w2, h);
    if (iw2 > 0.0) {
      out.push_back({iw / iw2, iw1 / iw2});
    } else {
      out.push_back({0.0, 0.0});
    }
  }
  return out;
}

/// Blow-up diagnostics of a trajectory produced by `integrate` (or by the
/// fourth-order reduction of a coupled system).
inline BlowupReport detect_blowup(const Trajectory& traj, const IntegratorConfig& cfg) {
  if (traj.empty()) throw InvalidParameter("detect_blowup: empty trajectory");
  BlowupReport r;
  r.zeros = traj.events;

  bool growing = false;
  if (traj.termination == Termination::step_underflow) {
    const double start = std::max(1.0, sup_norm(traj.samples.front().vec()));
    growing = sup_norm(traj.samples.back().vec()) > 100.0 * start &&
              std::abs(traj.samples.back().w) > std::min(cfg.blowup_threshold, 100.0 * start);
  }
  r.blew_up = traj.termination == Termination::blowup_detected || growing;
  r.ratios = energy_ratios(traj, r.zeros);

  if (r.blew_up) {
    const double t_last = traj.t_last();
    const auto& z = r.zeros;
    std::optional<double> best, previous;
    if (z.size() >= 3) best = detail::geometric_limit(z[z.size() - 3], z[z.size() - 2], z.back());
    if (z.size() >= 4) previous = detail::geometric_limit(z[z.size() - 4], z[z.size() - 3], z[z.size() - 2]);
    if (best && *best >= t_last) {
      r.R_est = *best;
      r.R_err = previous ? std::abs(*best - *previous) : std::abs(*best - t_last);
    } else {
      r.R_est = detail::reciprocal_amplitude_limit(traj, 0);
      r.R_err = r.R_est - (z.empty() ? traj.t_begin() : z.back());
    }
  }
  return r;
}

/// Individual terms of the conserved quantity
/// H = w' w''' - (w'')^2 / 2 + (k/2)(w')^2 + F(w).
struct HamiltonianTerms {
  double cross = 0.0, curvature = 0.0, kinetic = 0.0, potential = 0.0;

  double value() const { return cross + curvature + kinetic + potential; }
  /// Energy scale used to express drift in relative terms.
  double scale() const {
    return std::abs(cross) + std::abs(curvature) + std::abs(kinetic) + std::abs(potential);
  }
};

inline HamiltonianTerms hamiltonian_terms(const OdeFamily& family, const State4& s) {
  HamiltonianTerms h;
  h.cross = s.w1 * s.w3;
  h.curvature = -0.5 * s.w2 * s.w2;
  switch (family.kind) {
    case FamilyKind::canonical:
      h.kinetic = 0.5 * family.k_coef * s.w1 * s.w1;
      h.potential = family.nl.antiderivative(s.w);
      break;
    case FamilyKind::general:
      if (family.a3 != 0.0 || family.b1 != 0.0) {
        throw UnsupportedFamily("hamiltonian: odd-derivative terms destroy the first integral");
      }
      h.kinetic = 0.5 * family.k2 * s.w1 * s.w1;
      h.potential = 0.5 * family.c0 * s.w * s.w +
                    std::pow(std::abs(s.w), family.q_exp + 2.0) / (family.q_exp + 2.0);
      break;
    case FamilyKind::pedestrian_wave:
      throw UnsupportedFamily("hamiltonian: damping destroys the first integral of pedestrian_wave");
    case FamilyKind::rocard_wave:
      throw UnsupportedFamily("hamiltonian: rocard_wave has no first integral of this form");
  }
  return h;
}

inline double hamiltonian(const OdeFamily& family, const State4& s) {
  return hamiltonian_terms(family, s).value();
}

/// w'(0)w''(0) - w(0)w'''(0) - k w(0)w'(0) > 0.
inline bool check_tech(double k, const State4& s) {
  return s.w1 * s.w2 - s.w * s.w3 - k * s.w * s.w1 > 0.0;
}

}  // namespace bridge::ode4
