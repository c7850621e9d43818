#pragma once

// Dense trajectories of four-component first-order systems, shared by the
// fourth-order ODE families (w, w', w'', w''') and the 2x2 second-order
// systems (x, x', y, y').

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <string_view>
#include <vector>

#include "bridge/dopri5.hpp"
#include "bridge/errors.hpp"

namespace bridge {

using Vec4 = std::array<double, 4>;

enum class Termination { reached_t_end, blowup_detected, step_underflow };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::reached_t_end: return "reached_t_end";
    case Termination::blowup_detected: return "blowup_detected";
    case Termination::step_underflow: return "step_underflow";
  }
  return "?";
}

/// Displacement w and its first three derivatives at time t.
struct State4 {
  double t = 0.0;
  double w = 0.0, w1 = 0.0, w2 = 0.0, w3 = 0.0;

  Vec4 vec() const { return {w, w1, w2, w3}; }
  static State4 from(double t, const Vec4& v) { return {t, v[0], v[1], v[2], v[3]}; }
};

/// Torsional coordinate x (or angle theta), vertical coordinate y and their
/// velocities.
struct SysState {
  double t = 0.0;
  double x = 0.0, xd = 0.0, y = 0.0, yd = 0.0;

  Vec4 vec() const { return {x, xd, y, yd}; }
  static SysState from(double t, const Vec4& v) { return {t, v[0], v[1], v[2], v[3]}; }
};

inline double sup_norm(const Vec4& v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

/// Accepted-step samples plus the continuous extension of every step.
/// `events` holds the zero crossings of the event coordinate.
template <class Sample>
struct BasicTrajectory {
  std::vector<Sample> samples;
  std::vector<rk::DenseSegment<Vec4>> segments;
  std::vector<double> events;
  Termination termination = Termination::reached_t_end;
  std::size_t event_component = 0;

  bool empty() const { return samples.empty(); }
  double t_begin() const { return samples.front().t; }
  double t_last() const { return samples.back().t; }

  /// Dense evaluation; t outside the covered span clamps to the endpoints.
  Sample at(double t) const {
    if (segments.empty() || t <= t_begin()) return samples.front();
    if (t >= t_last()) return samples.back();
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double v, const auto& s) { return v < s.t0; });
    const auto& seg = *(it == segments.begin() ? it : std::prev(it));
    return Sample::from(t, seg(t));
  }

  double component_at(double t, std::size_t i) const { return at(t).vec()[i]; }
};

using Trajectory = BasicTrajectory<State4>;
using SysTrajectory = BasicTrajectory<SysState>;

namespace detail {

inline bool crosses_zero(double a, double b) {
  return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0) || (b == 0.0 && a != 0.0);
}

/// Zero of component i inside the segment, located by bisection on the
/// dense output.
inline double locate_zero(const rk::DenseSegment<Vec4>& seg, std::size_t i, double tol = 1e-12) {
  return rk::bisect_root([&](double t) { return seg.component(t, i); }, seg.t0, seg.t1(), tol);
}

/// Blow-up watch: finite-time blow-up of these models happens through
/// oscillations of growing amplitude on both sides of zero. A run is flagged
/// once the watched signals have exceeded the threshold on one side and half
/// of it on the other; growth on one side only is flagged at `runaway`.
class BlowupWatch {
 public:
  BlowupWatch(double threshold, double runaway) : threshold_(threshold), runaway_(runaway) {}

  /// Feeds the signed signals of one sample and returns true on blow-up.
  template <class Range>
  bool update(const Range& signals, double state_norm) {
    double mag = 0.0;
    for (double s : signals) {
      hi_ = std::max(hi_, s);
      lo_ = std::min(lo_, s);
      mag = std::max(mag, std::abs(s));
    }
    if (!std::isfinite(state_norm) || state_norm >= runaway_) return true;
    if (mag < threshold_) return false;
    return hi_ >= 0.5 * threshold_ && lo_ <= -0.5 * threshold_;
  }

 private:
  double threshold_;
  double runaway_;
  double hi_ = -std::numeric_limits<double>::infinity();
  double lo_ = std::numeric_limits<double>::infinity();
};

}  // namespace detail

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.5;
  double blowup_threshold = 1e6;
  double t_end = 10.0;
  double runaway_limit = 1e100;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidParameter("tolerances must be > 0");
    if (!(blowup_threshold > 1.0)) throw InvalidParameter("blowup_threshold must be > 1");
    if (!std::isfinite(t_end)) throw InvalidParameter("t_end must be finite");
    if (!(runaway_limit > blowup_threshold)) throw InvalidParameter("runaway_limit must exceed blowup_threshold");
  }

  rk::StepControl step_control() const {
    rk::StepControl c;
    c.rel_tol = rel_tol;
    c.abs_tol = abs_tol;
    c.max_step = max_step;
    return c;
  }
};

/// Drives a DOPRI5 integration of a four-component system from t0 to
/// cfg.t_end, recording samples, dense segments and zero crossings of
/// component `event_component`. `watched(v)` returns the signals checked by
/// the blow-up watch.
template <class Sample, class Rhs, class Watched>
BasicTrajectory<Sample> run_dense(Rhs rhs, const Sample& s0, const IntegratorConfig& cfg,
                                  std::size_t event_component, Watched watched) {
  cfg.validate();
  const Vec4 y0 = s0.vec();
  for (double v : y0) {
    if (!std::isfinite(v)) throw InvalidParameter("initial state must be finite");
  }
  BasicTrajectory<Sample> traj;
  traj.event_component = event_component;
  traj.samples.push_back(s0);
  if (cfg.t_end <= s0.t) return traj;

  auto stepper = rk::make_stepper<Vec4>(std::move(rhs), s0.t, y0, cfg.step_control());
  detail::BlowupWatch watch(cfg.blowup_threshold, cfg.runaway_limit);
  watch.update(watched(y0), sup_norm(y0));

  double prev = y0[event_component];
  while (stepper.t() < cfg.t_end) {
    if (stepper.step(cfg.t_end) == rk::StepOutcome::underflow) {
      if (traj.samples.size() == 1) {
        throw StepUnderflow("step size underflow before any progress; check tolerances");
      }
      traj.termination = Termination::step_underflow;
      return traj;
    }
    const auto& seg = stepper.last_segment();
    traj.segments.push_back(seg);
    const Vec4& y = stepper.y();
    traj.samples.push_back(Sample::from(stepper.t(), y));
    const double cur = y[event_component];
    if (detail::crosses_zero(prev, cur)) {
      traj.events.push_back(cur == 0.0 ? stepper.t() : detail::locate_zero(seg, event_component));
    }
    prev = cur;
    if (watch.update(watched(y), sup_norm(y))) {
      traj.termination = Termination::blowup_detected;
      return traj;
    }
  }
  traj.termination = Termination::reached_t_end;
  return traj;
}

}  // namespace bridge
