#pragma once

// Restoring-force nonlinearities f(s), their antiderivatives F(s) = \int_0^s f
// and derivatives f'(s), together with numeric checkers for the growth and
// monotonicity hypotheses used by the blow-up results.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bridge/errors.hpp"

namespace bridge {

enum class NonlinKind { linear, cubic, power, piecewise, exponential, mckenna_cubic, zero };

inline std::string_view to_string(NonlinKind k) {
  switch (k) {
    case NonlinKind::linear: return "linear";
    case NonlinKind::cubic: return "cubic";
    case NonlinKind::power: return "power";
    case NonlinKind::piecewise: return "piecewise";
    case NonlinKind::exponential: return "exponential";
    case NonlinKind::mckenna_cubic: return "mckenna_cubic";
    case NonlinKind::zero: return "zero";
  }
  return "?";
}

inline NonlinKind nonlin_kind_from_string(std::string_view s) {
  for (auto k : {NonlinKind::linear, NonlinKind::cubic, NonlinKind::power, NonlinKind::piecewise,
                 NonlinKind::exponential, NonlinKind::mckenna_cubic, NonlinKind::zero}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidParameter("unknown nonlinearity kind '" + std::string(s) + "'");
}

struct NonlinParams {
  double epsilon = 0.0;  // cubic, power
  double p_exp = 3.0;    // power
  double a_coef = 1.0;   // exponential
  double b_coef = 1.0;   // exponential
  double sigma_f = 1.0;  // mckenna_cubic
  double c_quad = 0.0;   // mckenna_cubic
  double d_cub = 1.0;    // mckenna_cubic
};

/// A restoring force with closed-form f, F and f'.
///
/// cubic:         f(s) = s + eps s^3
/// power:         f(s) = s + eps |s|^{p-1} s
/// piecewise:     f(s) = (s+1)^+ - 1
/// exponential:   f(s) = a (e^{b s} - 1)
/// mckenna_cubic: f(s) = sigma s + c s^2 + d s^3
/// zero:          f(s) = 0 (bare plate, no restoring force)
class Nonlinearity {
 public:
  Nonlinearity() = default;

  NonlinKind kind() const { return kind_; }
  const NonlinParams& params() const { return p_; }

  double f(double s) const {
    switch (kind_) {
      case NonlinKind::linear: return s;
      case NonlinKind::cubic: return s + p_.epsilon * s * s * s;
      case NonlinKind::power: return s + p_.epsilon * std::pow(std::abs(s), p_.p_exp - 1.0) * s;
      case NonlinKind::piecewise: return std::max(s + 1.0, 0.0) - 1.0;
      case NonlinKind::exponential: return p_.a_coef * std::expm1(p_.b_coef * s);
      case NonlinKind::mckenna_cubic: return s * (p_.sigma_f + s * (p_.c_quad + s * p_.d_cub));
      case NonlinKind::zero: return 0.0;
    }
    return 0.0;
  }

  double antiderivative(double s) const {
    switch (kind_) {
      case NonlinKind::linear: return 0.5 * s * s;
      case NonlinKind::cubic: return 0.5 * s * s + 0.25 * p_.epsilon * s * s * s * s;
      case NonlinKind::power:
        return 0.5 * s * s + p_.epsilon * std::pow(std::abs(s), p_.p_exp + 1.0) / (p_.p_exp + 1.0);
      case NonlinKind::piecewise: return s >= -1.0 ? 0.5 * s * s : -s - 0.5;
      case NonlinKind::exponential:
        return p_.a_coef * (std::expm1(p_.b_coef * s) / p_.b_coef - s);
      case NonlinKind::mckenna_cubic:
        return s * s * (p_.sigma_f / 2.0 + s * (p_.c_quad / 3.0 + s * p_.d_cub / 4.0));
      case NonlinKind::zero: return 0.0;
    }
    return 0.0;
  }

  double derivative(double s) const {
    switch (kind_) {
      case NonlinKind::linear: return 1.0;
      case NonlinKind::cubic: return 1.0 + 3.0 * p_.epsilon * s * s;
      case NonlinKind::power:
        return 1.0 + p_.epsilon * p_.p_exp * std::pow(std::abs(s), p_.p_exp - 1.0);
      case NonlinKind::piecewise: return s >= -1.0 ? 1.0 : 0.0;
      case NonlinKind::exponential: return p_.a_coef * p_.b_coef * std::exp(p_.b_coef * s);
      case NonlinKind::mckenna_cubic: return p_.sigma_f + s * (2.0 * p_.c_quad + 3.0 * p_.d_cub * s);
      case NonlinKind::zero: return 0.0;
    }
    return 0.0;
  }

  double operator()(double s) const { return f(s); }

  friend Nonlinearity make_nonlinearity(NonlinKind kind, const NonlinParams& params);

 private:
  NonlinKind kind_ = NonlinKind::linear;
  NonlinParams p_{};
};

inline Nonlinearity make_nonlinearity(NonlinKind kind, const NonlinParams& params = {}) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(params.epsilon) || !finite(params.p_exp) || !finite(params.a_coef) ||
      !finite(params.b_coef) || !finite(params.sigma_f) || !finite(params.c_quad) ||
      !finite(params.d_cub)) {
    throw InvalidParameter("nonlinearity parameters must be finite");
  }
  switch (kind) {
    case NonlinKind::cubic:
      if (params.epsilon < 0.0) throw InvalidParameter("cubic: epsilon must be >= 0");
      break;
    case NonlinKind::power:
      if (params.epsilon < 0.0) throw InvalidParameter("power: epsilon must be >= 0");
      if (params.p_exp <= 1.0) throw InvalidParameter("power: p_exp must be > 1");
      break;
    case NonlinKind::exponential:
      if (params.a_coef <= 0.0) throw InvalidParameter("exponential: a_coef must be > 0");
      if (params.b_coef <= 0.0) throw InvalidParameter("exponential: b_coef must be > 0");
      break;
    case NonlinKind::mckenna_cubic:
      if (params.d_cub <= 0.0) throw InvalidParameter("mckenna_cubic: d_cub must be > 0");
      break;
    default: break;
  }
  Nonlinearity nl;
  nl.kind_ = kind;
  nl.p_ = params;
  return nl;
}

inline Nonlinearity cubic(double epsilon) {
  NonlinParams p;
  p.epsilon = epsilon;
  return make_nonlinearity(NonlinKind::cubic, p);
}

inline Nonlinearity linear() { return make_nonlinearity(NonlinKind::linear); }

struct HypothesisReport {
  bool holds_f = false;
  bool holds_ff3 = false;
  bool holds_fmono = false;
  bool holds_f2 = false;
  // Growth certificate rho|s|^{p+1} <= f(s)s <= alpha|s|^{q+1} + beta|s|^{p+1},
  // present only when holds_f2.
  struct Growth {
    double rho, p, alpha, q, beta;
  };
  std::optional<Growth> f2;
};

/// 2001 points on [-100, 100]: zero plus 1000 log-spaced magnitudes in
/// [1e-6, 100] on each side.
inline std::vector<double> default_hypothesis_grid() {
  std::vector<double> g;
  constexpr int n = 1000;
  g.reserve(2 * n + 1);
  for (int i = n - 1; i >= 0; --i) g.push_back(-std::pow(10.0, -6.0 + 8.0 * i / (n - 1)));
  g.push_back(0.0);
  for (int i = 0; i < n; ++i) g.push_back(std::pow(10.0, -6.0 + 8.0 * i / (n - 1)));
  return g;
}

namespace detail {

// Closed-form growth certificate, or nullopt when f is not bounded above and
// below by the same superlinear power.
inline std::optional<HypothesisReport::Growth> growth_certificate(const Nonlinearity& nl) {
  const auto& p = nl.params();
  switch (nl.kind()) {
    case NonlinKind::cubic:
      if (p.epsilon > 0.0) return HypothesisReport::Growth{p.epsilon, 3.0, 1.0, 1.0, p.epsilon};
      return std::nullopt;
    case NonlinKind::power:
      if (p.epsilon > 0.0) return HypothesisReport::Growth{p.epsilon, p.p_exp, 1.0, 1.0, p.epsilon};
      return std::nullopt;
    case NonlinKind::mckenna_cubic: {
      const double s = p.sigma_f, c = p.c_quad, d = p.d_cub;
      if (c * c <= 2.0 * d * s) return HypothesisReport::Growth{d / 2.0, 3.0, 2.0 * s, 1.0, 3.0 * d};
      if (s > 0.0 && c * c < 4.0 * d * s) {
        // sigma + c s + (d - rho) s^2 >= 0 and (beta - d) s^2 - c s + sigma >= 0.
        const double shift = c * c / (4.0 * s);
        return HypothesisReport::Growth{d - shift, 3.0, 2.0 * s, 1.0, d + shift};
      }
      if (s == 0.0 && c == 0.0) return HypothesisReport::Growth{d, 3.0, 0.0, 1.0, d};
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

}  // namespace detail

/// Checks the sign condition f(s)s > 0, the one-sided linear bound, the
/// monotonicity/convexity condition and the two-sided power growth bound.
/// Each flag combines the per-kind asymptotic analysis with the sampled
/// inequality on `grid`.
inline HypothesisReport check_hypotheses(const Nonlinearity& nl,
                                         const std::vector<double>& grid = default_hypothesis_grid()) {
  HypothesisReport r;
  const auto& p = nl.params();

  bool sign_ok = true, mono_ok = true;
  for (double s : grid) {
    if (s != 0.0 && !(nl.f(s) * s > 0.0)) sign_ok = false;
    if (nl.derivative(s) < 0.0) mono_ok = false;
  }
  r.holds_f = sign_ok && nl.kind() != NonlinKind::zero;

  switch (nl.kind()) {
    case NonlinKind::linear:
    case NonlinKind::piecewise:
    case NonlinKind::zero: r.holds_ff3 = true; break;
    case NonlinKind::exponential: r.holds_ff3 = true; break;  // f(s)/s -> 0 as s -> -inf
    case NonlinKind::cubic:
    case NonlinKind::power: r.holds_ff3 = p.epsilon == 0.0; break;
    case NonlinKind::mckenna_cubic: r.holds_ff3 = false; break;  // d > 0
  }

  // liminf_{s -> +-inf} |f''(s)| > 0 besides f' >= 0.
  bool curvature_ok = false;
  switch (nl.kind()) {
    case NonlinKind::cubic: curvature_ok = p.epsilon > 0.0; break;
    case NonlinKind::power: curvature_ok = p.epsilon > 0.0 && p.p_exp >= 2.0; break;
    case NonlinKind::mckenna_cubic:
      curvature_ok = true;
      mono_ok = mono_ok && (4.0 * p.c_quad * p.c_quad - 12.0 * p.d_cub * p.sigma_f <= 0.0);
      break;
    default: curvature_ok = false; break;
  }
  r.holds_fmono = mono_ok && curvature_ok;

  if (auto g = detail::growth_certificate(nl)) {
    bool ok = g->p > g->q && g->q >= 1.0 && g->alpha >= 0.0 && g->rho > 0.0 && g->rho <= g->beta;
    for (double s : grid) {
      if (!ok) break;
      const double a = std::abs(s);
      const double fs = nl.f(s) * s;
      const double lo = g->rho * std::pow(a, g->p + 1.0);
      const double hi = g->alpha * std::pow(a, g->q + 1.0) + g->beta * std::pow(a, g->p + 1.0);
      const double slack = 1e-12 * std::max(1.0, std::abs(fs));
      if (lo > fs + slack || fs > hi + slack) ok = false;
    }
    if (ok) {
      r.holds_f2 = true;
      r.f2 = g;
    }
  }
  return r;
}

}  // namespace bridge
