#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "bridge/errors.hpp"

namespace bridge::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

inline GaussRule gauss_legendre(std::size_t n) {
  if (n == 0) throw InvalidParameter("gauss_legendre: n must be >= 1");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n == 1) {
    r.nodes[0] = 0.0;
    r.weights[0] = 2.0;
  }
  return r;
}

/// Gauss rule mapped to [a, b].
struct MappedRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline MappedRule map_rule(const GaussRule& g, double a, double b) {
  MappedRule m;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  m.x.resize(g.size());
  m.w.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    m.x[i] = mid + half * g.nodes[i];
    m.w[i] = half * g.weights[i];
  }
  return m;
}

/// Axis-aligned rectangle (x1_lo, x1_hi) x (x2_lo, x2_hi).
struct Rect {
  double x1_lo = 0.0, x1_hi = 1.0;
  double x2_lo = 0.0, x2_hi = 1.0;

  double area() const { return (x1_hi - x1_lo) * (x2_hi - x2_lo); }
};

/// Tensor-product Gauss-Legendre integral of g(x1, x2) over `r` with n nodes
/// per axis.
template <class G>
double tensor_gauss(G&& g, const Rect& r, std::size_t n) {
  const auto base = gauss_legendre(n);
  const auto ax = map_rule(base, r.x1_lo, r.x1_hi);
  const auto ay = map_rule(base, r.x2_lo, r.x2_hi);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += ay.w[j] * g(ax.x[i], ay.x[j]);
    sum += ax.w[i] * row;
  }
  return sum;
}

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Tensor Gauss at n and 2n nodes per axis; reports the finer value and the
/// difference as the error estimate.
template <class G>
Estimate tensor_gauss_estimate(G&& g, const Rect& r, std::size_t n) {
  const double coarse = tensor_gauss(g, r, n);
  const double fine = tensor_gauss(g, r, 2 * n);
  return {fine, std::abs(fine - coarse)};
}

/// Composite Simpson on uniform samples; falls back to the trapezoid rule on
/// the last panel when the number of intervals is odd.
inline double simpson_uniform(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  const std::size_t intervals = n - 1;
  const std::size_t even = intervals - (intervals % 2);
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= even; i += 2) s += y[i] + 4.0 * y[i + 1] + y[i + 2];
  s *= h / 3.0;
  if (even != intervals) s += 0.5 * h * (y[n - 2] + y[n - 1]);
  return s;
}

}  // namespace bridge::quad
