#pragma once

// Analytic eigenmodes of the biharmonic operator on the rectangle
// (0, L) x (-l, l) and on the square (0, pi) x (-pi/2, pi/2) with Navier
// conditions. Every mode is separable, u = X(x1) Y(x2), so partial
// derivatives of any order are closed-form products.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include "bridge/errors.hpp"

namespace bridge::plate {

struct PlateGeom {
  double length_L = std::numbers::pi;
  double half_width_l = 0.5;
  double poisson_sigma = 0.2;

  void validate() const {
    if (!(length_L > 0.0)) throw InvalidParameter("plate: L must be > 0");
    if (!(half_width_l > 0.0)) throw InvalidParameter("plate: half width must be > 0");
    if (!(poisson_sigma >= 0.0 && poisson_sigma < 0.5)) {
      throw InvalidParameter("plate: Poisson ratio must lie in [0, 0.5)");
    }
  }

  /// The square of the Navier example.
  static PlateGeom navier_square() { return {std::numbers::pi, 0.5 * std::numbers::pi, 0.2}; }
};

enum class ModeFamily { vertical, torsional, navier_square };

inline std::string_view to_string(ModeFamily f) {
  switch (f) {
    case ModeFamily::vertical: return "vertical";
    case ModeFamily::torsional: return "torsional";
    case ModeFamily::navier_square: return "navier_square";
  }
  return "?";
}

namespace detail {

// n-th derivative of sin(k x).
inline double dsin(double k, double x, int n) {
  const double kn = std::pow(k, n);
  switch (n % 4) {
    case 0: return kn * std::sin(k * x);
    case 1: return kn * std::cos(k * x);
    case 2: return -kn * std::sin(k * x);
    default: return -kn * std::cos(k * x);
  }
}

inline double dcos(double k, double x, int n) {
  const double kn = std::pow(k, n);
  switch (n % 4) {
    case 0: return kn * std::cos(k * x);
    case 1: return -kn * std::sin(k * x);
    case 2: return -kn * std::cos(k * x);
    default: return kn * std::sin(k * x);
  }
}

}  // namespace detail

struct Mode {
  ModeFamily family = ModeFamily::vertical;
  int m_index = 1;
  int n_index = 0;  // navier_square only
  double lambda = 0.0;
  double k1 = 0.0;  // wave number along x1

  double sqrt_lambda() const { return std::sqrt(lambda); }

  /// d^i/dx1^i d^j/dx2^j u at (x1, x2).
  double deriv(int i, int j, double x1, double x2) const {
    const double X = detail::dsin(k1, x1, i);
    double Y = 0.0;
    switch (family) {
      case ModeFamily::vertical: Y = j == 0 ? 1.0 : 0.0; break;
      case ModeFamily::torsional: Y = j == 0 ? x2 : (j == 1 ? 1.0 : 0.0); break;
      case ModeFamily::navier_square: {
        const double n = n_index;
        Y = n_index % 2 == 1 ? detail::dcos(n, x2, j) : detail::dsin(n, x2, j);
        break;
      }
    }
    return X * Y;
  }

  double u(double x1, double x2) const { return deriv(0, 0, x1, x2); }

  double bilaplacian(double x1, double x2) const {
    return deriv(4, 0, x1, x2) + 2.0 * deriv(2, 2, x1, x2) + deriv(0, 4, x1, x2);
  }
};

inline Mode vertical_mode(const PlateGeom& g, int m) {
  if (m < 1) throw InvalidParameter("mode index must be >= 1");
  const double k = m * std::numbers::pi / g.length_L;
  return {ModeFamily::vertical, m, 0, k * k * k * k, k};
}

inline Mode torsional_mode(const PlateGeom& g, int m) {
  Mode md = vertical_mode(g, m);
  md.family = ModeFamily::torsional;
  return md;
}

/// sin(m x1) T_n(x2) on the Navier square; T_n = cos for odd n, sin for even n.
inline Mode navier_mode(int m, int n) {
  if (m < 1 || n < 1) throw InvalidParameter("navier mode indices must be >= 1");
  const double s = static_cast<double>(m) * m + static_cast<double>(n) * n;
  return {ModeFamily::navier_square, m, n, s * s, static_cast<double>(m)};
}

/// Vertical and torsional modes m = 1..m_max, in that order per m.
inline std::vector<Mode> analytic_modes(const PlateGeom& g, int m_max) {
  g.validate();
  if (m_max < 1) throw InvalidParameter("analytic_modes: m_max must be >= 1");
  std::vector<Mode> out;
  out.reserve(2 * static_cast<std::size_t>(m_max));
  for (int m = 1; m <= m_max; ++m) {
    out.push_back(vertical_mode(g, m));
    out.push_back(torsional_mode(g, m));
  }
  return out;
}

enum class BcKind { eigen1, eigen2, navier };

inline std::string_view to_string(BcKind b) {
  switch (b) {
    case BcKind::eigen1: return "eigen1";
    case BcKind::eigen2: return "eigen2";
    case BcKind::navier: return "navier";
  }
  return "?";
}

struct ModeResidual {
  double interior = 0.0;   // |bilaplacian u - lambda u|
  double ends = 0.0;       // |u|, |u_x1x1| on x1 in {0, L}
  double side_u = 0.0;     // navier: |u| on x2 = +-l
  double side_u22 = 0.0;   // |u_x2x2| on x2 = +-l
  double side_u222 = 0.0;  // eigen2: |u_x2x2x2| on x2 = +-l
  double nonlocal = 0.0;   // eigen1: |2 l u_x2(x1, +-l) - (u(x1, l) - u(x1, -l))|

  double max() const { return std::max({interior, ends, side_u, side_u22, side_u222, nonlocal}); }
};

/// Residuals of the eigenpair on a (grid_n + 1)^2 tensor grid (interior) and
/// grid_n + 1 points per side. Navier modes live on the square regardless of
/// `g`.
inline ModeResidual verify_mode(const PlateGeom& g, const Mode& md, BcKind bc, int grid_n) {
  if (grid_n < 16) throw InvalidParameter("verify_mode: grid_n must be >= 16");
  const PlateGeom geo = md.family == ModeFamily::navier_square ? PlateGeom::navier_square() : g;
  const double L = geo.length_L, l = geo.half_width_l;
  ModeResidual r;
  for (int i = 0; i <= grid_n; ++i) {
    const double x1 = L * i / grid_n;
    for (int j = 0; j <= grid_n; ++j) {
      const double x2 = -l + 2.0 * l * j / grid_n;
      r.interior = std::max(r.interior, std::abs(md.bilaplacian(x1, x2) - md.lambda * md.u(x1, x2)));
    }
  }
  for (int j = 0; j <= grid_n; ++j) {
    const double x2 = -l + 2.0 * l * j / grid_n;
    for (double x1 : {0.0, L}) {
      r.ends = std::max({r.ends, std::abs(md.u(x1, x2)), std::abs(md.deriv(2, 0, x1, x2))});
    }
  }
  for (int i = 0; i <= grid_n; ++i) {
    const double x1 = L * i / grid_n;
    for (double x2 : {-l, l}) {
      r.side_u22 = std::max(r.side_u22, std::abs(md.deriv(0, 2, x1, x2)));
      if (bc == BcKind::navier) r.side_u = std::max(r.side_u, std::abs(md.u(x1, x2)));
      if (bc == BcKind::eigen2) r.side_u222 = std::max(r.side_u222, std::abs(md.deriv(0, 3, x1, x2)));
      if (bc == BcKind::eigen1) {
        const double jump = md.u(x1, l) - md.u(x1, -l);
        r.nonlocal = std::max(r.nonlocal, std::abs(2.0 * l * md.deriv(0, 1, x1, x2) - jump));
      }
    }
  }
  return r;
}

namespace detail {

inline std::int64_t isqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

}  // namespace detail

/// All (m, n) with m, n >= 1 and m^2 + n^2 = S, ordered by decreasing m.
inline std::vector<std::pair<int, int>> sum_of_two_squares(std::int64_t S) {
  std::vector<std::pair<int, int>> out;
  if (S < 2) return out;
  for (std::int64_t m = detail::isqrt(S - 1); m >= 1; --m) {
    const std::int64_t rest = S - m * m;
    const std::int64_t n = detail::isqrt(rest);
    if (n >= 1 && n * n == rest) out.emplace_back(static_cast<int>(m), static_cast<int>(n));
  }
  return out;
}

/// Navier-square modes with eigenvalue S^2.
inline std::vector<Mode> navier_square_search(std::int64_t S) {
  if (S < 2) throw InvalidParameter("navier_square_search: S must be >= 2");
  std::vector<Mode> out;
  for (auto [m, n] : sum_of_two_squares(S)) out.push_back(navier_mode(m, n));
  return out;
}

}  // namespace bridge::plate
