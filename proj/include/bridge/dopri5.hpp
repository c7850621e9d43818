#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with step-size control and
// the fourth-order continuous extension (Hairer, Norsett & Wanner, DOPRI5).
//
// State is any fixed- or dynamic-size contiguous container of doubles
// (std::array<double, N> or std::vector<double>).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace bridge::rk {

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.0;      // <= 0 means unbounded
  double initial_step = 0.0;  // <= 0 means automatic
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 10.0;
};

namespace detail {

template <class State>
State zeros_like(const State& s) {
  State z = s;
  std::fill(z.begin(), z.end(), 0.0);
  return z;
}

}  // namespace detail

/// Continuous extension over one accepted step [t0, t0 + h].
template <class State>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State, 5> coef{};

  double t1() const { return t0 + h; }

  State operator()(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    State y = coef[0];
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = coef[0][i] +
             th * (coef[1][i] + th1 * (coef[2][i] + th * (coef[3][i] + th1 * coef[4][i])));
    }
    return y;
  }

  double component(double t, std::size_t i) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return coef[0][i] + th * (coef[1][i] + th1 * (coef[2][i] + th * (coef[3][i] + th1 * coef[4][i])));
  }
};

enum class StepOutcome { accepted, underflow };

/// Adaptive DOPRI5 stepper. `Rhs` is callable as rhs(t, y, dydt).
template <class State, class Rhs>
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, double t0, State y0, StepControl ctl)
      : rhs_(std::move(rhs)), ctl_(ctl), t_(t0), y_(std::move(y0)) {
    k1_ = detail::zeros_like(y_);
    rhs_(t_, y_, k1_);
    ++n_eval_;
    h_ = ctl_.initial_step > 0.0 ? ctl_.initial_step : initial_step();
  }

  double t() const { return t_; }
  const State& y() const { return y_; }
  const State& dydt() const { return k1_; }
  double step_size() const { return h_; }
  const DenseSegment<State>& last_segment() const { return seg_; }
  long evaluations() const { return n_eval_; }
  long rejected() const { return n_reject_; }

  /// Error norm of the last accepted step relative to the tolerance (<= 1).
  double last_error() const { return last_err_; }

  /// Takes one accepted step, never stepping past t_limit.
  StepOutcome step(double t_limit) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                            d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                            d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

    const std::size_t n = y_.size();
    State k2 = k1_, k3 = k1_, k4 = k1_, k5 = k1_, k6 = k1_, k7 = k1_, tmp = y_, ynew = y_;
    const double eps = std::numeric_limits<double>::epsilon();

    for (;;) {
      double h = h_;
      if (ctl_.max_step > 0.0) h = std::min(h, ctl_.max_step);
      bool last = false;
      if (t_ + h >= t_limit) {
        h = t_limit - t_;
        last = true;
      }
      // written negated so a NaN step also counts as underflow
      if (!(h > 16.0 * eps * std::max(1.0, std::abs(t_)))) return StepOutcome::underflow;

      for (std::size_t i = 0; i < n; ++i) tmp[i] = y_[i] + h * a21 * k1_[i];
      rhs_(t_ + c2 * h, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
      rhs_(t_ + c3 * h, tmp, k3);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
      rhs_(t_ + c4 * h, tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs_(t_ + c5 * h, tmp, k5);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      const double tph = last ? t_limit : t_ + h;
      rhs_(tph, tmp, k6);
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      rhs_(tph, ynew, k7);
      n_eval_ += 6;

      double err = 0.0;
      bool finite = true;
      for (std::size_t i = 0; i < n; ++i) {
        const double e = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = ctl_.abs_tol + ctl_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
        const double r = e / sc;
        err += r * r;
        if (!std::isfinite(ynew[i])) finite = false;
      }
      err = std::sqrt(err / static_cast<double>(n));
      if (!finite || !std::isfinite(err)) err = 1e10;

      if (err <= 1.0) {
        seg_.t0 = t_;
        seg_.h = h;
        seg_.coef[0] = y_;
        State ydiff = ynew, bspl = ynew, c4v = ynew, c5v = ynew;
        for (std::size_t i = 0; i < n; ++i) {
          ydiff[i] = ynew[i] - y_[i];
          bspl[i] = h * k1_[i] - ydiff[i];
          c4v[i] = ydiff[i] - h * k7[i] - bspl[i];
          c5v[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        seg_.coef[1] = ydiff;
        seg_.coef[2] = bspl;
        seg_.coef[3] = c4v;
        seg_.coef[4] = c5v;

        t_ = tph;
        y_ = ynew;
        k1_ = k7;
        last_err_ = err;
        const double fac = err > 0.0 ? ctl_.safety * std::pow(err, -0.2) : ctl_.max_factor;
        const double grown = h * std::clamp(fac, ctl_.min_factor, ctl_.max_factor);
        // A step shortened to land on t_limit should not shrink the next one.
        h_ = last ? std::max(h_, grown) : grown;
        return StepOutcome::accepted;
      }
      ++n_reject_;
      h_ = h * std::max(ctl_.min_factor, ctl_.safety * std::pow(err, -0.2));
    }
  }

 private:
  double initial_step() {
    // Hairer's starting-step heuristic.
    const std::size_t n = y_.size();
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = ctl_.abs_tol + ctl_.rel_tol * std::abs(y_[i]);
      d0 += (y_[i] / sc) * (y_[i] / sc);
      d1 += (k1_[i] / sc) * (k1_[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    if (ctl_.max_step > 0.0) h0 = std::min(h0, ctl_.max_step);
    State y1 = y_, f1 = k1_;
    for (std::size_t i = 0; i < n; ++i) y1[i] = y_[i] + h0 * k1_[i];
    rhs_(t_ + h0, y1, f1);
    ++n_eval_;
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = ctl_.abs_tol + ctl_.rel_tol * std::abs(y_[i]);
      const double v = (f1[i] - k1_[i]) / sc;
      d2 += v * v;
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    double h = std::min(100.0 * h0, h1);
    if (ctl_.max_step > 0.0) h = std::min(h, ctl_.max_step);
    // tiny tolerances overflow the norms above
    if (!std::isfinite(h) || !(h > 0.0)) h = ctl_.max_step > 0.0 ? std::min(1e-6, ctl_.max_step) : 1e-6;
    return h;
  }

  Rhs rhs_;
  StepControl ctl_;
  double t_;
  State y_;
  State k1_;
  double h_ = 0.0;
  double last_err_ = 0.0;
  long n_eval_ = 0;
  long n_reject_ = 0;
  DenseSegment<State> seg_{};
};

template <class State, class Rhs>
DormandPrince<State, Rhs> make_stepper(Rhs rhs, double t0, State y0, StepControl ctl) {
  return DormandPrince<State, Rhs>(std::move(rhs), t0, std::move(y0), ctl);
}

/// Bisection for a sign change of g on [a, b] (g(a) and g(b) of opposite sign
/// or one of them zero).
template <class G>
double bisect_root(G&& g, double a, double b, double tol = 1e-12) {
  double ga = g(a);
  if (ga == 0.0) return a;
  double gb = g(b);
  if (gb == 0.0) return b;
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if (gm == 0.0) return m;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace bridge::rk
