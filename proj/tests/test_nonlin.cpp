#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bridge/errors.hpp"
#include "bridge/nonlin.hpp"

using namespace bridge;

namespace {

std::vector<Nonlinearity> all_kinds() {
  std::vector<Nonlinearity> out;
  out.push_back(linear());
  out.push_back(cubic(1.0));
  out.push_back(cubic(0.01));
  NonlinParams pw;
  pw.epsilon = 0.5;
  pw.p_exp = 2.5;
  out.push_back(make_nonlinearity(NonlinKind::power, pw));
  out.push_back(make_nonlinearity(NonlinKind::piecewise));
  NonlinParams ex;
  ex.a_coef = 1.0;
  ex.b_coef = 0.5;
  out.push_back(make_nonlinearity(NonlinKind::exponential, ex));
  NonlinParams mk;
  mk.sigma_f = 1.0;
  mk.c_quad = 0.5;
  mk.d_cub = 1.0;
  out.push_back(make_nonlinearity(NonlinKind::mckenna_cubic, mk));
  out.push_back(make_nonlinearity(NonlinKind::zero));
  return out;
}

NonlinParams mckenna(double s, double c, double d) {
  NonlinParams p;
  p.sigma_f = s;
  p.c_quad = c;
  p.d_cub = d;
  return p;
}

}  // namespace

TEST(Nonlin, Examples) {
  EXPECT_DOUBLE_EQ(cubic(1.0).f(2.0), 10.0);
  EXPECT_DOUBLE_EQ(make_nonlinearity(NonlinKind::piecewise).f(-2.0), -1.0);
  NonlinParams ex;
  ex.a_coef = 1.0;
  ex.b_coef = 1.0;
  EXPECT_DOUBLE_EQ(make_nonlinearity(NonlinKind::exponential, ex).f(0.0), 0.0);
}

TEST(Nonlin, FormulasMatchDefinitions) {
  const auto pw = make_nonlinearity(NonlinKind::piecewise);
  for (double s : {-5.0, -1.0, -0.5, 0.0, 2.0}) EXPECT_DOUBLE_EQ(pw.f(s), std::max(s + 1.0, 0.0) - 1.0);
  const auto mk = make_nonlinearity(NonlinKind::mckenna_cubic, mckenna(2.0, -1.0, 3.0));
  for (double s : {-2.0, 0.3, 4.0}) EXPECT_NEAR(mk.f(s), 2.0 * s - s * s + 3.0 * s * s * s, 1e-12);
  NonlinParams p;
  p.epsilon = 2.0;
  p.p_exp = 3.0;
  const auto pc = make_nonlinearity(NonlinKind::power, p);
  const auto cb = cubic(2.0);
  for (double s : {-3.0, -0.1, 0.7, 5.0}) EXPECT_NEAR(pc.f(s), cb.f(s), 1e-12 * (1 + std::abs(cb.f(s))));
  // odd extension for non-integer exponents
  p.p_exp = 2.5;
  const auto odd = make_nonlinearity(NonlinKind::power, p);
  EXPECT_DOUBLE_EQ(odd.f(-1.7), -odd.f(1.7));
}

TEST(Nonlin, InvalidParametersRejected) {
  NonlinParams p;
  p.epsilon = -1.0;
  EXPECT_THROW(make_nonlinearity(NonlinKind::cubic, p), InvalidParameter);
  p = {};
  p.p_exp = 1.0;
  EXPECT_THROW(make_nonlinearity(NonlinKind::power, p), InvalidParameter);
  p = {};
  p.b_coef = 0.0;
  EXPECT_THROW(make_nonlinearity(NonlinKind::exponential, p), InvalidParameter);
  p = {};
  p.a_coef = -1.0;
  EXPECT_THROW(make_nonlinearity(NonlinKind::exponential, p), InvalidParameter);
  p = {};
  p.epsilon = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(make_nonlinearity(NonlinKind::cubic, p), InvalidParameter);
  EXPECT_THROW(nonlin_kind_from_string("quartic"), InvalidParameter);
}

TEST(Nonlin, KindNamesRoundTrip) {
  for (auto k : {NonlinKind::linear, NonlinKind::cubic, NonlinKind::power, NonlinKind::piecewise,
                 NonlinKind::exponential, NonlinKind::mckenna_cubic, NonlinKind::zero}) {
    EXPECT_EQ(nonlin_kind_from_string(to_string(k)), k);
  }
}

TEST(Nonlin, AntiderivativeVanishesAtZero) {
  for (const auto& nl : all_kinds()) EXPECT_EQ(nl.antiderivative(0.0), 0.0) << to_string(nl.kind());
}

// |(F(s+h) - F(s-h))/2h - f(s)| <= C h^2 with C set by the size of the third
// derivative, which stays below 1e5 (1 + |f| + |F|) on [-10, 10] for all kinds.
TEST(Nonlin, AntiderivativeCentralDifference) {
  const double h = 1e-4;
  for (const auto& nl : all_kinds()) {
    for (int i = 0; i <= 2000; ++i) {
      const double s = -10.0 + 20.0 * i / 2000.0 + 1.3e-5;  // stay off the piecewise kink
      const double fd = (nl.antiderivative(s + h) - nl.antiderivative(s - h)) / (2 * h);
      const double C = 1e5 * (1.0 + std::abs(nl.f(s)) + std::abs(nl.antiderivative(s)));
      ASSERT_LE(std::abs(fd - nl.f(s)), C * h * h) << to_string(nl.kind()) << " s=" << s;
    }
  }
}

TEST(Nonlin, DerivativeCentralDifference) {
  const double h = 1e-4;
  for (const auto& nl : all_kinds()) {
    for (int i = 0; i <= 2000; ++i) {
      const double s = -10.0 + 20.0 * i / 2000.0 + 1.3e-5;
      if (nl.kind() == NonlinKind::piecewise && std::abs(s + 1.0) < 2 * h) continue;
      if (nl.kind() == NonlinKind::power && std::abs(s) < 2 * h) continue;  // |s|^{p-1} not C^2 at 0
      const double fd = (nl.f(s + h) - nl.f(s - h)) / (2 * h);
      const double C = 1e5 * (1.0 + std::abs(nl.f(s)) + std::abs(nl.derivative(s)));
      ASSERT_LE(std::abs(fd - nl.derivative(s)), C * h * h) << to_string(nl.kind()) << " s=" << s;
    }
  }
}

TEST(Nonlin, SignPropertyForKindsClaimingIt) {
  for (const auto& nl : all_kinds()) {
    if (!check_hypotheses(nl).holds_f) continue;
    for (int i = 0; i < 1000; ++i) {
      const double s = -50.0 + 100.0 * (i + 0.5) / 1000.0;
      ASSERT_GT(s * nl.f(s), 0.0) << to_string(nl.kind()) << " s=" << s;
    }
  }
}

TEST(Nonlin, HypothesisExamples) {
  const auto r = check_hypotheses(cubic(0.01));
  EXPECT_TRUE(r.holds_f);
  EXPECT_TRUE(r.holds_fmono);
  ASSERT_TRUE(r.holds_f2);
  ASSERT_TRUE(r.f2.has_value());
  EXPECT_EQ(r.f2->p, 3.0);
  EXPECT_EQ(r.f2->q, 1.0);

  EXPECT_TRUE(check_hypotheses(make_nonlinearity(NonlinKind::piecewise)).holds_ff3);

  // f'(s) = 1 + 4s + 3s^2 has real roots: discriminant 16 - 12 > 0
  const double disc = 4.0 * 4.0 - 4.0 * 3.0 * 1.0;
  ASSERT_GT(disc, 0.0);
  EXPECT_FALSE(check_hypotheses(make_nonlinearity(NonlinKind::mckenna_cubic, mckenna(1, 2, 1))).holds_fmono);
}

TEST(Nonlin, ZeroKindClaimsNothingAboutSign) {
  const auto r = check_hypotheses(make_nonlinearity(NonlinKind::zero));
  EXPECT_FALSE(r.holds_f);
  EXPECT_FALSE(r.holds_f2);
}

TEST(Nonlin, LinearHasNoSuperlinearGrowth) {
  const auto r = check_hypotheses(linear());
  EXPECT_TRUE(r.holds_f);
  EXPECT_TRUE(r.holds_ff3);
  EXPECT_FALSE(r.holds_f2);
  EXPECT_FALSE(r.holds_fmono);
}

TEST(Nonlin, GrowthCertificateInvariants) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(0.05, 3.0);
  const auto grid = default_hypothesis_grid();
  int certified = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double s = U(rng), d = U(rng);
    const double c = std::uniform_real_distribution<double>(-1.0, 1.0)(rng) * std::sqrt(2.0 * d * s);
    const auto nl = make_nonlinearity(NonlinKind::mckenna_cubic, mckenna(s, c, d));
    const auto r = check_hypotheses(nl, grid);
    ASSERT_TRUE(r.holds_f2) << s << " " << c << " " << d;
    const auto& g = *r.f2;
    EXPECT_GT(g.p, g.q);
    EXPECT_GE(g.q, 1.0);
    EXPECT_GE(g.alpha, 0.0);
    EXPECT_GT(g.rho, 0.0);
    EXPECT_LE(g.rho, g.beta);
    for (double v : grid) {
      const double a = std::abs(v), fs = nl.f(v) * v;
      const double slack = 1e-12 * std::max(1.0, std::abs(fs));
      ASSERT_LE(g.rho * std::pow(a, g.p + 1), fs + slack);
      ASSERT_LE(fs, g.alpha * std::pow(a, g.q + 1) + g.beta * std::pow(a, g.p + 1) + slack);
    }
    ++certified;
  }
  EXPECT_EQ(certified, 200);
}

TEST(Nonlin, McKennaMonotoneWhenQuadraticIsSmall) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.05, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double s = U(rng), d = U(rng);
    const double c = std::uniform_real_distribution<double>(-1.0, 1.0)(rng) * std::sqrt(2.0 * d * s);
    ASSERT_LT(4 * c * c - 12 * d * s, 0.0);
    const auto nl = make_nonlinearity(NonlinKind::mckenna_cubic, mckenna(s, c, d));
    for (double v : default_hypothesis_grid()) ASSERT_GE(nl.derivative(v), 0.0);
    EXPECT_TRUE(check_hypotheses(nl).holds_fmono);
  }
}

TEST(Nonlin, DefaultGridShape) {
  const auto g = default_hypothesis_grid();
  ASSERT_EQ(g.size(), 2001u);
  EXPECT_DOUBLE_EQ(g.front(), -100.0);
  EXPECT_DOUBLE_EQ(g.back(), 100.0);
  EXPECT_EQ(g[1000], 0.0);
  EXPECT_LE(g[1001], 1e-6 * 1.0000001);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_LT(g[i - 1], g[i]);
}
