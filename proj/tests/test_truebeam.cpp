#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bridge/truebeam.hpp"
#include "oracles.hpp"

using namespace bridge;
using namespace bridge::truebeam;

namespace {

constexpr double pi = std::numbers::pi;

TrueBeamConfig base(int M) {
  TrueBeamConfig c;
  c.modes_M = M;
  return c;
}

double measured_period(const std::vector<double>& zeros, int periods) {
  return (zeros[2 * periods] - zeros[0]) / periods;
}

}  // namespace

TEST(TrueBeam, ProjectInitialExamples) {
  const plate::PlateGeom g{pi, 0.5, 0.2};
  auto zero = [](double, double) { return 0.0; };
  const auto s0 = project_initial(zero, zero, g, 4);
  for (int m = 0; m < 4; ++m) {
    EXPECT_EQ(s0.a[m], 0.0);
    EXPECT_EQ(s0.b[m], 0.0);
    EXPECT_EQ(s0.ad[m], 0.0);
    EXPECT_EQ(s0.bd[m], 0.0);
  }
  const auto s1 = project_initial([&](double x1, double) { return std::sin(pi * x1 / g.length_L); }, zero, g, 4);
  EXPECT_NEAR(s1.a[0], 1.0, 1e-10);
  for (int m = 0; m < 4; ++m) {
    if (m) {
      EXPECT_NEAR(s1.a[m], 0.0, 1e-10);
    }
    EXPECT_NEAR(s1.b[m], 0.0, 1e-10);
  }
  const auto s2 =
      project_initial([&](double x1, double x2) { return x2 * std::sin(2 * pi * x1 / g.length_L); }, zero, g, 4);
  EXPECT_NEAR(s2.b[1], 1.0, 1e-10);
  for (int m = 0; m < 4; ++m) {
    EXPECT_NEAR(s2.a[m], 0.0, 1e-10);
    if (m != 1) {
      EXPECT_NEAR(s2.b[m], 0.0, 1e-10);
    }
  }
}

TEST(TrueBeam, ProjectionRoundTripsModalData) {
  const plate::PlateGeom g{5.0, 0.8, 0.2};
  ModalState s = ModalState::zero(5);
  s.a = {0.3, -0.1, 0.05, 0.0, 0.02};
  s.b = {-0.2, 0.0, 0.4, 0.1, 0.0};
  const auto back = project_initial([&](double x1, double x2) { return s.displacement(g, x1, x2); },
                                    [](double, double) { return 0.0; }, g, 5);
  for (int m = 0; m < 5; ++m) {
    EXPECT_NEAR(back.a[m], s.a[m], 1e-10);
    EXPECT_NEAR(back.b[m], s.b[m], 1e-10);
  }
}

TEST(TrueBeam, CompatibilityExamples) {
  const plate::PlateGeom g{pi, 0.5, 0.2};
  auto zero = [](double, double) { return 0.0; };
  auto u0 = [&](double x1, double) { return std::sin(pi * x1 / g.length_L); };
  EXPECT_EQ(check_compatibility(zero, zero, 1, g, 64), 0.0);
  EXPECT_EQ(check_compatibility(zero, zero, -1, g, 64), 0.0);
  EXPECT_EQ(check_compatibility(u0, zero, 1, g, 64), 0.0);
  EXPECT_NEAR(check_compatibility(u0, zero, -1, g, 64), 2.0, 1e-14);
  EXPECT_THROW(check_compatibility(u0, zero, 0, g, 64), InvalidParameter);
}

TEST(TrueBeam, ZeroDataZeroSolution) {
  auto cfg = base(3);
  cfg.nl = cubic(1.0);
  const auto tr = integrate_truebeam(cfg, ModalState::zero(3), 10.0);
  EXPECT_EQ(tr.termination, Termination::reached_t_end);
  EXPECT_TRUE(tr.events.empty());
  for (const auto& s : tr.samples) {
    for (double v : s.flat()) ASSERT_EQ(v, 0.0);
  }
}

TEST(TrueBeam, BarePlateFrequencies) {
  auto cfg = base(3);
  cfg.nl = make_nonlinearity(NonlinKind::zero);
  ModalState s = ModalState::zero(3);
  s.a = {1.0, 1.0, 1.0};
  const auto tr = integrate_truebeam(cfg, s, 66.0);
  ASSERT_EQ(tr.termination, Termination::reached_t_end);
  for (int m = 0; m < 3; ++m) {
    const double lam = std::pow((m + 1) * pi / cfg.geom.length_L, 4);
    const double T = 2 * pi / std::sqrt(lam);
    const auto z = tr.zero_crossings(m);
    ASSERT_GE(z.size(), 21u);
    EXPECT_NEAR(measured_period(z, 10), T, 1e-3 * T) << m;
    // closed form a(t) = cos(sqrt(lam) t)
    for (double t : {1.0, 17.0, 50.0}) EXPECT_NEAR(tr.component_at(t, m), std::cos(std::sqrt(lam) * t), 1e-7);
  }
  for (const auto& smp : tr.samples) {
    for (int m = 0; m < 3; ++m) ASSERT_EQ(smp.b[m], 0.0);
  }
}

TEST(TrueBeam, LinearRestoringForceShiftsFrequency) {
  auto cfg = base(2);
  cfg.nl = linear();
  ModalState s = ModalState::zero(2);
  s.a = {1.0, 0.5};
  const auto tr = integrate_truebeam(cfg, s, 50.0);
  for (int m = 0; m < 2; ++m) {
    const double w = std::sqrt(std::pow(m + 1.0, 4) + 1.0);
    const auto z = tr.zero_crossings(m);
    ASSERT_GE(z.size(), 21u);
    EXPECT_NEAR(measured_period(z, 10), 2 * pi / w, 1e-3 * 2 * pi / w);
  }
}

TEST(TrueBeam, PenaltyDecayOfTorsion) {
  auto cfg = base(3);
  cfg.nl = linear();
  cfg.frozen_switch = 1;
  ModalState s = ModalState::zero(3);
  s.b[0] = 1.0;
  const auto tr = integrate_truebeam(cfg, s, 5.0);
  ASSERT_EQ(tr.termination, Termination::reached_t_end);
  const double b5 = tr.samples.back().b[0];
  EXPECT_LE(std::abs(b5), 0.05);
  // b'' + (lam + 1) b + kappa (b' + b) = 0 with lam = 1
  const double kappa = cfg.bc_penalty_kappa;
  for (double t : {0.5, 1.0, 2.5, 5.0}) {
    const auto ref = oracle::rk4<2>(
        [&](double, const std::array<double, 2>& y, std::array<double, 2>& d) {
          d = {y[1], -2.0 * y[0] - kappa * (y[1] + y[0])};
        },
        {1.0, 0.0}, 0.0, t, 200000);
    EXPECT_NEAR(tr.component_at(t, 2 * 3), ref[0], 1e-7) << t;
  }
}

TEST(TrueBeam, GustCrossingGivesSingleEvent) {
  auto cfg = base(2);
  cfg.nl = cubic(0.5);
  cfg.damping_delta = 0.05;
  cfg.threshold_Ebar = 1.0;
  cfg.forcing.knots = {{0.0, 0.0}, {2.0, 2.0}};
  cfg.forcing.p = {1.0};
  // E(t) = t^2 * int (sin x1)^2 = t^2 * L l = t^2 pi / 2 for t <= 2
  const double t_star = std::sqrt(cfg.threshold_Ebar / (cfg.geom.length_L * cfg.geom.half_width_l));
  const auto tr = integrate_truebeam(cfg, ModalState::zero(2), 6.0);
  ASSERT_EQ(tr.termination, Termination::reached_t_end);
  ASSERT_EQ(tr.events.size(), 1u);
  EXPECT_NEAR(tr.events[0].t_switch, t_star, 1e-6);
  EXPECT_EQ(tr.events[0].direction, -1);
  EXPECT_EQ(tr.samples.front().switch_value, 1);
  EXPECT_EQ(tr.samples.back().switch_value, -1);
}

TEST(TrueBeam, TriangularGustSwitchesTwice) {
  auto cfg = base(2);
  cfg.forcing.knots = {{0.0, 0.0}, {2.0, 2.0}, {4.0, 0.0}};
  cfg.forcing.p = {1.0};
  cfg.forcing.q = {0.0, 0.5};
  const double I = pi / 2 + 0.25 * pi * 0.125 / 3.0;  // L l p1^2 + q2^2 L l^3 / 3
  const GustEnergy ge(cfg.geom, cfg.forcing);
  EXPECT_NEAR(ge.spatial_integral(), I, 1e-12);
  const auto tr = integrate_truebeam(cfg, ModalState::zero(2), 6.0);
  ASSERT_EQ(tr.events.size(), 2u);
  EXPECT_NEAR(tr.events[0].t_switch, std::sqrt(1.0 / I), 1e-6);
  EXPECT_NEAR(tr.events[1].t_switch, 4.0 - std::sqrt(1.0 / I), 1e-6);
  EXPECT_EQ(tr.events[0].direction, -1);
  EXPECT_EQ(tr.events[1].direction, 1);
}

TEST(TrueBeam, EnergyDissipatesWithoutForcing) {
  for (int sw : {1, -1}) {
    auto cfg = base(3);
    cfg.nl = cubic(0.5);
    cfg.damping_delta = 0.2;
    cfg.frozen_switch = sw;
    ModalState s = ModalState::zero(3);
    s.switch_value = sw;
    s.a = {0.6, -0.2, 0.1};
    s.b = {0.3, 0.1, 0.0};
    s.ad = {0.0, 0.5, 0.0};
    const auto tr = integrate_truebeam(cfg, s, 8.0);
    const EnergyMeter meter(cfg, 3);
    double prev = meter(tr.samples.front());
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
      const double e = meter(tr.samples[i]);
      ASSERT_LE(e, prev + 1e-8) << "switch " << sw << " t=" << tr.samples[i].t;
      prev = e;
    }
    EXPECT_LT(prev, 0.5 * meter(tr.samples.front()));
  }
}

TEST(TrueBeam, SwitchingSemanticsExponentialEnvelope) {
  for (int sw : {1, -1}) {
    auto cfg = base(2);
    cfg.nl = linear();
    cfg.frozen_switch = sw;
    ModalState s = ModalState::zero(2);
    s.switch_value = sw;
    auto& pen = sw == 1 ? s.b : s.a;
    pen = {1.0, -0.5};
    const auto tr = integrate_truebeam(cfg, s, 5.0);
    const double tol = 1.0 / cfg.bc_penalty_kappa;
    const double g0 = 1.0;
    double lowest = g0;
    for (const auto& smp : tr.samples) {
      const auto& v = sw == 1 ? smp.b : smp.a;
      const double g = std::max(std::abs(v[0]), std::abs(v[1])) * std::exp(smp.t);
      ASSERT_LE(g, lowest + tol * g0) << "switch " << sw << " t=" << smp.t;
      lowest = std::min(lowest, g);
    }
    EXPECT_LT(lowest, 0.9 * g0);
  }
}

TEST(TrueBeam, TruncationConsistency) {
  auto run = [](int M) {
    auto cfg = base(M);
    cfg.nl = cubic(0.5);
    cfg.damping_delta = 0.05;
    ModalState s = ModalState::zero(M);
    s.a[0] = 0.5;
    s.b[0] = 0.3;
    s.ad[1] = 0.2;
    return integrate_truebeam(cfg, s, 5.0);
  };
  const auto t4 = run(4), t8 = run(8);
  double da = 0.0, db = 0.0, ma = 0.0, mb = 0.0;
  for (double t = 0.0; t <= 5.0; t += 0.01) {
    const double a4 = t4.component_at(t, 0), a8 = t8.component_at(t, 0);
    const double b4 = t4.component_at(t, 2 * 4), b8 = t8.component_at(t, 2 * 8);
    da = std::max(da, std::abs(a4 - a8));
    db = std::max(db, std::abs(b4 - b8));
    ma = std::max(ma, std::abs(a8));
    mb = std::max(mb, std::abs(b8));
  }
  EXPECT_LT(da, 0.01 * ma);
  EXPECT_LT(db, 0.01 * mb);
}

TEST(TrueBeam, ReconstructionIsLinearInX2) {
  const plate::PlateGeom g{pi, 0.5, 0.2};
  auto cfg = base(3);
  cfg.nl = cubic(1.0);
  ModalState s = ModalState::zero(3);
  s.a = {0.4, 0.1, -0.2};
  s.b = {0.5, -0.3, 0.2};
  const auto tr = integrate_truebeam(cfg, s, 2.0);
  const double h = 0.1;
  for (const auto& smp : tr.samples) {
    for (double x1 : {0.3, 1.1, 2.9}) {
      for (double x2 : {-0.3, 0.0, 0.35}) {
        const double d2 = smp.displacement(g, x1, x2 + h) - 2 * smp.displacement(g, x1, x2) +
                          smp.displacement(g, x1, x2 - h);
        ASSERT_NEAR(d2 / (h * h), 0.0, 1e-12);
      }
    }
  }
}

TEST(TrueBeam, NonlinearProjectionMatchesDirectQuadrature) {
  // a1 only: P^v_1[u + eps u^3] = a + eps a^3 * (3/4), P^v_3 = -eps a^3 / 4
  auto cfg = base(3);
  cfg.nl = cubic(1.0);
  cfg.frozen_switch = 1;
  ModalState s = ModalState::zero(3);
  s.a[0] = 0.8;
  const double t = 1e-2;
  const auto tr = integrate_truebeam(cfg, s, t);
  // a3 starts from rest, so a3(t) ~ -P3 t^2 / 2
  const double a3 = tr.samples.back().a[2];
  const double expect = 0.5 * (0.8 * 0.8 * 0.8 / 4.0) * t * t;
  EXPECT_NEAR(a3, expect, 5e-3 * expect);
}

TEST(TrueBeam, ConfigValidation) {
  auto cfg = base(0);
  EXPECT_THROW(integrate_truebeam(cfg, ModalState::zero(1), 1.0), InvalidParameter);
  cfg = base(2);
  cfg.bc_penalty_kappa = 0.0;
  EXPECT_THROW(integrate_truebeam(cfg, ModalState::zero(2), 1.0), InvalidParameter);
  cfg = base(2);
  cfg.frozen_switch = 2;
  EXPECT_THROW(integrate_truebeam(cfg, ModalState::zero(2), 1.0), InvalidParameter);
  cfg = base(2);
  EXPECT_THROW(integrate_truebeam(cfg, ModalState::zero(3), 1.0), InvalidParameter);
  cfg.forcing.knots = {{1.0, 0.0}, {0.5, 1.0}};
  EXPECT_THROW(integrate_truebeam(cfg, ModalState::zero(2), 1.0), InvalidParameter);
}
