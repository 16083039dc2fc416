#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sirlyap/errors.hpp"
#include "sirlyap/lyap_en.hpp"
#include "sirlyap/ode.hpp"

namespace sirlyap {
namespace {

EnLyapParams witness_params() {
  EnLyapParams lp;
  lp.lambda_hat2 = 0.01;
  lp.k = 0.0902;
  lp.l_bar = 340.0;
  lp.lambda3 = 0.0;
  lp.lambda3 = 0.5 * lambda3_bound(endemic_example_params(), lp).bound;
  return lp;
}

EndemicLyapunov witness() { return EndemicLyapunov(endemic_example_params(), witness_params()); }

constexpr double kX1 = 235.0;

double x2_hat() { return endemic_eq(endemic_example_params()).point.i; }

// Positive root of λ₁s² + (λ₁x̂₁ + λ̂₂x̂₂ − v)s − v·x̂₁ = 0, i.e. ω(s) = v.
double omega_inv_oracle(double v, double l1, double lh, double x1, double x2) {
  const double b = l1 * x1 + lh * x2 - v;
  return (-b + std::sqrt(b * b + 4.0 * l1 * v * x1)) / (2.0 * l1);
}

TEST(LyapEn, ConstructorChecksRegimeAndStructure) {
  EXPECT_THROW(EndemicLyapunov(disease_free_example_params(), witness_params()), RegimeError);
  EnLyapParams lp = witness_params();
  lp.k = 1.0;
  EXPECT_THROW(EndemicLyapunov(endemic_example_params(), lp), InfeasibleOverride);
  lp = witness_params();
  lp.lambda2 = 2.0;
  EXPECT_THROW(EndemicLyapunov(endemic_example_params(), lp), InfeasibleOverride);
  lp = witness_params();
  lp.lambda_hat2 = 0.0;
  EXPECT_NO_THROW(EndemicLyapunov(endemic_example_params(), lp));
}

TEST(LyapEn, HelperInverses) {
  const EndemicLyapunov v = witness();
  const double x2 = x2_hat();
  for (double s : {0.0, 0.5, 10.0, 100.0, 1000.0, 1e5}) {
    EXPECT_NEAR(v.theta_inv(v.theta(s)), s, 1e-9 * (1.0 + s));
    EXPECT_NEAR(v.omega(v.omega_inv(s)), s, 1e-9 * (1.0 + s));
    EXPECT_NEAR(v.omega_inv(s), omega_inv_oracle(s, 1.0, 0.01, kX1, x2), 1e-9 * (1.0 + s));
  }
  const double l0 = v.params().lambda0();
  for (double frac : {0.0, 0.01, 0.3, 0.9, 0.999}) {
    const double s = frac * l0 * x2;
    EXPECT_NEAR(v.p_fun(v.p_inv(s)), s, 1e-9 * (1.0 + s));
    const double h = 1e-6 * (1.0 + s);
    if (s > h) {
      const double fd = (v.p_inv(s + h) - v.p_inv(s - h)) / (2.0 * h);
      EXPECT_NEAR(v.p_inv_derivative(s), fd, 1e-5 * std::abs(fd));
    }
  }
  EXPECT_LT(v.p_fun(1e9), l0 * x2);
}

TEST(LyapEn, OmegaInverseWithZeroLambdaHat) {
  EnLyapParams lp = witness_params();
  lp.lambda_hat2 = 0.0;
  const EndemicLyapunov v(endemic_example_params(), lp);
  for (double s : {0.0, 3.0, 340.0}) EXPECT_NEAR(v.omega_inv(s), s, 1e-9 * (1.0 + s));
}

TEST(LyapEn, K0Terms) {
  const ModelParams p = endemic_example_params();
  const auto t = k0_terms(p, 1.0, 1.0, 340.0);
  EXPECT_NEAR(t[0], 0.18033, 1e-5);
  // Second term: x̂₁/(x̂₁ + x̂₂ + L̄) with λ₁ = λ₂ = 1.
  EXPECT_NEAR(t[1], kX1 / (kX1 + x2_hat() + 340.0), 1e-12);
  EXPECT_NEAR(k0_terms(p, 1.0, 1.0, 1e-9)[1], kX1 / (kX1 + x2_hat()), 1e-9);
  EXPECT_NEAR(k0_terms(p, 1.0, 1.0, 1e-9)[1], 0.4504, 1e-4);
  EXPECT_NEAR(k0_bound(p, 1.0, 1.0, 340.0), t[0], 0.0);
  EXPECT_THROW(k0_bound(disease_free_example_params(), 1.0, 1.0, 340.0), RegimeError);
}

TEST(LyapEn, ReferenceWitnessIsFeasible) {
  const FeasibilityReport r = feasibility_report(endemic_example_params(), witness_params());
  EXPECT_TRUE(r.k_ok);
  EXPECT_TRUE(r.lambda3_ok);
  EXPECT_TRUE(r.corner.holds);
  EXPECT_GT(r.corner.worst_margin, 0.0);
  EXPECT_LT(0.0902, r.k0);
  EXPECT_TRUE(r.feasible());
  EXPECT_LT(r.input_range.lo, 0.0);
  EXPECT_GT(r.input_range.hi, 0.0);
}

TEST(LyapEn, CornerConditionAsLambdaHatShrinks) {
  EnLyapParams lp = witness_params();
  for (double lh : {0.01, 1e-3, 1e-4}) {
    lp.lambda_hat2 = lh;
    lp.lambda3 = 0.0;
    const CornerConditionResult c = check_corner_condition(endemic_example_params(), lp);
    EXPECT_TRUE(c.holds) << "lambda_hat2 = " << lh;
    EXPECT_GT(c.worst_margin, 0.0);
    EXPECT_NEAR(c.margin_at_zero, 0.0, 1e-12);
  }
}

TEST(LyapEn, Lambda3BoundUsesCorrectedThirdTerm) {
  const ModelParams p = endemic_example_params();
  const Lambda3Bound b = lambda3_bound(p, witness_params());
  EXPECT_DOUBLE_EQ(b.corrected_third, 0.0902 * b.raw_terms[2]);
  EXPECT_DOUBLE_EQ(b.raw_terms[3], 0.01);
  EXPECT_NEAR(b.raw_terms[1], 1e-4 / (1.0 - 0.0902), 1e-15);
  EXPECT_EQ(b.bound, std::min({b.raw_terms[0], b.raw_terms[1], b.corrected_third,
                               b.raw_terms[3]}));
}

TEST(LyapEn, RegionExamples) {
  const EndemicLyapunov v = witness();
  const double k = 0.0902;
  EXPECT_EQ(v.region({10.0, 10.0, 1.0}).region, EnRegion::A);
  const double x2 = 100.0;
  EXPECT_EQ(v.region({0.5 * (v.nu(x2) - k * x2), x2, 1.0}).region, EnRegion::B);
  EXPECT_EQ(v.region({v.nu(x2) - 1.0, x2, 1.0}).region, EnRegion::C);
  EXPECT_EQ(v.region({-10.0, -10.0, -1.0}).region, EnRegion::D);
  const double xn = -100.0;
  EXPECT_EQ(v.region({0.5 * (-k * xn + v.theta_inv(-xn)), xn, -1.0}).region, EnRegion::E);
  EXPECT_EQ(v.region({v.theta_inv(-xn) + 1.0, xn, -1.0}).region, EnRegion::F);
  EXPECT_THROW(v.region({0.0, -x2_hat() - 1.0, 0.0}), OutOfH);
}

TEST(LyapEn, ContinuousAcrossAllBoundaries) {
  const EndemicLyapunov v = witness();
  const double k = 0.0902;
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> pos(0.0, 250.0), neg(-250.0, -1e-3), x1(-200.0, 300.0);
  auto same = [&](const Deviation& d, EnRegion a, EnRegion b) {
    const double va = v.value12_in_region(d, a);
    const double vb = v.value12_in_region(d, b);
    EXPECT_NEAR(va, vb, 1e-9 * (1.0 + std::abs(va)));
  };
  for (int n = 0; n < 200; ++n) {
    const double s = pos(rng);
    same({-k * s, s, 0.0}, EnRegion::A, EnRegion::B);
    same({v.nu(s), s, 0.0}, EnRegion::B, EnRegion::C);
    const double t = neg(rng);
    same({-k * t, t, 0.0}, EnRegion::D, EnRegion::E);
    same({v.theta_inv(-t), t, 0.0}, EnRegion::E, EnRegion::F);
    const double a = x1(rng);
    if (a < 0.0) {
      same({a, 0.0, 0.0}, EnRegion::C, EnRegion::D);
    } else {
      same({a, 0.0, 0.0}, EnRegion::A, EnRegion::F);
    }
  }
}

TEST(LyapEn, GradientAndDecreaseOnSamples) {
  const EndemicLyapunov v = witness();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u1(-kX1 + 1.0, 340.0), u2(-x2_hat() + 1.0, 370.0),
      u3(-600.0, 600.0);
  int tested = 0;
  for (int n = 0; n < 20000 && tested < 1000; ++n) {
    const Deviation d{u1(rng), u2(rng), u3(rng)};
    if (!v.in_sublevel(d, 340.0)) continue;
    if (v.boundary_distance(d) < 1e-2 || std::abs(d.x3) < 1e-2) continue;
    const Triple g = v.gradient(d);
    const double h = 1e-6;
    const Triple fd{
        (v.value({d.x1 + h, d.x2, d.x3}) - v.value({d.x1 - h, d.x2, d.x3})) / (2 * h),
        (v.value({d.x1, d.x2 + h, d.x3}) - v.value({d.x1, d.x2 - h, d.x3})) / (2 * h),
        (v.value({d.x1, d.x2, d.x3 + h}) - v.value({d.x1, d.x2, d.x3 - h})) / (2 * h)};
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(g[i], fd[i], 1e-5 * (1.0 + std::abs(g[i])));
    EXPECT_GT(v.value(d), 0.0);
    EXPECT_LT(v.directional_derivative(d, 0.0), 0.0);
    EXPECT_LE(v.directional_derivative(d, 0.0),
              v.region_bound(d, 0.0) + 1e-10 * (1.0 + v.value(d)));
    ++tested;
  }
  EXPECT_GE(tested, 1000);
}

TEST(LyapEn, EtaProperties) {
  const EndemicLyapunov v = witness();
  EXPECT_EQ(v.eta(0.0), 0.0);
  double prev = 0.0;
  for (double l : {1.0, 10.0, 50.0, 100.0, 200.0, 340.0}) {
    const double e = v.eta(l);
    EXPECT_GT(e, prev);
    EXPECT_LE(e, v.p_fun(l) + 1e-12);
    EXPECT_NEAR(v.eta_inv(e), l, 1e-6 * l);
    prev = e;
  }
  EXPECT_TRUE(std::isinf(v.eta_inv(v.params().lambda0() * x2_hat() * 2.0)));
}

TEST(LyapEn, IssGain) {
  const EndemicLyapunov v = witness();
  const double mu = 0.015;
  EXPECT_EQ(v.chi(0.0), 0.0);
  EXPECT_NEAR(v.chi(0.3), 0.3 / (0.5 * mu), 1e-12);
  const double u = -0.2;
  EXPECT_NEAR(v.chi(u), v.eta_inv(std::abs(u) / (0.5 * mu)), 1e-9);
  const Interval r = v.input_range();
  EXPECT_NEAR(r.hi, 0.5 * mu * 340.0, 1e-12);
  EXPECT_NEAR(r.lo, -0.5 * mu * v.p_fun(340.0), 1e-12);
}

TEST(LyapEn, DecreasesAlongTrajectories) {
  const EndemicLyapunov v = witness();
  const ModelParams& p = v.model();
  for (const Deviation& d0 : {Deviation{50.0, 20.0, 100.0}, Deviation{-30.0, -30.0, -50.0},
                              Deviation{-100.0, 40.0, 10.0}}) {
    ASSERT_TRUE(v.in_sublevel(d0, 340.0)) << d0.x1 << "," << d0.x2 << "," << d0.x3 << " in_H " << v.in_H(d0);
    const Trajectory tr =
        integrate(p, state_from(v.equilibrium(), d0), ConstantInput{p.b_hat}, 3000.0, 0.01, 100);
    double prev = v.value(d0);
    for (std::size_t i = 1; i < tr.size(); ++i) {
      if (prev < 1e-6) break;
      const double cur = v.value(deviation_from(v.equilibrium(), tr.states[i]));
      EXPECT_LT(cur, prev) << "at t = " << tr.times[i];
      prev = cur;
    }
  }
}

TEST(LyapEn, SelectedParametersAreFeasible) {
  const ModelParams p = endemic_example_params();
  for (double l_bar : {20.0, 340.0, 1000.0}) {
    const EnLyapParams lp = select_en_params(p, EnTarget{l_bar, std::nullopt});
    EXPECT_TRUE(feasibility_report(p, lp).feasible()) << "l_bar = " << l_bar;
  }
  Box box{{-10.0, -10.0, -10.0}, {10.0, 10.0, 10.0}};
  const EnLyapParams lp = select_en_params(p, EnTarget{340.0, box});
  const EndemicLyapunov v(p, lp);
  EXPECT_TRUE(v.in_sublevel({10.0, 10.0, 10.0}, 340.0));
  EXPECT_TRUE(v.in_sublevel({-10.0, -10.0, -10.0}, 340.0));
}

}  // namespace
}  // namespace sirlyap
