#include <cmath>

#include <gtest/gtest.h>

#include "sirlyap/errors.hpp"
#include "sirlyap/verify.hpp"

namespace sirlyap {
namespace {

DiseaseFreeLyapunov reference_df() {
  DfOverrides o;
  o.mu0 = 0.0148;
  o.eps = 0.0745;
  const ModelParams p = disease_free_example_params();
  return DiseaseFreeLyapunov(p, select_df_params(p, o));
}

EnLyapParams witness_params() {
  EnLyapParams lp;
  lp.lambda_hat2 = 0.01;
  lp.k = 0.0902;
  lp.l_bar = 340.0;
  lp.lambda3 = 0.0;
  lp.lambda3 = 0.5 * lambda3_bound(endemic_example_params(), lp).bound;
  return lp;
}

TEST(Verify, DiniMonitorFlagsGrowth) {
  const LyapunovFunction lyap{reference_df()};
  DiniMonitor mon(lyap, DecaySpec{1e-4});
  const State xf = lyap_equilibrium(lyap).point;
  for (int i = 0; i < 10; ++i) {
    mon.feed(static_cast<double>(i), State{xf.s + 10.0 * i, 5.0 + i, 0.0});
  }
  const CheckResult r = mon.result("growth");
  EXPECT_FALSE(r.passed);
  EXPECT_LT(r.worst_margin, 0.0);
}

TEST(Verify, DiniMonitorAcceptsDecay) {
  const DiseaseFreeLyapunov v = reference_df();
  const ModelParams& p = v.model();
  const Trajectory tr = integrate(p, State{100.0, 50.0, 0.0}, ConstantInput{p.b_hat}, 500.0);
  const CheckResult r =
      check_dini_along_trajectory(LyapunovFunction{v}, tr, v.equilibrium(), DecaySpec{0.0});
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_THROW(check_dini_along_trajectory(LyapunovFunction{v}, tr,
                                           endemic_eq(endemic_example_params()), DecaySpec{0.0}),
               MismatchedEquilibrium);
}

TEST(Verify, PassRuleUsesTolerance) {
  VerificationReport rep;
  rep.checks.push_back(CheckResult{"a", true, 0.5, 0.0, {}, 1, ""});
  EXPECT_TRUE(rep.all_passed());
  rep.checks.push_back(CheckResult{"b", false, -1.0, 0.0, {}, 1, ""});
  EXPECT_FALSE(rep.all_passed());
  const std::string table = format_table(rep);
  EXPECT_NE(table.find("a"), std::string::npos);
  EXPECT_NE(table.find("NO"), std::string::npos);
}

TEST(Verify, EndemicIssRejectsInputsOutsideRange) {
  const EndemicLyapunov v(endemic_example_params(), witness_params());
  const ModelParams& p = v.model();
  const Interval r = v.input_range();
  IssOptions opts{state_from(v.equilibrium(), Deviation{10.0, 10.0, 10.0}), 100.0, 0.1, 0.2};
  EXPECT_THROW(check_iss_bound(LyapunovFunction{v},
                               StepInput{0.0, p.b_hat, p.b_hat + 2.0 * r.hi}, opts),
               RangeError);
}

TEST(Verify, NestingHoldsForTwoPairsPerAxis) {
  const ModelParams p = endemic_example_params();
  NestingSpec spec;
  spec.base = witness_params();
  spec.level = 340.0;
  spec.samples = 4000;
  spec.axis = NestingAxis::LambdaHat2;
  for (auto [a, b] : {std::pair{0.005, 0.01}, std::pair{0.001, 0.008}}) {
    spec.a = a;
    spec.b = b;
    const CheckResult r = check_sublevel_nesting(p, spec);
    EXPECT_TRUE(r.passed) << r.detail;
  }
  spec.axis = NestingAxis::K;
  for (auto [a, b] : {std::pair{0.045, 0.0902}, std::pair{0.02, 0.15}}) {
    spec.a = a;
    spec.b = b;
    const CheckResult r = check_sublevel_nesting(p, spec);
    EXPECT_TRUE(r.passed) << r.detail;
  }
  spec.a = 0.2;
  spec.b = 0.1;
  EXPECT_THROW(check_sublevel_nesting(p, spec), DomainError);
}

TEST(Verify, BifurcationGridCrossesThreshold) {
  const ModelParams p = disease_free_example_params();
  const std::vector<double> grid = bifurcation_grid(p);
  ASSERT_EQ(grid.size(), 21u);
  const double c_star = p.mu * (p.gamma + p.mu) / p.beta;
  EXPECT_LT(grid.front(), c_star);
  EXPECT_GT(grid.back(), c_star);
  const CheckResult r = check_bifurcation_continuity(p, grid);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Verify, ObstructionDemos) {
  const ModelParams p = endemic_example_params();
  EXPECT_TRUE(separability_obstruction_demo(p).passed);
  const CheckResult r =
      prohibited_region_demo(p, State{100.0, 0.01, 0.0}, {20.0, 340.0, 1e4}, 3000.0, 0.05);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_THROW(prohibited_region_demo(p, State{300.0, 1.0, 0.0}, {340.0}, 10.0), DomainError);
}

TEST(Verify, SublevelSamplesAreMembers) {
  const EndemicLyapunov v(endemic_example_params(), witness_params());
  const auto samples = sample_sublevel(v, 500, 3);
  ASSERT_EQ(samples.size(), 500u);
  for (const Deviation& d : samples) EXPECT_TRUE(v.in_sublevel(d, 340.0));
}

TEST(Verify, Disease_freeGridChecks) {
  const DiseaseFreeLyapunov v = reference_df();
  const std::vector<double> inputs = df_certification_inputs(v.model());
  EXPECT_EQ(inputs.size(), 5u);
  EXPECT_TRUE(check_df_grid_iss(v, 20, inputs).passed);
  EXPECT_TRUE(check_df_region_bounds(v, 20, inputs).passed);
  EXPECT_TRUE(check_df_continuity(v, 200, 5).passed);
}

}  // namespace
}  // namespace sirlyap
