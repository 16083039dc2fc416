#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sirlyap/errors.hpp"
#include "sirlyap/json_io.hpp"

namespace sirlyap {
namespace {

using nlohmann::json;

TEST(JsonIo, ModelRoundTrip) {
  const ModelParams p = endemic_example_params();
  const json j = p;
  EXPECT_EQ(j.get<ModelParams>(), p);
  EXPECT_THROW((json{{"beta", 1}, {"gamma", 1}, {"mu", 1}, {"b_hat", 1}, {"x", 1}}.get<ModelParams>()),
               ConfigError);
  EXPECT_THROW((json{{"beta", 1}, {"gamma", 1}}.get<ModelParams>()), ConfigError);
}

TEST(JsonIo, SignalsRoundTrip) {
  const InputSignal sigs[] = {ConstantInput{3.0}, StepInput{1.0, 2.0, 4.0},
                              PiecewiseInput{{{0.0, 1.0}, {5.0, 2.0}}},
                              SinusoidInput{17.0, 1.0, 0.1}};
  for (const InputSignal& s : sigs) {
    const json j = s;
    EXPECT_EQ(j.get<InputSignal>(), s) << j.dump();
  }
  EXPECT_THROW((json{{"type", "ramp"}}.get<InputSignal>()), ConfigError);
}

TEST(JsonIo, LyapParamsRoundTrip) {
  EnLyapParams lp;
  lp.lambda_hat2 = 0.01;
  lp.k = 0.0902;
  lp.lambda3 = 1e-5;
  lp.l_bar = 340.0;
  const json j = lp;
  EXPECT_EQ(j.get<EnLyapParams>(), lp);
  const DfLyapParams dp{0.0148, 0.0745, 0.03, 0.1, 0.5};
  const json jd = dp;
  const DfLyapParams back = jd.get<DfLyapParams>();
  EXPECT_EQ(back.mu0, dp.mu0);
  EXPECT_EQ(back.lambda3, dp.lambda3);
}

TEST(JsonIo, NonFiniteMarginBecomesNull) {
  const CheckResult r{"x", false, -std::numeric_limits<double>::infinity(), 0.0, {}, 0, ""};
  const json j = r;
  EXPECT_TRUE(j.at("worst_margin").is_null());
  EXPECT_FALSE(j.at("passed").get<bool>());
}

}  // namespace
}  // namespace sirlyap
