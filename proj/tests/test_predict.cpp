#include <cmath>
#include <numbers>
#include <variant>

#include <gtest/gtest.h>

#include "shockline/predict.hpp"

namespace {

using namespace shockline;

const double e = std::numbers::e;

TEST(Predict, IntervalExamples) {
  // delta^{-1/2} = 2, so the exponent is C / |m|.
  auto iv = t_star_interval(0.25, -1.0, DampingProfile::power_law(0.0, 2.0));
  EXPECT_NEAR(iv.lower, e - 1.0, 1e-13);
  EXPECT_EQ(iv.lower, iv.upper);
  iv = t_star_interval(0.25, -1.0, DampingProfile::power_law(1.0, 2.0));
  EXPECT_NEAR(iv.lower, std::exp(1.0 / e) - 1.0, 1e-13);
  EXPECT_NEAR(iv.upper, std::exp(e) - 1.0, 1e-12);
  iv = t_star_interval(0.25, -2.0, DampingProfile::power_law(0.0, 2.0));
  EXPECT_NEAR(iv.lower, std::sqrt(e) - 1.0, 1e-13);
  EXPECT_THROW(t_star_interval(0.25, -0.5, DampingProfile::power_law(0.0, 2.0)), HypothesisViolation);
  EXPECT_THROW(t_star_interval(1.5, -1.0, DampingProfile::power_law(0.0, 2.0)), std::invalid_argument);
}

TEST(Predict, ClassificationIsTotal) {
  const auto p = DampingProfile::power_law(1.0, 2.0);
  EXPECT_TRUE(std::holds_alternative<ShockInterval>(classify_case(-1.5, 0.25, p)));
  EXPECT_TRUE(std::holds_alternative<Global>(classify_case(0.7, 0.25, p)));
  EXPECT_TRUE(std::holds_alternative<Inconclusive>(classify_case(-0.5, 0.25, p)));
  EXPECT_TRUE(std::holds_alternative<Inconclusive>(classify_case(0.0, 0.25, p)));
  EXPECT_TRUE(std::holds_alternative<ShockInterval>(classify_case(-1.0, 0.25, p)));
  const ShortPulseSpec spec(0.25, make_pulse_seed("sine", -1.5));
  EXPECT_TRUE(std::holds_alternative<ShockInterval>(classify_case(spec, p)));
}

TEST(Predict, Chaplygin) {
  EXPECT_FALSE(chaplygin_flag(EosDescriptor::polytropic(1.4)));
  EXPECT_DOUBLE_EQ(EosDescriptor::polytropic(1.4).dH_dh, -2.4);
  EXPECT_TRUE(chaplygin_flag(EosDescriptor::chaplygin()));
  EXPECT_TRUE(chaplygin_flag(EosDescriptor::polytropic(-1.0)));
  EXPECT_TRUE(std::holds_alternative<Global>(
      classify_case(-3.0, 0.25, DampingProfile::power_law(0.0, 2.0), EosDescriptor::chaplygin())));
}

TEST(Predict, Asymptote) {
  EXPECT_EQ(mu_asymptote(0.0, 0.25, -1.0, 1.0), 1.0);
  EXPECT_NEAR(mu_asymptote(e * e - 1.0, 0.25, -1.0, 1.0), -1.0, 1e-14);
  EXPECT_NEAR(mu_asymptote(e - 1.0, 0.25, -1.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(*mu_asymptote_zero(0.25, -1.0, 1.0), e - 1.0, 1e-14);
  EXPECT_FALSE(mu_asymptote_zero(0.25, 0.5, 1.0).has_value());
  EXPECT_THROW(mu_asymptote(-1.0, 0.25, -1.0, 1.0), std::invalid_argument);
}

TEST(Predict, AsymptoteZeroMatchesUndampedInterval) {
  // Zero found by bisection, independent of the closed-form lifespan.
  for (double delta : {0.1, 0.25, 0.4}) {
    for (double m : {-1.0, -2.0}) {
      const auto iv = t_star_interval(delta, m, DampingProfile::power_law(0.0, 2.0));
      const auto z = bisect_root([&](double t) { return mu_asymptote(t, delta, m, 1.0); }, 0.0,
                                 2.0 * iv.upper + 1.0, 1e-16, 400);
      EXPECT_NEAR(z.root / iv.lower, 1.0, 1e-12);
    }
  }
}

TEST(Predict, IntervalWidensSymmetricallyInLogScale) {
  const double base = std::log1p(t_star_interval(0.25, -1.0, DampingProfile::power_law(0.0, 2.0)).lower);
  const auto iv = t_star_interval(0.25, -1.0, DampingProfile::power_law(1.0, 3.0));
  const double lo = std::log1p(iv.lower), hi = std::log1p(iv.upper);
  EXPECT_NEAR(std::log(hi / base), -std::log(lo / base), 1e-12);
}

TEST(Predict, ShiftTableSingleCell) {
  const auto tab = shift_analysis({0.5}, {2.0}, 0.25, -1.0);
  EXPECT_TRUE(tab.monotone());
  EXPECT_EQ(tab.cells.size(), 1u);
}

TEST(Predict, ShiftTableAlongA) {
  const auto tab = shift_analysis({1.0, -0.5, 0.5, 0.0}, {2.0}, 0.25, -1.0);
  EXPECT_TRUE(tab.monotone());
  for (std::size_t k = 1; k < tab.a_values.size(); ++k) {
    EXPECT_LT(tab.a_values[k - 1], tab.a_values[k]);
    EXPECT_LT(tab.at(k - 1, 0).midpoint(), tab.at(k, 0).midpoint());
  }
}

TEST(Predict, ShiftTableAlongLambda) {
  const auto tab = shift_analysis({1.0}, {1.6, 2.0, 3.0, 5.0}, 0.25, -1.0);
  EXPECT_TRUE(tab.monotone());
  const double undamped = e - 1.0;
  for (std::size_t k = 1; k < tab.lambda_values.size(); ++k) {
    EXPECT_LT(std::abs(tab.at(0, k).midpoint() - undamped), std::abs(tab.at(0, k - 1).midpoint() - undamped));
  }
}

TEST(Predict, ShiftTableReportsNumericalViolations) {
  const std::vector<std::optional<double>> numerical{3.0, 2.0};
  const auto tab = shift_analysis({0.0, 1.0}, {2.0}, 0.25, -1.0, numerical);
  EXPECT_FALSE(tab.monotone());
  ASSERT_EQ(tab.violations.size(), 1u);
  EXPECT_NE(tab.violations[0].find("numerical"), std::string::npos);
  const auto csv = shift_table_csv(tab);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "a,lambda,t_lower,t_upper,t_numerical,monotone_ok");
  EXPECT_NE(csv.find("false"), std::string::npos);
}

TEST(Predict, ShiftTableValidation) {
  EXPECT_THROW(shift_analysis({}, {2.0}, 0.25, -1.0), std::invalid_argument);
  EXPECT_THROW(shift_analysis({0.0}, {1.0}, 0.25, -1.0), std::invalid_argument);
  EXPECT_THROW(shift_analysis({0.0, 1.0}, {2.0}, 0.25, -1.0, {1.0}), std::invalid_argument);
}

}  // namespace
