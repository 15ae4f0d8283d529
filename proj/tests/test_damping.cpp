#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "shockline/damping.hpp"

namespace {

using shockline::DampingProfile;

// Composite Simpson on a fine uniform grid: independent of the adaptive integrator.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

TEST(Damping, CoefficientExamples) {
  EXPECT_EQ(DampingProfile::power_law(0.0, 2.0).coefficient(5.0), 0.0);
  EXPECT_EQ(DampingProfile::power_law(1.0, 2.0).coefficient(0.0), 1.0);
  EXPECT_DOUBLE_EQ(DampingProfile::power_law(1.0, 2.0).coefficient(1.0), 0.25);
}

TEST(Damping, AccumulatedFactorExamples) {
  const auto undamped = DampingProfile::power_law(0.0, 3.0);
  for (double t : {0.0, 0.3, 17.0, 1e6}) EXPECT_EQ(undamped.accumulated_factor(t), 1.0);

  const auto p = DampingProfile::power_law(1.0, 2.0);
  const double log_a = simpson([](double s) { return 1.0 / ((1.0 + s) * (1.0 + s)); }, 0.0, 1.0);
  EXPECT_NEAR(p.accumulated_factor(1.0), std::exp(log_a), 1e-12);
  EXPECT_NEAR(p.accumulated_factor(1.0), std::exp(0.5), 1e-12);
  EXPECT_NEAR(p.accumulated_factor(1e12), std::numbers::e, 1e-10);
}

TEST(Damping, WeightIntegralMatchesQuadrature) {
  EXPECT_EQ(DampingProfile::power_law(0.0, 2.0).weight_integral(7.0), 7.0);
  EXPECT_EQ(DampingProfile::power_law(1.0, 2.0).weight_integral(0.0), 0.0);

  const auto p = DampingProfile::power_law(1.0, 2.0);
  const double oracle = simpson([](double s) { return std::exp(1.0 / (1.0 + s) - 1.0); }, 0.0, 1.0);
  const double i1 = p.weight_integral(1.0);
  EXPECT_NEAR(i1, oracle, 1e-11);
  EXPECT_GE(i1, std::exp(-1.0));
  EXPECT_LE(i1, 1.0);

  for (double a : {-0.5, 2.0}) {
    for (double lambda : {1.6, 3.0}) {
      const auto q = DampingProfile::power_law(a, lambda);
      const double s = a / (lambda - 1.0);
      auto inv = [&](double x) { return std::exp(-s * (1.0 - std::pow(1.0 + x, 1.0 - lambda))); };
      EXPECT_NEAR(q.weight_integral(3.5), simpson(inv, 0.0, 3.5), 1e-10) << a << " " << lambda;
    }
  }
}

TEST(Damping, CBounds) {
  auto b = DampingProfile::power_law(0.0, 2.0).c_bounds();
  EXPECT_EQ(b.lower, 1.0);
  EXPECT_EQ(b.upper, 1.0);
  b = DampingProfile::power_law(1.0, 2.0).c_bounds();
  EXPECT_DOUBLE_EQ(b.lower, std::exp(-1.0));
  EXPECT_DOUBLE_EQ(b.upper, std::numbers::e);
  b = DampingProfile::power_law(-2.0, 3.0).c_bounds();
  EXPECT_DOUBLE_EQ(b.lower, std::exp(-1.0));
  EXPECT_DOUBLE_EQ(b.upper, std::numbers::e);
}

TEST(Damping, FactorMonotoneAndBounded) {
  for (double a : {-1.0, 0.0, 1.0}) {
    const auto p = DampingProfile::power_law(a, 2.0);
    const auto b = p.c_bounds();
    double prev = p.accumulated_factor(0.0);
    for (int k = 1; k <= 400; ++k) {
      const double t = std::expm1(0.05 * k);
      const double A = p.accumulated_factor(t);
      if (a > 0.0) {
        EXPECT_GT(A, prev);
      } else if (a < 0.0) {
        EXPECT_LT(A, prev);
      } else {
        EXPECT_EQ(A, 1.0);
      }
      EXPECT_GE(A, b.lower);
      EXPECT_LE(A, b.upper);
      prev = A;
    }
  }
}

TEST(Damping, CustomWeightReproducesPowerLaw) {
  const auto ref = DampingProfile::power_law(0.7, 2.5);
  const auto custom =
      DampingProfile::custom(0.7, [](double t) { return std::pow(1.0 + t, -2.5); }, "power2.5");
  for (double t : {0.1, 1.0, 10.0, 200.0}) {
    EXPECT_NEAR(custom.accumulated_factor(t), ref.accumulated_factor(t), 1e-9);
    EXPECT_NEAR(custom.weight_integral(t) / ref.weight_integral(t), 1.0, 1e-9);
  }
  EXPECT_THROW(custom.c_bounds(), shockline::UnsupportedProfile);
  EXPECT_FALSE(custom.within_theorem_hypothesis());
}

TEST(Damping, CustomExponentialWeight) {
  // a e^{-t}: ln A = a (1 - e^{-t}).
  const auto p = DampingProfile::custom(1.0, [](double t) { return std::exp(-t); }, "exp");
  EXPECT_NEAR(std::log(p.accumulated_factor(2.0)), 1.0 - std::exp(-2.0), 1e-10);
}

TEST(Damping, Validation) {
  EXPECT_THROW(DampingProfile::power_law(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(DampingProfile::power_law(NAN, 2.0), std::invalid_argument);
  EXPECT_THROW(DampingProfile::power_law(1.0, 2.0).weight_integral(-1.0), std::invalid_argument);
  EXPECT_TRUE(DampingProfile::power_law(1.0, 2.0).within_theorem_hypothesis());
  EXPECT_FALSE(DampingProfile::power_law(1.0, 1.4).within_theorem_hypothesis());
}

}  // namespace
