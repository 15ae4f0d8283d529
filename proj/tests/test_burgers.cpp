#include <cmath>
#include <numbers>
#include <variant>

#include <gtest/gtest.h>

#include "shockline/burgers.hpp"
#include "shockline/seeds.hpp"

namespace {

using namespace shockline;
using burgers::BurgersSeed;

BurgersSeed line(double slope) {
  return BurgersSeed([=](double u) { return slope * u; }, [=](double) { return slope; }, {-2.0, 2.0},
                     "line");
}

TEST(Burgers, ValueAlongRay) {
  const auto f = line(-1.0);
  EXPECT_DOUBLE_EQ(burgers::value_along_ray(f, DampingProfile::power_law(0.0, 2.0), 2.0, 0.5), -0.5);
  const auto s = burgers::sine(1.0);
  EXPECT_DOUBLE_EQ(
      burgers::value_along_ray(s, DampingProfile::power_law(1.0, 2.0), 0.0, std::numbers::pi / 2), -1.0);
  EXPECT_NEAR(burgers::value_along_ray(f, DampingProfile::power_law(1.0, 2.0), 1.0, 1.0),
              -std::exp(-0.5), 1e-12);
}

TEST(Burgers, MuClosedForm) {
  const auto f = line(-1.0);
  EXPECT_EQ(burgers::mu_closed_form(f, DampingProfile::power_law(1.0, 2.0), 0.0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(burgers::mu_closed_form(f, DampingProfile::power_law(0.0, 2.0), 1.0, 0.3), 0.0);
  const auto p = DampingProfile::power_law(1.0, 2.0);
  const double mu = burgers::mu_closed_form(f, p, 1.0, 0.3);
  EXPECT_NEAR(mu, 1.0 - p.weight_integral(1.0), 1e-15);
  EXPECT_GT(mu, 0.0);
  EXPECT_LT(mu, 1.0);
}

TEST(Burgers, TraceFanPositions) {
  const auto f = line(-1.0);
  auto fan = burgers::trace_fan(f, DampingProfile::power_law(0.0, 2.0), {0.0, 0.5}, {-1.0, 0.5, 1.0});
  EXPECT_DOUBLE_EQ(fan.positions[1][1], 0.25);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(fan.positions[0][i], fan.u_grid[i]);
  const auto p = DampingProfile::power_law(1.0, 2.0);
  fan = burgers::trace_fan(f, p, {1.0}, {0.0, 1.0});
  EXPECT_NEAR(fan.positions[0][1], 1.0 - p.weight_integral(1.0), 1e-15);
  EXPECT_THROW(burgers::trace_fan(f, p, {1.0}, {1.0, 0.0}), std::invalid_argument);
}

TEST(Burgers, ShockTimeExamples) {
  const auto ramp = burgers::linear_ramp(1.0);
  const auto s0 = burgers::shock_time(ramp, DampingProfile::power_law(0.0, 2.0));
  ASSERT_TRUE(std::holds_alternative<Shock>(s0));
  EXPECT_NEAR(std::get<Shock>(s0).t_star, 1.0, 1e-9);

  const auto expansive = line(0.3);
  EXPECT_TRUE(std::holds_alternative<Global>(
      burgers::shock_time(expansive, DampingProfile::power_law(1.0, 2.0))));

  const auto p = DampingProfile::power_law(1.0, 2.0);
  const auto s1 = burgers::shock_time(ramp, p);
  ASSERT_TRUE(std::holds_alternative<Shock>(s1));
  const double t = std::get<Shock>(s1).t_star;
  EXPECT_GE(t, 1.0);
  EXPECT_LE(t, std::numbers::e);
  EXPECT_NEAR(p.weight_integral(t), 1.0, 1e-9);
}

TEST(Burgers, BoundedFactorAlwaysShocks) {
  // A is bounded for lambda > 1, so I grows without bound and every compression shocks.
  const auto ramp = burgers::linear_ramp(0.1);
  const auto p = DampingProfile::power_law(5.0, 1.5);
  const auto cls = burgers::shock_time(ramp, p);
  ASSERT_TRUE(std::holds_alternative<Shock>(cls));
  const auto b = p.c_bounds();
  EXPECT_GE(std::get<Shock>(cls).t_star, b.lower / 0.1);
  EXPECT_LE(std::get<Shock>(cls).t_star, b.upper / 0.1);
}

TEST(Burgers, SpatialGradient) {
  const auto f = line(-1.0);
  const auto p0 = DampingProfile::power_law(0.0, 2.0);
  EXPECT_DOUBLE_EQ(burgers::spatial_gradient(f, p0, 0.0, 0.2).value, -1.0);
  EXPECT_DOUBLE_EQ(burgers::spatial_gradient(f, p0, 0.5, 0.2).value, -2.0);
  const auto g = burgers::spatial_gradient(f, p0, 1.0, 0.2);
  EXPECT_TRUE(g.blow_up);
  EXPECT_TRUE(std::isinf(g.value) && g.value < 0.0);

  // Finite-difference oracle from the Eulerian solution.
  const auto s = burgers::sine(1.0);
  const auto p = DampingProfile::power_law(1.0, 2.0);
  const double t = 0.6;
  const double u = 0.3;
  const double x = burgers::ray_position(s, u, p.weight_integral(t));
  const double h = 1e-5;
  const double fd = (burgers::solution_at(s, p, t, x + h) - burgers::solution_at(s, p, t, x - h)) / (2 * h);
  EXPECT_NEAR(burgers::spatial_gradient(s, p, t, u).value, fd, 1e-6);
}

TEST(Burgers, ConservationAlongRays) {
  const auto s = burgers::sine(1.0);
  const auto p = DampingProfile::power_law(1.0, 2.0);
  for (double t : {0.2, 0.8, 1.1}) {
    for (double u : {-0.4, 0.0, 0.3, 2.0}) {
      const double mu = burgers::mu_closed_form(s, p, t, u);
      const double g = burgers::spatial_gradient(s, p, t, u).value;
      EXPECT_NEAR(mu * g, s.derivative(u) / p.accumulated_factor(t), 1e-8);
    }
  }
}

TEST(Burgers, CrossingMatchesShockTime) {
  const auto s = burgers::sine(1.0);
  for (double a : {-0.5, 0.0, 1.0}) {
    const auto p = DampingProfile::power_law(a, 2.0);
    const double t_star = std::get<Shock>(burgers::shock_time(s, p)).t_star;
    std::vector<double> u(2049);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = -1.0 + 2.0 * i / (u.size() - 1);
    const auto t = burgers::first_crossing_time(s, p, u, 10.0);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t / t_star, 1.0, 1e-6) << "a=" << a;
  }
}

TEST(Burgers, EikonalRoundTrip) {
  const auto s = burgers::sine(1.0);
  const auto p = DampingProfile::power_law(0.5, 3.0);
  const double t = 0.7;
  for (double u = -3.0; u <= 3.0; u += 0.25) {
    const double x = burgers::ray_position(s, u, p.weight_integral(t));
    EXPECT_NEAR(burgers::recover_label(s, p, t, x), u, 1e-9);
  }
}

TEST(Burgers, MinimizersReported) {
  const auto ramp = burgers::linear_ramp(2.0);
  EXPECT_DOUBLE_EQ(ramp.compression(), 2.0);
  EXPECT_GT(ramp.minimizers().size(), 1u);
  for (double u : ramp.minimizers()) EXPECT_LE(std::abs(u), 0.5 + 1e-12);
}

TEST(Burgers, SeedValidation) {
  EXPECT_THROW(BurgersSeed([](double u) { return u + 1.0; }, nullptr, {-1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(BurgersSeed([](double u) { return u; }, nullptr, {0.5, 1.0}), std::invalid_argument);
  const BurgersSeed numeric([](double u) { return -std::sin(u); }, nullptr, {-3.0, 3.0});
  EXPECT_NEAR(numeric.derivative(0.4), -std::cos(0.4), 1e-10);
  EXPECT_NEAR(numeric.compression(), 1.0, 1e-10);
}

}  // namespace
