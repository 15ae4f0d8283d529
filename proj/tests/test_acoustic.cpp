#include <cmath>

#include <gtest/gtest.h>

#include "shockline/acoustic_geometry.hpp"
#include "shockline/seeds.hpp"

namespace {

using namespace shockline;

const PolytropicEos kAir{1.4};

TEST(Acoustic, QuiescentFieldGivesStraightRays) {
  const Grid g = Grid::span(0.2, 4.0, 400);
  std::vector<FluidField> history;
  for (double t : {0.0, 0.5, 1.0, 1.5}) history.push_back(FluidField::quiescent(g, t));
  const auto u = ray_labels(0.25, 17);
  const auto fan = trace_rays(history, u, kAir, DampingProfile::power_law(1.0, 2.0));
  ASSERT_EQ(fan.times.size(), 4u);
  for (std::size_t k = 0; k < fan.times.size(); ++k) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      EXPECT_NEAR(fan.X[k][i], 1.0 - u[i] + fan.times[k], 1e-14);
      EXPECT_NEAR(fan.mu_jac[k][i], 1.0, 1e-12);
      EXPECT_NEAR(fan.mu_ode[k][i], 1.0, 1e-14);
    }
  }
  const auto rep = detect_collapse(fan);
  EXPECT_FALSE(rep.collapsed());
  EXPECT_FALSE(rep.jacobian.t_extrapolated.has_value());
  EXPECT_NEAR(rep.discrepancy, 0.0, 1e-12);
}

TEST(Acoustic, InitialMuIsExactlyOne) {
  const RayTracer tracer(ray_labels(0.2, 9), kAir, DampingProfile::power_law(0.0, 2.0), 0.0);
  for (double m : tracer.jacobian_mu()) EXPECT_NEAR(m, 1.0, 1e-13);
  for (double m : tracer.transport_mu()) EXPECT_EQ(m, 1.0);
}

TEST(Acoustic, BurgersSurrogateMatchesCharacteristics) {
  const auto seed = burgers::sine(1.0);
  const auto p = DampingProfile::power_law(1.0, 2.0);
  const auto u = ray_labels(0.25, 65);
  RayTracer tracer(u, kAir, p, 0.0, false);
  const BurgersSurrogateSampler sampler(seed, p);
  const double t_end = 0.6;
  const int steps = 300;
  for (int k = 1; k <= steps; ++k) tracer.step(sampler, t_end * k / steps);
  const double I = p.weight_integral(t_end);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x0 = 1.0 - u[i];
    EXPECT_NEAR(tracer.positions()[i], burgers::ray_position(seed, x0, I), 1e-6);
    EXPECT_NEAR(tracer.jacobian_mu()[i], burgers::mu_closed_form(seed, p, t_end, x0), 1e-5);
  }
}

TEST(Acoustic, BurgersSurrogateCollapseNearUnitTime) {
  const burgers::BurgersSeed line([](double x) { return -x; }, [](double) { return -1.0; }, {-2.0, 2.0});
  const auto p = DampingProfile::power_law(0.0, 2.0);
  RayTracer tracer(ray_labels(0.25, 33), kAir, p, 0.0, false);
  const BurgersSurrogateSampler sampler(line, p);
  tracer.record();
  for (int k = 1; k <= 199; ++k) {
    tracer.step(sampler, 0.005 * k);
    tracer.flag_collapse(0.01);
    tracer.record();
  }
  const auto rep = detect_collapse(tracer.fan());
  ASSERT_TRUE(rep.jacobian.t_threshold.has_value());
  EXPECT_NEAR(*rep.jacobian.t_threshold, 0.99, 1e-9);
  EXPECT_NEAR(rep.min_mu_jac, 1.0 - 0.995, 1e-9);
}

TEST(Acoustic, FrozenCoefficientTransport) {
  for (double e0 : {-0.7, 0.3}) {
    const double mu = integrate_transport([&](double) { return TransportCoefficients{0.0, e0}; }, 0.0, 2.0, 400);
    EXPECT_NEAR(mu, std::exp(2.0 * e0), 1e-8);
  }
  EXPECT_THROW(integrate_transport([](double) { return TransportCoefficients{}; }, 0.0, 1.0, 0),
               std::invalid_argument);
}

TEST(Acoustic, TransportCoefficientsVanishAtRest) {
  const auto c = transport_coefficients(LocalState{0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, kAir, 1.0);
  EXPECT_EQ(c.m_over_mu, 0.0);
  EXPECT_EQ(c.e, 0.0);
}

TEST(Acoustic, TransportCoefficientsByHand) {
  const LocalState s{0.1, 1.2, 0.05, -0.3, 0.4, 0.2, -0.1};
  const auto c = transport_coefficients(s, kAir, 0.5);
  const double speed = 1.3;
  const double Lh = -0.1 + speed * 0.4;
  const double Lv = 0.2 + speed * -0.3;
  EXPECT_NEAR(c.m_over_mu, 0.5 * 2.4 * 0.4 / 1.2 + 0.5 * 0.1 / 1.2, 1e-15);
  EXPECT_NEAR(c.e, 0.4 / (2 * 1.44) * Lh + Lv / 1.2, 1e-15);
}

TEST(Acoustic, JacobianOnNonuniformLabels) {
  // Quadratic X(u) = 1 - u - u^2: three-point differences are exact.
  const std::vector<double> u{0.0, 0.1, 0.25, 0.3, 0.6};
  std::vector<double> x;
  for (double v : u) x.push_back(1.0 - v - v * v);
  const auto mu = mu_jacobian(u, x);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(mu[i], 1.0 + 2.0 * u[i], 1e-12);
}

TEST(Acoustic, InsufficientFan) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(mu_jacobian({0.0, 0.1, 0.2}, {1.0, nan, 0.8}), InsufficientFan);
  EXPECT_THROW(RayTracer({0.0, 0.1}, kAir, DampingProfile::power_law(0.0, 2.0), 0.0), InsufficientFan);
  EXPECT_THROW(ray_labels(0.2, 2), std::invalid_argument);
}

TEST(Acoustic, EscapedRaysAreMarked) {
  // Rays sit at 1.25 - u after t = 0.25; the grid ends at 1.2.
  const Grid g = Grid::span(0.5, 1.2, 64);
  std::vector<FluidField> history{FluidField::quiescent(g, 0.0), FluidField::quiescent(g, 0.25)};
  const auto fan = trace_rays(history, ray_labels(0.3, 7), kAir, DampingProfile::power_law(0.0, 2.0));
  EXPECT_EQ(fan.status.front(), RayStatus::escaped);
  EXPECT_TRUE(std::isnan(fan.X.back().front()));
  EXPECT_EQ(fan.status.back(), RayStatus::alive);
  EXPECT_NEAR(fan.X.back().back(), 0.95, 1e-14);

  std::vector<FluidField> gone{FluidField::quiescent(g, 0.0), FluidField::quiescent(g, 1.0)};
  EXPECT_THROW(trace_rays(gone, ray_labels(0.3, 5), kAir, DampingProfile::power_law(0.0, 2.0)), InsufficientFan);
}

TEST(Acoustic, MonitorTracksQuiescentRun) {
  const Grid g = Grid::span(0.2, 3.0, 128);
  const auto p = DampingProfile::power_law(0.0, 2.0);
  AcousticMonitor monitor(ray_labels(0.2, 9), kAir, p, 0.01, 3);
  run_until(FluidField::quiescent(g), kAir, p, 1.0, {}, {std::ref(monitor)});
  monitor.finish();
  EXPECT_FALSE(monitor.collapsed());
  const auto& fan = monitor.fan();
  EXPECT_EQ(fan.times.front(), 0.0);
  EXPECT_EQ(fan.times.back(), 1.0);
  for (std::size_t i = 0; i < fan.u_grid.size(); ++i) {
    EXPECT_NEAR(fan.X.back()[i], 2.0 - fan.u_grid[i], 1e-12);
  }
  const auto csv = mu_history_csv(fan);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,u,mu_jac,mu_ode");
}

TEST(Acoustic, ShockCaseMethodsAgree) {
  const double delta = 0.25;
  const ShortPulseSpec spec(delta, make_pulse_seed("sine", -1.0));
  const auto p = DampingProfile::power_law(0.0, 2.0);
  const auto f0 = build_short_pulse(spec, kAir, p, Grid::span(0.2, 4.0, 1024));
  AcousticMonitor monitor(ray_labels(delta, 33), kAir, p, 0.5, 4);
  run_until(f0, kAir, p, 3.0, {}, {std::ref(monitor)});
  monitor.finish();
  const auto rep = detect_collapse(monitor.fan());
  EXPECT_LT(rep.min_mu_jac, 1.0);
  EXPECT_LT(rep.discrepancy, 0.05);
}

}  // namespace
