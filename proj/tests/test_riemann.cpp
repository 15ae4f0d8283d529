#include <cmath>

#include <gtest/gtest.h>

#include "shockline/riemann_exact.hpp"

namespace {

using namespace shockline;

const PolytropicEos kAir{1.4};

TEST(Riemann, UniformStateIsTrivial) {
  const IsentropicRiemann r({0.7, 0.2}, {0.7, 0.2}, kAir);
  EXPECT_NEAR(r.star_density(), 0.7, 1e-13);
  EXPECT_NEAR(r.star_velocity(), 0.2, 1e-13);
}

TEST(Riemann, SymmetricCollisionHasZeroStarVelocity) {
  const IsentropicRiemann r({1.0, 0.5}, {1.0, -0.5}, kAir);
  EXPECT_NEAR(r.star_velocity(), 0.0, 1e-13);
  EXPECT_GT(r.star_density(), 1.0);
}

TEST(Riemann, ShockSatisfiesRankineHugoniot) {
  // Right-going shock of the collision: mass and momentum jump conditions.
  const RiemannState R{1.0, -0.5};
  const IsentropicRiemann r({1.0, 0.5}, R, kAir);
  const double rs = r.star_density(), us = r.star_velocity();
  const double s = (rs * us - R.rho * R.u) / (rs - R.rho);
  const double mom_jump = rs * us * us + kAir.pressure(rs) - R.rho * R.u * R.u - kAir.pressure(R.rho);
  EXPECT_NEAR(s * (rs * us - R.rho * R.u), mom_jump, 1e-12);
  const auto just_behind = r.sample(s - 1e-9);
  const auto just_ahead = r.sample(s + 1e-9);
  EXPECT_NEAR(just_behind.rho, rs, 1e-12);
  EXPECT_NEAR(just_ahead.rho, R.rho, 1e-12);
}

TEST(Riemann, RarefactionKeepsRiemannInvariant) {
  // Left rarefaction: u + 2c/(gamma-1) constant through the fan.
  const RiemannState L{1.0, 0.0};
  const IsentropicRiemann r(L, {0.125, 0.0}, kAir);
  const double k = 2.0 / (kAir.gamma - 1.0);
  const double inv = L.u + k * kAir.sound_speed(L.rho);
  for (double xi = -1.1; xi < r.star_velocity() - kAir.sound_speed(r.star_density()); xi += 0.05) {
    const auto s = r.sample(xi);
    EXPECT_NEAR(s.u + k * kAir.sound_speed(s.rho), inv, 1e-12) << xi;
  }
  EXPECT_EQ(r.sample(-5.0).rho, 1.0);
  EXPECT_EQ(r.sample(5.0).rho, 0.125);
}

TEST(Riemann, VacuumThrows) {
  EXPECT_THROW(IsentropicRiemann({1.0, -20.0}, {1.0, 20.0}, kAir), std::domain_error);
  EXPECT_THROW(IsentropicRiemann({0.0, 0.0}, {1.0, 0.0}, kAir), std::invalid_argument);
}

}  // namespace
