#include <cmath>

#include <gtest/gtest.h>

#include "shockline/seeds.hpp"

namespace {

using namespace shockline;

TEST(Seeds, Phi0IsAntiderivative) {
  for (const auto& name : pulse_seed_names()) {
    const double slope = name == "front-ramp" ? 1.0 : -1.0;
    const ShortPulseSpec spec(0.25, make_pulse_seed(name, slope));
    EXPECT_NEAR(spec.phi0(0.0), 0.0, 1e-14);
    for (double s = 0.05; s < 1.0; s += 0.1) {
      const double h = 1e-4;
      const double d = (-spec.phi0(s + 2 * h) + 8 * spec.phi0(s + h) - 8 * spec.phi0(s - h) +
                        spec.phi0(s - 2 * h)) / (12 * h);
      EXPECT_NEAR(d, spec.phi1(s), 1e-10) << name << " s=" << s;
    }
  }
}

TEST(Seeds, DerivativeConsistent) {
  for (const auto& name : pulse_seed_names()) {
    const auto seed = make_pulse_seed(name, name == "front-ramp" ? 1.0 : -1.0);
    for (double s = 0.035; s < 1.0; s += 0.07) {
      const double h = 1e-6;
      EXPECT_NEAR((seed.phi1(s + h) - seed.phi1(s - h)) / (2 * h), seed.dphi1(s), 1e-6)
          << name << " s=" << s;
    }
  }
}

TEST(Seeds, MinSlopeMatchesRequest) {
  for (double m : {-1.0, -2.5}) {
    for (const char* name : {"sine", "bump"}) {
      const ShortPulseSpec spec(0.2, make_pulse_seed(name, m));
      EXPECT_NEAR(spec.min_slope(), m, 1e-9) << name;
    }
  }
  const ShortPulseSpec ramp(0.2, make_pulse_seed("front-ramp", 1.0));
  EXPECT_NEAR(ramp.min_slope(), 1.0, 1e-12);
}

TEST(Seeds, SineClosedForm) {
  const auto s = sine_pulse(2.0);
  EXPECT_NEAR(s.phi1(0.5), 2.0, 1e-15);
  EXPECT_NEAR(s.phi0(1.0), 1.0, 1e-15);
  EXPECT_EQ(s.phi1(1.5), 0.0);
}

TEST(Seeds, FrontRampClosesPulse) {
  const auto s = front_ramp_pulse(1.0);
  EXPECT_NEAR(s.phi1(0.0), 0.0, 1e-15);
  EXPECT_NEAR(s.phi1(1.0), 0.0, 1e-14);
  EXPECT_NEAR(s.dphi1(0.05), -1.0, 1e-15);
}

TEST(Seeds, Validation) {
  EXPECT_THROW(make_pulse_seed("sine", 0.5), std::invalid_argument);
  EXPECT_THROW(make_pulse_seed("front-ramp", -1.0), std::invalid_argument);
  EXPECT_THROW(make_pulse_seed("nope", -1.0), std::invalid_argument);
  EXPECT_THROW(ShortPulseSpec(1.2, sine_pulse(1.0)), std::invalid_argument);
  EXPECT_THROW(burgers::make_seed("nope", 1.0), std::invalid_argument);
}

TEST(Seeds, BurgersLinearRamp) {
  const auto r = burgers::linear_ramp(1.5);
  EXPECT_DOUBLE_EQ(r.value(0.3), -0.45);
  EXPECT_DOUBLE_EQ(r.derivative(0.3), -1.5);
  EXPECT_EQ(r.derivative(1.6), 0.0);
  for (double u = -1.9; u < 1.9; u += 0.1) {
    const double h = 1e-6;
    EXPECT_NEAR((r.value(u + h) - r.value(u - h)) / (2 * h), r.derivative(u), 1e-7);
  }
}

}  // namespace
