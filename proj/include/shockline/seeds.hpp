#pragma once

/**
 * @file seeds.hpp
 * @brief Built-in seed library: short-pulse seeds phi_1(s) on the annulus variable
 * s = (1 - r)/delta in [0, 1], and Burgers data f(x).
 *
 * A pulse seed's "slope" is its radial slope -d phi_1/ds (increasing r means decreasing
 * s). Rays compress where the radial slope is negative.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shockline/burgers.hpp"
#include "shockline/numerics.hpp"

namespace shockline {

struct PulseSeed {
  using Fn = std::function<double(double)>;
  std::string name;
  Fn phi1;   // seed on [0, 1]
  Fn dphi1;  // d phi_1 / ds
  Fn phi0;   // int_0^s phi_1; empty means "integrate numerically"
  /// Part of the annulus (in s) on which the slope hypothesis is evaluated.
  double window_lo = 0.0;
  double window_hi = 1.0;
};

namespace detail {

// Continuous piecewise-linear g with exact first and second antiderivatives.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
      : s_(std::move(knots)), g_(std::move(values)) {
    c1_.assign(s_.size(), 0.0);
    c2_.assign(s_.size(), 0.0);
    for (std::size_t j = 0; j + 1 < s_.size(); ++j) {
      const double h = s_[j + 1] - s_[j];
      c1_[j + 1] = c1_[j] + h * (g_[j] + g_[j + 1]) / 2.0;
      c2_[j + 1] = c2_[j] + c1_[j] * h + h * h * (2.0 * g_[j] + g_[j + 1]) / 6.0;
    }
  }

  double value(double s) const {
    const auto [j, d, slope] = locate(s);
    return g_[j] + slope * d;
  }
  double integral(double s) const {
    const auto [j, d, slope] = locate(s);
    return c1_[j] + g_[j] * d + slope * d * d / 2.0;
  }
  double double_integral(double s) const {
    const auto [j, d, slope] = locate(s);
    return c2_[j] + c1_[j] * d + g_[j] * d * d / 2.0 + slope * d * d * d / 6.0;
  }

 private:
  std::tuple<std::size_t, double, double> locate(double s) const {
    s = std::clamp(s, s_.front(), s_.back());
    std::size_t j = 0;
    while (j + 2 < s_.size() && s > s_[j + 1]) ++j;
    const double slope = (g_[j + 1] - g_[j]) / (s_[j + 1] - s_[j]);
    return {j, s - s_[j], slope};
  }

  std::vector<double> s_, g_, c1_, c2_;
};

inline bool in_annulus(double s) { return s >= 0.0 && s <= 1.0; }

}  // namespace detail

/// Raised sine A sin^2(pi s); radial slope -A pi sin(2 pi s), extremal at s = 1/4, 3/4.
inline PulseSeed sine_pulse(double amplitude) {
  const double pi = std::numbers::pi;
  PulseSeed seed;
  seed.name = "sine";
  seed.phi1 = [=](double s) {
    if (!detail::in_annulus(s)) return 0.0;
    const double v = std::sin(pi * s);
    return amplitude * v * v;
  };
  seed.dphi1 = [=](double s) {
    return detail::in_annulus(s) ? amplitude * pi * std::sin(2.0 * pi * s) : 0.0;
  };
  seed.phi0 = [=](double s) {
    s = std::clamp(s, 0.0, 1.0);
    return amplitude * (s / 2.0 - std::sin(2.0 * pi * s) / (4.0 * pi));
  };
  return seed;
}

/// Compactly supported smooth bump A exp(1 - 1/(1 - z^2)), z = 2s - 1.
inline PulseSeed bump_pulse(double amplitude) {
  PulseSeed seed;
  seed.name = "bump";
  seed.phi1 = [=](double s) {
    const double z = 2.0 * s - 1.0;
    if (std::abs(z) >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - z * z));
  };
  seed.dphi1 = [=](double s) {
    const double z = 2.0 * s - 1.0;
    if (std::abs(z) >= 1.0) return 0.0;
    const double q = 1.0 - z * z;
    return amplitude * std::exp(1.0 - 1.0 / q) * (-4.0 * z / (q * q));
  };
  return seed;
}

/// Expansive front with a gentle compressive tail: radial slope +alpha on s in [0, 0.1],
/// then d phi_1/ds ramps to +0.3 alpha and back to zero at the inner edge.
inline PulseSeed front_ramp_pulse(double alpha) {
  constexpr double s1 = 0.1;
  constexpr double s2 = 0.3;
  constexpr double k = 0.3;
  // Zero net integral of d phi_1/ds closes the pulse at s = 1.
  const double s3 = 2.0 / k * (s1 + (s2 - s1) * (1.0 - k) / 2.0 + k * s2 - k / 2.0);
  const detail::PiecewiseLinear g({0.0, s1, s2, s3, 1.0}, {-1.0, -1.0, k, k, 0.0});
  PulseSeed seed;
  seed.name = "front-ramp";
  seed.phi1 = [=](double s) { return detail::in_annulus(s) ? alpha * g.integral(s) : 0.0; };
  seed.dphi1 = [=](double s) { return detail::in_annulus(s) ? alpha * g.value(s) : 0.0; };
  seed.phi0 = [=](double s) { return alpha * g.double_integral(std::clamp(s, 0.0, 1.0)); };
  seed.window_lo = 0.0;
  seed.window_hi = s1;
  return seed;
}

struct SlopeExtremum {
  double value = 0.0;
  double location = 0.0;
};

/// Attained minimum of the radial slope -phi_1'(s) over [lo, hi].
inline SlopeExtremum min_radial_slope(const PulseSeed& seed, double lo, double hi) {
  constexpr int kSamples = 4001;
  auto slope = [&](double s) { return -seed.dphi1(s); };
  const double h = (hi - lo) / (kSamples - 1);
  int best = 0;
  double best_val = slope(lo);
  for (int i = 1; i < kSamples; ++i) {
    const double v = slope(lo + h * i);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + h * std::max(0, best - 1);
  double b = lo + h * std::min(kSamples - 1, best + 1);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    const double x1 = b - phi * (b - a);
    const double x2 = a + phi * (b - a);
    if (slope(x1) < slope(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  const double x = 0.5 * (a + b);
  const double v = slope(x);
  if (v < best_val) return {v, x};
  return {best_val, lo + h * best};
}

inline std::vector<std::string> pulse_seed_names() { return {"sine", "bump", "front-ramp"}; }

/// Named pulse seed scaled so that its windowed minimum radial slope equals `min_slope`.
inline PulseSeed make_pulse_seed(const std::string& name, double min_slope) {
  if (name == "sine" || name == "bump") {
    if (!(min_slope < 0.0)) {
      throw std::invalid_argument("seed '" + name +
                                  "' has a compressive half; its minimum slope must be negative");
    }
    PulseSeed unit = name == "sine" ? sine_pulse(1.0) : bump_pulse(1.0);
    const double base = min_radial_slope(unit, unit.window_lo, unit.window_hi).value;
    return name == "sine" ? sine_pulse(min_slope / base) : bump_pulse(min_slope / base);
  }
  if (name == "front-ramp") {
    if (!(min_slope > 0.0)) {
      throw std::invalid_argument("seed 'front-ramp' is expansive; its minimum slope must be positive");
    }
    return front_ramp_pulse(min_slope);
  }
  throw std::invalid_argument("unknown pulse seed '" + name + "'");
}

/// Short-pulse datum: phi(0) = delta^{5/2} phi_0(s), d_t phi(0) = delta^{3/2} phi_1(s).
class ShortPulseSpec {
 public:
  ShortPulseSpec(double delta, PulseSeed seed) : delta_(delta), seed_(std::move(seed)) {
    if (!(delta > 0.0 && delta < 1.0)) {
      throw std::invalid_argument("pulse thickness delta must lie in (0, 1)");
    }
    if (!seed_.phi1 || !seed_.dphi1) {
      throw std::invalid_argument("pulse seed '" + seed_.name + "' needs phi_1 and its derivative");
    }
    if (!(seed_.window_lo >= 0.0 && seed_.window_hi <= 1.0 && seed_.window_lo < seed_.window_hi)) {
      throw std::invalid_argument("pulse seed window must be a subinterval of [0, 1]");
    }
    extremum_ = min_radial_slope(seed_, seed_.window_lo, seed_.window_hi);
  }

  double delta() const { return delta_; }
  const PulseSeed& seed() const { return seed_; }
  /// Attained minimum of -phi_1'(s) over the seed window.
  double min_slope() const { return extremum_.value; }
  double min_slope_location() const { return extremum_.location; }

  double phi1(double s) const { return seed_.phi1(s); }
  double dphi1(double s) const { return seed_.dphi1(s); }
  double phi0(double s) const {
    if (s <= 0.0) return 0.0;
    if (seed_.phi0) return seed_.phi0(s);
    return adaptive_simpson(seed_.phi1, 0.0, std::min(s, 1.0),
                            QuadratureTolerance{1e-14, 1e-12, 50});
  }

 private:
  double delta_;
  PulseSeed seed_;
  SlopeExtremum extremum_;
};

namespace burgers {

/// f(u) = -c u on |u| <= 0.5, slope mollified to zero over 0.5 <= |u| <= 1.25 by a
/// quintic smoothstep; domain [-2, 2].
inline BurgersSeed linear_ramp(double c) {
  constexpr double w = 0.5;
  constexpr double eps = 0.75;
  auto step = [](double z) { return 1.0 - z * z * z * (10.0 - 15.0 * z + 6.0 * z * z); };
  auto step_integral = [](double z) {
    return z - z * z * z * z * (2.5 - 3.0 * z + z * z);
  };
  auto df = [=](double u) {
    const double a = std::abs(u);
    if (a <= w) return -c;
    if (a >= w + eps) return 0.0;
    return -c * step((a - w) / eps);
  };
  auto f = [=](double u) {
    const double a = std::abs(u);
    double mag = 0.0;
    if (a <= w) {
      mag = a;
    } else if (a < w + eps) {
      mag = w + eps * step_integral((a - w) / eps);
    } else {
      mag = w + eps * step_integral(1.0);
    }
    return u < 0.0 ? c * mag : -c * mag;
  };
  return BurgersSeed(f, df, {-2.0, 2.0}, "linear-ramp");
}

/// f(u) = -c sin(u) on [-pi, pi].
inline BurgersSeed sine(double c) {
  const double pi = std::numbers::pi;
  return BurgersSeed([=](double u) { return -c * std::sin(u); },
                     [=](double u) { return -c * std::cos(u); }, {-pi, pi}, "sine");
}

inline std::vector<std::string> seed_names() { return {"linear-ramp", "sine"}; }

inline BurgersSeed make_seed(const std::string& name, double c) {
  if (name == "linear-ramp") return linear_ramp(c);
  if (name == "sine") return sine(c);
  throw std::invalid_argument("unknown Burgers seed '" + name + "'");
}

}  // namespace burgers
}  // namespace shockline
