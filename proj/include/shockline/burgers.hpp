#pragma once

/**
 * @file burgers.hpp
 * @brief Exact characteristic solution of the damped Burgers equation
 *   d_t phi + phi d_x phi = -a w(t) phi,  phi(0, x) = f(x).
 *
 * Along the eikonal rays X(t; u) = u + f(u) I(t) the solution is f(u) / A(t) and the
 * inverse foliation density is mu = dX/du = 1 + f'(u) I(t). The first ray with mu = 0
 * marks the shock.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shockline/classification.hpp"
#include "shockline/damping.hpp"
#include "shockline/numerics.hpp"

namespace shockline::burgers {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
};

/// Initial datum f on a closed interval with its attained minimum slope.
class BurgersSeed {
 public:
  using Fn = std::function<double(double)>;

  /// `derivative` may be empty, in which case f' is taken by fourth-order central
  /// differences with step 1e-5 * domain width.
  BurgersSeed(Fn f, Fn derivative, Interval domain, std::string name = "custom")
      : f_(std::move(f)), df_(std::move(derivative)), domain_(domain), name_(std::move(name)) {
    if (!f_) throw std::invalid_argument("Burgers seed function is empty");
    if (!(domain_.hi > domain_.lo)) throw std::invalid_argument("Burgers seed domain is empty");
    if (!domain_.contains(0.0)) {
      throw std::invalid_argument("Burgers seed domain must contain the normalization point 0");
    }
    if (std::abs(f_(0.0)) > 1e-12) {
      throw std::invalid_argument("Burgers seed must satisfy f(0) = 0");
    }
    locate_minimum_slope();
  }

  double value(double x) const { return f_(x); }

  double derivative(double x) const {
    if (df_) return df_(x);
    return central_difference4(f_, x, 1e-5 * domain_.width());
  }

  /// c = -min f'; positive means compression.
  double compression() const { return compression_; }
  double min_location() const { return x_min_; }
  /// Every sampled location where f' attains its minimum (ties within 1e-10).
  const std::vector<double>& minimizers() const { return minimizers_; }
  const Interval& domain() const { return domain_; }
  const std::string& name() const { return name_; }
  bool has_analytic_derivative() const { return static_cast<bool>(df_); }

 private:
  void locate_minimum_slope() {
    constexpr std::size_t kSamples = 4097;
    std::vector<double> xs(kSamples), ds(kSamples);
    const double h = domain_.width() / static_cast<double>(kSamples - 1);
    std::size_t best = 0;
    for (std::size_t i = 0; i < kSamples; ++i) {
      xs[i] = i + 1 == kSamples ? domain_.hi : domain_.lo + h * static_cast<double>(i);
      ds[i] = derivative(xs[i]);
      if (ds[i] < ds[best]) best = i;
    }
    // Golden-section refinement inside the neighbouring sample bracket.
    double lo = xs[best == 0 ? 0 : best - 1];
    double hi = xs[best + 1 == kSamples ? best : best + 1];
    double x_best = xs[best];
    double d_best = ds[best];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double d1 = derivative(x1);
    double d2 = derivative(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, domain_.width()); ++it) {
      if (d1 < d2) {
        hi = x2;
        x2 = x1;
        d2 = d1;
        x1 = hi - phi * (hi - lo);
        d1 = derivative(x1);
      } else {
        lo = x1;
        x1 = x2;
        d1 = d2;
        x2 = lo + phi * (hi - lo);
        d2 = derivative(x2);
      }
    }
    const double x_ref = d1 < d2 ? x1 : x2;
    const double d_ref = std::min(d1, d2);
    if (d_ref < d_best) {
      x_best = x_ref;
      d_best = d_ref;
    }
    x_min_ = x_best;
    compression_ = -d_best;
    for (std::size_t i = 0; i < kSamples; ++i) {
      if (ds[i] <= d_best + 1e-10) minimizers_.push_back(xs[i]);
    }
    if (minimizers_.empty()) minimizers_.push_back(x_best);
  }

  Fn f_;
  Fn df_;
  Interval domain_;
  std::string name_;
  double compression_ = 0.0;
  double x_min_ = 0.0;
  std::vector<double> minimizers_;
};

/// Rays u -> X(t; u) sampled at a list of times.
struct CharacteristicFan {
  std::vector<double> u_grid;
  std::vector<double> times;
  std::vector<std::vector<double>> positions;  // [time][ray]
  std::vector<std::vector<double>> mu;         // [time][ray]
  std::vector<bool> crossed;                   // per ray
  std::optional<double> first_crossing;        // earliest sampled time with a crossing
};

inline void require_in_domain(const BurgersSeed& seed, double u) {
  if (!seed.domain().contains(u)) {
    throw std::domain_error("ray label " + std::to_string(u) + " outside the seed domain");
  }
}

/// phi along the ray launched at u: f(u) / A(t).
inline double value_along_ray(const BurgersSeed& seed, const DampingProfile& p, double t,
                              double u) {
  require_in_domain(seed, u);
  return seed.value(u) / p.accumulated_factor(t);
}

/// mu(t, u) = 1 + f'(u) I(t), the Jacobian dX/du of the characteristic map.
inline double mu_closed_form(const BurgersSeed& seed, const DampingProfile& p, double t,
                             double u) {
  require_in_domain(seed, u);
  return 1.0 + seed.derivative(u) * p.weight_integral(t);
}

inline double ray_position(const BurgersSeed& seed, double u, double weight_integral) {
  return u + seed.value(u) * weight_integral;
}

inline CharacteristicFan trace_fan(const BurgersSeed& seed, const DampingProfile& p,
                                   const std::vector<double>& times,
                                   const std::vector<double>& u_grid) {
  if (times.empty() || u_grid.empty()) {
    throw std::invalid_argument("trace_fan needs non-empty time and ray grids");
  }
  for (std::size_t i = 1; i < u_grid.size(); ++i) {
    if (!(u_grid[i] > u_grid[i - 1])) {
      throw std::invalid_argument("trace_fan ray grid must be strictly increasing");
    }
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] < times[i - 1]) throw std::invalid_argument("trace_fan times must be sorted");
  }
  for (double u : u_grid) require_in_domain(seed, u);

  const std::size_t n = u_grid.size();
  std::vector<double> values(n), slopes(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = seed.value(u_grid[i]);
    slopes[i] = seed.derivative(u_grid[i]);
  }

  CharacteristicFan fan;
  fan.u_grid = u_grid;
  fan.times = times;
  fan.crossed.assign(n, false);
  fan.positions.reserve(times.size());
  fan.mu.reserve(times.size());
  for (double t : times) {
    const double I = p.weight_integral(t);
    std::vector<double> x(n), m(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u_grid[i] + values[i] * I;
      m[i] = 1.0 + slopes[i] * I;
    }
    bool any = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (x[i + 1] <= x[i]) {
        fan.crossed[i] = true;
        fan.crossed[i + 1] = true;
        any = true;
      }
    }
    if (any && !fan.first_crossing) fan.first_crossing = t;
    fan.positions.push_back(std::move(x));
    fan.mu.push_back(std::move(m));
  }
  return fan;
}

/// Whether adjacent rays of the fan have met (X non-increasing) by time t.
inline bool fan_crossed_at(const BurgersSeed& seed, const DampingProfile& p,
                           const std::vector<double>& u_grid, double t) {
  const double I = p.weight_integral(t);
  double prev = ray_position(seed, u_grid.front(), I);
  for (std::size_t i = 1; i < u_grid.size(); ++i) {
    const double x = ray_position(seed, u_grid[i], I);
    if (x <= prev) return true;
    prev = x;
  }
  return false;
}

/// First crossing time of the fan, refined by bisection on the time axis.
///
/// The coarse scan samples `coarse_steps` log-spaced times on (0, t_hi]; the bracket
/// around the first crossed sample is then halved until its relative width is below
/// `rel_tol`.
inline std::optional<double> first_crossing_time(const BurgersSeed& seed,
                                                 const DampingProfile& p,
                                                 const std::vector<double>& u_grid, double t_hi,
                                                 double rel_tol = 1e-12,
                                                 std::size_t coarse_steps = 256) {
  if (u_grid.size() < 2) throw std::invalid_argument("first_crossing_time needs >= 2 rays");
  double prev = 0.0;
  const double x_hi = std::log1p(t_hi);
  for (std::size_t k = 1; k <= coarse_steps; ++k) {
    const double t = std::expm1(x_hi * static_cast<double>(k) / static_cast<double>(coarse_steps));
    if (fan_crossed_at(seed, p, u_grid, t)) {
      const auto r = bisect_predicate(
          [&](double s) { return !fan_crossed_at(seed, p, u_grid, s); }, prev, t, rel_tol, 400);
      return r.root;
    }
    prev = t;
  }
  return std::nullopt;
}

struct ShockTimeOptions {
  double t_max = std::exp(40.0);
  double rel_tol = 1e-10;
  int max_iterations = 200;
  /// Spacing of the bracketing scan in ln(1+t).
  double log_step = 0.25;
};

/// Blow-up time: root of I(T) = 1/c, bracketed on a log-spaced scan then bisected.
inline ShockClassification shock_time(const BurgersSeed& seed, const DampingProfile& p,
                                      const ShockTimeOptions& opt = {}) {
  const double c = seed.compression();
  if (!(c > 0.0)) return Global{"characteristics never intersect"};
  const double target = 1.0 / c;
  // Undamped: I(t) = t.
  if (p.strength() == 0.0) {
    if (target <= opt.t_max) return Shock{target};
    return Inconclusive{opt.t_max, "no root of I(T) = 1/c within the search window"};
  }
  const double x_max = std::log1p(opt.t_max);
  double t_prev = 0.0;
  double i_prev = 0.0;
  std::vector<double> increments;
  for (double x = opt.log_step;; x += opt.log_step) {
    const double xx = std::min(x, x_max);
    const double t = std::expm1(xx);
    const double I = p.weight_integral(t);
    if (I >= target) {
      const auto r = bisect_root([&](double s) { return p.weight_integral(s) - target; }, t_prev,
                                 t, opt.rel_tol, opt.max_iterations);
      return Shock{r.root};
    }
    increments.push_back(I - i_prev);
    t_prev = t;
    i_prev = I;
    if (xx >= x_max) break;
  }
  // Geometrically shrinking increments: extrapolate sup I and compare with 1/c.
  if (increments.size() >= 4) {
    const std::size_t n = increments.size();
    const double r1 = increments[n - 1] / increments[n - 2];
    const double r2 = increments[n - 2] / increments[n - 3];
    if (r1 < 0.9 && r2 < 0.9 && r1 >= 0.0) {
      const double limit = i_prev + increments[n - 1] * r1 / (1.0 - r1);
      if (limit < target * (1.0 - 1e-6)) return Global{"damping absorbs compression"};
    }
  }
  return Inconclusive{opt.t_max, "no root of I(T) = 1/c within the search window"};
}

struct GradientSample {
  double value = 0.0;
  bool blow_up = false;
};

/// d_x phi at X(t; u): f'(u) A(t)^{-1} / mu(t, u). mu <= 0 is reported as blow-up.
inline GradientSample spatial_gradient(const BurgersSeed& seed, const DampingProfile& p,
                                       double t, double u) {
  const double mu = mu_closed_form(seed, p, t, u);
  const double numerator = seed.derivative(u) / p.accumulated_factor(t);
  if (mu <= 0.0) {
    return {numerator < 0.0 ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity(),
            true};
  }
  return {numerator / mu, false};
}

/// Eikonal label u with X(t; u) = x, found by bisection on the monotone pre-shock map.
inline double recover_label(const BurgersSeed& seed, const DampingProfile& p, double t, double x,
                            double tol = 1e-13) {
  const double I = p.weight_integral(t);
  const auto& d = seed.domain();
  const double x_lo = ray_position(seed, d.lo, I);
  const double x_hi = ray_position(seed, d.hi, I);
  if (x < x_lo || x > x_hi) {
    throw std::domain_error("position " + std::to_string(x) + " not covered by the fan");
  }
  double lo = d.lo;
  double hi = d.hi;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ray_position(seed, mid, I) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Eulerian solution phi(t, x) before the shock.
inline double solution_at(const BurgersSeed& seed, const DampingProfile& p, double t, double x) {
  const double u = recover_label(seed, p, t, x);
  return seed.value(u) / p.accumulated_factor(t);
}

}  // namespace shockline::burgers
