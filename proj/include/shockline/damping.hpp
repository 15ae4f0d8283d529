#pragma once

/**
 * @file damping.hpp
 * @brief Time-dependent damping weight a/(1+t)^lambda (or a*f(t)), the accumulated
 * factor A(t) = exp(int_0^t a w) and the reciprocal integral I(t) = int_0^t 1/A.
 */

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shockline/numerics.hpp"

namespace shockline {

/// Raised when an operation needs the power-law form but the profile carries a custom weight.
class UnsupportedProfile : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CBounds {
  double lower = 1.0;
  double upper = 1.0;
};

namespace detail {

// Cumulative I(t) at log-spaced nodes x_k = k * dx, x = ln(1 + t).
struct WeightTable {
  double dx = 0.25;
  std::vector<double> cumulative;
};

}  // namespace detail

class DampingProfile {
 public:
  using Weight = std::function<double(double)>;

  /// Largest ln(1+t) covered by the precomputed integral table.
  static constexpr double kTableLogHorizon = 40.0;

  DampingProfile() : DampingProfile(power_law(0.0, 2.0)) {}

  static DampingProfile power_law(double a, double lambda) {
    if (!(lambda > 1.0)) {
      throw std::invalid_argument("damping decay exponent lambda must exceed 1 (got " +
                                  std::to_string(lambda) + ")");
    }
    if (!std::isfinite(a)) throw std::invalid_argument("damping strength must be finite");
    DampingProfile p(a, lambda, nullptr, "");
    if (a != 0.0) p.table_ = build_table(p);
    return p;
  }

  /// Damping a * weight(t). The weight must be positive on the evaluated window.
  static DampingProfile custom(double a, Weight weight, std::string label = "custom") {
    if (!weight) throw std::invalid_argument("custom damping weight is empty");
    if (!std::isfinite(a)) throw std::invalid_argument("damping strength must be finite");
    return DampingProfile(a, 0.0, std::make_shared<const Weight>(std::move(weight)),
                          std::move(label));
  }

  double strength() const { return a_; }
  /// Meaningless when a custom weight is present (reported as 0).
  double decay_exponent() const { return lambda_; }
  bool has_custom_weight() const { return static_cast<bool>(weight_); }
  const std::string& label() const { return label_; }

  /// The energy estimates behind the lifespan theorem need lambda > 3/2; the
  /// engines accept any lambda > 1 and report this flag instead of refusing.
  bool within_theorem_hypothesis() const { return !has_custom_weight() && lambda_ > 1.5; }

  double weight(double t) const {
    require_time(t);
    if (weight_) {
      const double w = (*weight_)(t);
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw std::domain_error("custom damping weight must be positive and finite at t=" +
                                std::to_string(t));
      }
      return w;
    }
    return std::pow(1.0 + t, -lambda_);
  }

  double coefficient(double t) const { return a_ == 0.0 ? 0.0 : a_ * weight(t); }

  /// A(t); equals 1 exactly at t = 0 and for a = 0.
  double accumulated_factor(double t) const {
    require_time(t);
    if (a_ == 0.0 || t == 0.0) return 1.0;
    if (weight_) return integrate_custom(t).first;
    return std::exp(-exponent_scale() * std::expm1((1.0 - lambda_) * std::log1p(t)));
  }

  double weight_integral(double t) const {
    require_time(t);
    if (a_ == 0.0) return t;
    if (t == 0.0) return 0.0;
    if (weight_) return integrate_custom(t).second;
    const double x = std::log1p(t);
    const auto& cum = table_->cumulative;
    const double dx = table_->dx;
    auto k = static_cast<std::size_t>(std::floor(x / dx));
    double base = 0.0;
    double x0 = 0.0;
    if (k < cum.size()) {
      base = cum[k];
      x0 = static_cast<double>(k) * dx;
    } else {
      base = cum.back();
      x0 = static_cast<double>(cum.size() - 1) * dx;
      while (x0 + dx < x) {
        base += panel(x0, x0 + dx);
        x0 += dx;
      }
    }
    return base + panel(x0, x);
  }

  /// Bounds e^{-beta} <= A(t) <= e^{beta}, beta = |a/(lambda-1)|, valid for all t.
  CBounds c_bounds() const {
    if (weight_) {
      throw UnsupportedProfile("c_bounds requires the power-law damping form");
    }
    const double beta = std::abs(exponent_scale());
    return {std::exp(-beta), std::exp(beta)};
  }

  /// a/(lambda-1): ln A(t) tends to this value as t grows.
  double exponent_scale() const {
    if (weight_) throw UnsupportedProfile("exponent scale requires the power-law damping form");
    return a_ / (lambda_ - 1.0);
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    if (weight_) {
      os << "a=" << a_ << ",weight=" << label_;
    } else {
      os << "a=" << a_ << ",lambda=" << lambda_;
    }
    return os.str();
  }

 private:
  DampingProfile(double a, double lambda, std::shared_ptr<const Weight> w, std::string label)
      : a_(a), lambda_(lambda), weight_(std::move(w)), label_(std::move(label)) {}

  static void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("time must be finite and non-negative (got " +
                                  std::to_string(t) + ")");
    }
  }

  double inverse_factor(double s) const {
    return std::exp(exponent_scale() * std::expm1((1.0 - lambda_) * std::log1p(s)));
  }

  // int over [x0, x1] in x = ln(1+s) of A^{-1}(s) ds.
  double panel(double x0, double x1) const {
    return adaptive_simpson(
        [this](double x) {
          const double s = std::expm1(x);
          return inverse_factor(s) * (s + 1.0);
        },
        x0, x1);
  }

  static std::shared_ptr<const detail::WeightTable> build_table(const DampingProfile& p) {
    auto table = std::make_shared<detail::WeightTable>();
    const auto panels = static_cast<std::size_t>(kTableLogHorizon / table->dx);
    table->cumulative.resize(panels + 1, 0.0);
    for (std::size_t k = 0; k < panels; ++k) {
      const double x0 = static_cast<double>(k) * table->dx;
      table->cumulative[k + 1] = table->cumulative[k] + p.panel(x0, x0 + table->dx);
    }
    return table;
  }

  // Joint RK4 for dA/dt = a w A, dI/dt = 1/A in x = ln(1+t), carried as ln A so that
  // fast-growing factors stay representable. Steps are doubled until two successive
  // refinements agree to 1e-10 (relative in A and I).
  std::pair<double, double> integrate_custom(double t) const {
    const double x_end = std::log1p(t);
    auto rhs = [this](double x, double logA, double& dL, double& dI) {
      const double s = std::expm1(x);
      const double jac = s + 1.0;
      dL = a_ * weight(s) * jac;
      dI = jac * std::exp(-logA);
    };
    auto run = [&](std::size_t n) {
      const double h = x_end / static_cast<double>(n);
      double L = 0.0;
      double I = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) * h;
        double l1, i1, l2, i2, l3, i3, l4, i4;
        rhs(x, L, l1, i1);
        rhs(x + 0.5 * h, L + 0.5 * h * l1, l2, i2);
        rhs(x + 0.5 * h, L + 0.5 * h * l2, l3, i3);
        rhs(x + h, L + h * l3, l4, i4);
        L += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
        I += h / 6.0 * (i1 + 2.0 * i2 + 2.0 * i3 + i4);
      }
      return std::make_pair(L, I);
    };
    std::size_t n = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(32.0 * x_end)));
    auto prev = run(n);
    for (int refinement = 0; refinement < 18; ++refinement) {
      n *= 2;
      auto next = run(n);
      const double dL = std::abs(next.first - prev.first);
      const double dI = std::abs(next.second - prev.second) / std::abs(next.second);
      if (dL <= 1e-10 && dI <= 1e-10) return {std::exp(next.first), next.second};
      prev = next;
    }
    throw ConvergenceError("custom damping integration did not converge at t=" +
                           std::to_string(t));
  }

  double a_ = 0.0;
  double lambda_ = 2.0;
  std::shared_ptr<const Weight> weight_;
  std::string label_;
  std::shared_ptr<const detail::WeightTable> table_;
};

inline double coefficient(const DampingProfile& p, double t) { return p.coefficient(t); }
inline double accumulated_factor(const DampingProfile& p, double t) {
  return p.accumulated_factor(t);
}
inline double weight_integral(const DampingProfile& p, double t) { return p.weight_integral(t); }
inline CBounds c_bounds(const DampingProfile& p) { return p.c_bounds(); }

}  // namespace shockline
