#pragma once

/**
 * @file predict.hpp
 * @brief Closed-form lifespan bounds, case classification, the leading-order mu asymptote
 * in the shock region, and damping-shift tables.
 *
 * Slopes are radial slopes m = min(-phi_1'(s)) of the pulse seed; shocks need m <= -1.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shockline/classification.hpp"
#include "shockline/damping.hpp"
#include "shockline/io.hpp"
#include "shockline/seeds.hpp"

namespace shockline {

/// Raised when the largeness condition m <= -1 fails.
class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The part of an equation of state that matters for the shock mechanism.
struct EosDescriptor {
  std::string name;
  double dH_dh = -2.4;

  static EosDescriptor polytropic(double gamma) {
    return {"polytropic(gamma=" + io::format_double(gamma) + ")", -(gamma + 1.0)};
  }
  static EosDescriptor chaplygin() { return {"chaplygin", 0.0}; }
};

inline bool chaplygin_flag(const EosDescriptor& eos) { return std::abs(eos.dH_dh) <= 1e-12; }

namespace detail {

inline double lifespan(double delta, double slope, double C) {
  return std::expm1(C / (2.0 * std::abs(slope) * std::sqrt(delta)));
}

inline void require_pulse(double delta, double slope) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(slope <= -1.0)) {
    throw HypothesisViolation("min slope " + io::format_double(slope) +
                              " > -1: largeness condition unmet");
  }
}

}  // namespace detail

/// [exp(delta^{-1/2} C_low/(2|m|)) - 1, exp(delta^{-1/2} C_high/(2|m|)) - 1].
inline ShockInterval t_star_interval(double delta, double slope, const DampingProfile& p) {
  detail::require_pulse(delta, slope);
  const CBounds c = p.c_bounds();
  return {detail::lifespan(delta, slope, c.lower), detail::lifespan(delta, slope, c.upper)};
}

inline ShockClassification classify_case(double slope, double delta, const DampingProfile& p,
                                         const EosDescriptor& eos = EosDescriptor::polytropic(1.4)) {
  if (chaplygin_flag(eos)) return Global{"dH/dh = 0: no shock mechanism"};
  if (slope <= -1.0) return t_star_interval(delta, slope, p);
  if (slope > 0.0) return Global{"expansive leading foliation"};
  return Inconclusive{0.0, "slope in (-1, 0]: outside both theorem cases"};
}

inline ShockClassification classify_case(const ShortPulseSpec& spec, const DampingProfile& p,
                                         const EosDescriptor& eos = EosDescriptor::polytropic(1.4)) {
  return classify_case(spec.min_slope(), spec.delta(), p, eos);
}

/// Leading term 1 + 2 delta^{1/2} slope ln(1+t) / A0.
inline double mu_asymptote(double t, double delta, double slope, double A0) {
  if (t < 0.0) throw std::invalid_argument("time must be non-negative");
  if (!(A0 > 0.0)) throw std::invalid_argument("A0 must be positive");
  return 1.0 + 2.0 * std::sqrt(delta) * slope * std::log1p(t) / A0;
}

/// Zero of mu_asymptote; none unless slope < 0.
inline std::optional<double> mu_asymptote_zero(double delta, double slope, double A0) {
  if (!(slope < 0.0)) return std::nullopt;
  return detail::lifespan(delta, slope, A0);
}

struct ShiftCell {
  double a = 0.0;
  double lambda = 2.0;
  double t_lower = 0.0;
  double t_upper = 0.0;
  std::optional<double> t_numerical;
  bool monotone_ok = true;

  double midpoint() const { return 0.5 * (t_lower + t_upper); }
};

struct ShiftTable {
  std::vector<double> a_values;
  std::vector<double> lambda_values;
  std::vector<ShiftCell> cells;  // row-major: a outer, lambda inner
  std::vector<std::string> violations;

  const ShiftCell& at(std::size_t ia, std::size_t il) const {
    return cells[ia * lambda_values.size() + il];
  }
  ShiftCell& at(std::size_t ia, std::size_t il) { return cells[ia * lambda_values.size() + il]; }
  bool monotone() const { return violations.empty(); }
};

/// Lifespan interval with the constant restricted to the side of 1 fixed by sign(a):
/// C in [1, e^{a/(lambda-1)}] for a > 0 and [e^{a/(lambda-1)}, 1] for a < 0.
inline ShockInterval signed_shift_interval(double delta, double slope, const DampingProfile& p) {
  detail::require_pulse(delta, slope);
  const double edge = std::exp(p.exponent_scale());
  return {detail::lifespan(delta, slope, std::min(1.0, edge)),
          detail::lifespan(delta, slope, std::max(1.0, edge))};
}

namespace detail {

// Checks one axis (a or lambda) of `values` for the damping-shift ordering.
// Along a: strictly increasing. Along lambda: distance to `undamped` strictly decreasing,
// or constant at the undamped value when a = 0.
inline bool shift_ordered(const std::vector<double>& values, bool along_a, double a,
                          double undamped) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (along_a) {
      if (!(values[k] > values[k - 1])) return false;
    } else if (a == 0.0) {
      if (values[k] != values[k - 1]) return false;
    } else if (!(std::abs(values[k] - undamped) < std::abs(values[k - 1] - undamped))) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Interval midpoints (and numerical lifespans when given, a-major over the input axes) over an
/// (a, lambda) grid with monotonicity verdicts. Axes are sorted ascending.
inline ShiftTable shift_analysis(std::vector<double> a_values, std::vector<double> lambda_values,
                                 double delta, double slope,
                                 const std::vector<std::optional<double>>& numerical = {},
                                 std::optional<double> numerical_undamped = std::nullopt) {
  if (a_values.empty() || lambda_values.empty()) throw std::invalid_argument("empty shift grid");
  for (double l : lambda_values) {
    if (!(l > 1.0)) throw std::invalid_argument("every lambda must exceed 1");
  }
  ShiftTable tab;
  std::vector<std::size_t> ia(a_values.size()), il(lambda_values.size());
  for (std::size_t i = 0; i < ia.size(); ++i) ia[i] = i;
  for (std::size_t i = 0; i < il.size(); ++i) il[i] = i;
  std::stable_sort(ia.begin(), ia.end(), [&](auto x, auto y) { return a_values[x] < a_values[y]; });
  std::stable_sort(il.begin(), il.end(),
                   [&](auto x, auto y) { return lambda_values[x] < lambda_values[y]; });
  if (!numerical.empty() && numerical.size() != a_values.size() * lambda_values.size()) {
    throw std::invalid_argument("numerical lifespans must match the grid size");
  }
  for (std::size_t x : ia) tab.a_values.push_back(a_values[x]);
  for (std::size_t y : il) tab.lambda_values.push_back(lambda_values[y]);
  for (std::size_t x : ia) {
    for (std::size_t y : il) {
      const auto p = DampingProfile::power_law(a_values[x], lambda_values[y]);
      const ShockInterval iv = signed_shift_interval(delta, slope, p);
      ShiftCell c{a_values[x], lambda_values[y], iv.lower, iv.upper, std::nullopt, true};
      if (!numerical.empty()) c.t_numerical = numerical[x * lambda_values.size() + y];
      tab.cells.push_back(c);
    }
  }
  const double undamped = detail::lifespan(delta, slope, 1.0);
  auto flag = [&](bool along_a, std::size_t fixed, bool use_numerical) {
    const std::size_t n = along_a ? tab.a_values.size() : tab.lambda_values.size();
    std::vector<double> series;
    for (std::size_t k = 0; k < n; ++k) {
      const ShiftCell& c = along_a ? tab.at(k, fixed) : tab.at(fixed, k);
      if (use_numerical) {
        if (!c.t_numerical) return;
        series.push_back(*c.t_numerical);
      } else {
        series.push_back(c.midpoint());
      }
    }
    const double a = along_a ? 0.0 : tab.a_values[fixed];
    const double ref = use_numerical ? numerical_undamped.value_or(undamped) : undamped;
    if (use_numerical && !along_a && a != 0.0 && !numerical_undamped) return;
    if (detail::shift_ordered(series, along_a, a, ref)) return;
    for (std::size_t k = 0; k < n; ++k) (along_a ? tab.at(k, fixed) : tab.at(fixed, k)).monotone_ok = false;
    tab.violations.push_back(std::string(use_numerical ? "numerical" : "predicted") +
                             (along_a ? " lifespan not increasing in a at lambda = " +
                                            io::format_double(tab.lambda_values[fixed])
                                      : " lifespan not approaching the undamped value in lambda at a = " +
                                            io::format_double(tab.a_values[fixed])));
  };
  for (bool use_numerical : {false, true}) {
    if (use_numerical && numerical.empty()) break;
    for (std::size_t y = 0; y < tab.lambda_values.size(); ++y) flag(true, y, use_numerical);
    for (std::size_t x = 0; x < tab.a_values.size(); ++x) flag(false, x, use_numerical);
  }
  return tab;
}

/// CSV `a,lambda,t_lower,t_upper,t_numerical,monotone_ok`.
inline std::string shift_table_csv(const ShiftTable& tab) {
  io::CsvWriter w({"a", "lambda", "t_lower", "t_upper", "t_numerical", "monotone_ok"});
  for (const auto& c : tab.cells) {
    w.raw_row({io::format_double(c.a), io::format_double(c.lambda), io::format_double(c.t_lower),
               io::format_double(c.t_upper),
               c.t_numerical ? io::format_double(*c.t_numerical) : std::string("none"),
               c.monotone_ok ? "true" : "false"});
  }
  return w.str();
}

}  // namespace shockline
