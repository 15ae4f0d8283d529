#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace shockline {

/// Raised when an iterative numerical method cannot reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureTolerance {
  double absolute = 1e-12;
  double relative = 1e-10;
  int max_depth = 50;
};

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth, int max_depth, bool& ok) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth) {
    ok = false;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth, ok) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth, ok);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
///
/// The local error budget is max(absolute, relative * |coarse estimate|), split in
/// half at every bisection. Throws ConvergenceError when the recursion depth is
/// exhausted before the budget is met.
template <class F>
double adaptive_simpson(F&& f, double a, double b, QuadratureTolerance tol = {}) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double budget = std::max(tol.absolute, tol.relative * std::abs(whole));
  bool ok = true;
  const double value =
      detail::simpson_recurse(f, a, b, fa, fm, fb, whole, budget, 0, tol.max_depth, ok);
  if (!ok || !std::isfinite(value)) {
    throw ConvergenceError("adaptive Simpson quadrature did not converge on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return value;
}

struct BisectionResult {
  double root = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Bisection for a monotone predicate change on [lo, hi].
///
/// `below(x)` must be true at lo and false at hi; the returned root separates the two
/// regions to relative width `rel_tol`.
template <class Pred>
BisectionResult bisect_predicate(Pred&& below, double lo, double hi, double rel_tol = 1e-10,
                                 int max_iterations = 200) {
  BisectionResult out;
  for (int i = 0; i < max_iterations; ++i) {
    out.iterations = i + 1;
    const double mid = 0.5 * (lo + hi);
    if (below(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(std::abs(hi), std::numeric_limits<double>::min())) {
      out.converged = true;
      break;
    }
  }
  out.root = 0.5 * (lo + hi);
  return out;
}

/// Root of a monotone function g on [lo, hi] with g(lo) and g(hi) of opposite sign.
template <class G>
BisectionResult bisect_root(G&& g, double lo, double hi, double rel_tol = 1e-10,
                            int max_iterations = 200) {
  const bool increasing = g(lo) < g(hi);
  return bisect_predicate([&](double x) { return increasing ? g(x) < 0.0 : g(x) > 0.0; }, lo,
                          hi, rel_tol, max_iterations);
}

/// Fourth-order central difference of f at x with step h.
template <class F>
double central_difference4(F&& f, double x, double h) {
  return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

}  // namespace shockline
