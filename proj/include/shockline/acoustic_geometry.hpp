#pragma once

/**
 * @file acoustic_geometry.hpp
 * @brief Outgoing acoustic rays dX/dt = v + eta and the inverse foliation density mu,
 * computed twice: as the Jacobian -dX/du of the ray map (u = 1 - r_0) and by integrating
 * the transport law along each ray.
 *
 * Radial transport law, with T q = -mu eta^{-1} d_r q and L q = d_t q + (v + eta) d_r q:
 *
 *     d mu/dt = m + mu e,   m = (1/2) (dH/dh) T h + a w T phi,
 *     e = (gamma - 1)/(2 eta^2) L h + eta^{-1} L v.
 *
 * Since v = -d_r phi, m/mu = (gamma + 1)/(2 eta) d_r h + a w v / eta; the ODE is linear in mu.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shockline/burgers.hpp"
#include "shockline/damping.hpp"
#include "shockline/eos.hpp"
#include "shockline/euler_radial.hpp"
#include "shockline/io.hpp"

namespace shockline {

struct LocalState {
  double v = 0.0;
  double eta = 0.0;
  double h = 0.0;
  double dv_dr = 0.0;
  double dh_dr = 0.0;
  double dv_dt = 0.0;
  double dh_dt = 0.0;
};

/// Raised when fewer than three rays remain to difference the fan.
class InsufficientFan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TransportCoefficients {
  double m_over_mu = 0.0;
  double e = 0.0;
};

inline TransportCoefficients transport_coefficients(const LocalState& s, const PolytropicEos& eos,
                                                    double damping_coefficient) {
  const double speed = s.v + s.eta;
  const double Lv = s.dv_dt + speed * s.dv_dr;
  const double Lh = s.dh_dt + speed * s.dh_dr;
  TransportCoefficients c;
  c.m_over_mu = -0.5 * eos.dH_dh() / s.eta * s.dh_dr + damping_coefficient * s.v / s.eta;
  c.e = (eos.gamma - 1.0) / (2.0 * s.eta * s.eta) * Lh + Lv / s.eta;
  return c;
}

/// RK4 integration of d mu/dt = mu (m/mu + e) from mu(t0) = 1.
inline double integrate_transport(const std::function<TransportCoefficients(double)>& coeffs,
                                  double t0, double t1, int steps) {
  if (steps < 1) throw std::invalid_argument("transport integration needs at least one step");
  auto rate = [&](double t, double mu) {
    const auto c = coeffs(t);
    return mu * (c.m_over_mu + c.e);
  };
  const double h = (t1 - t0) / steps;
  double mu = 1.0;
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    const double k1 = rate(t, mu);
    const double k2 = rate(t + 0.5 * h, mu + 0.5 * h * k1);
    const double k3 = rate(t + 0.5 * h, mu + 0.5 * h * k2);
    const double k4 = rate(t + h, mu + h * k3);
    mu += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return mu;
}

namespace detail {

struct CubicStencil {
  int first = 0;
  double w[4];
  double dw[4];
};

// Four-point Lagrange weights on cell centres; dw already divided by dr.
inline std::optional<CubicStencil> cubic_stencil(const Grid& g, double r) {
  const double x = (r - g.r_in) / g.dr - 0.5;
  const int j = static_cast<int>(std::floor(x));
  if (j - 1 < 0 || j + 2 >= g.cells) return std::nullopt;
  const double z = x - j;
  CubicStencil s;
  s.first = j - 1;
  s.w[0] = -z * (z - 1.0) * (z - 2.0) / 6.0;
  s.w[1] = (z + 1.0) * (z - 1.0) * (z - 2.0) / 2.0;
  s.w[2] = -(z + 1.0) * z * (z - 2.0) / 2.0;
  s.w[3] = (z + 1.0) * z * (z - 1.0) / 6.0;
  s.dw[0] = -(3.0 * z * z - 6.0 * z + 2.0) / 6.0 / g.dr;
  s.dw[1] = (3.0 * z * z - 4.0 * z - 1.0) / 2.0 / g.dr;
  s.dw[2] = -(3.0 * z * z - 2.0 * z - 2.0) / 2.0 / g.dr;
  s.dw[3] = (3.0 * z * z - 1.0) / 6.0 / g.dr;
  return s;
}

struct PointSample {
  double v, eta, h, dv, dh;
};

inline std::optional<PointSample> sample_field(const FluidField& f, const PolytropicEos& eos,
                                               double r) {
  const auto st = cubic_stencil(f.grid, r);
  if (!st) return std::nullopt;
  PointSample p{0, 0, 0, 0, 0};
  const double gm1 = eos.gamma - 1.0;
  for (int k = 0; k < 4; ++k) {
    const int i = st->first + k;
    const double rho = f.rho[i];
    const double eta2 = rho == 1.0 ? 1.0 : std::exp(gm1 * std::log(rho));
    const double eta = std::sqrt(eta2);
    const double h = (eta2 - 1.0) / gm1;
    p.v += st->w[k] * f.v[i];
    p.eta += st->w[k] * eta;
    p.h += st->w[k] * h;
    p.dv += st->dw[k] * f.v[i];
    p.dh += st->dw[k] * h;
  }
  return p;
}

}  // namespace detail

/// Fields between two consecutive snapshots: cubic in r, linear in t.
class SnapshotPairSampler {
 public:
  SnapshotPairSampler(const FluidField& a, const FluidField& b, const PolytropicEos& eos)
      : a_(a), b_(b), eos_(eos) {
    if (!(b.t > a.t)) throw std::invalid_argument("snapshots must be in increasing time order");
  }

  std::optional<LocalState> at(double t, double r) const {
    const auto p = detail::sample_field(a_, eos_, r);
    const auto q = detail::sample_field(b_, eos_, r);
    if (!p || !q) return std::nullopt;
    const double span = b_.t - a_.t;
    const double th = std::clamp((t - a_.t) / span, 0.0, 1.0);
    auto mix = [th](double x, double y) { return (1.0 - th) * x + th * y; };
    return LocalState{mix(p->v, q->v),   mix(p->eta, q->eta), mix(p->h, q->h),
                      mix(p->dv, q->dv), mix(p->dh, q->dh),   (q->v - p->v) / span,
                      (q->h - p->h) / span};
  }

 private:
  const FluidField& a_;
  const FluidField& b_;
  const PolytropicEos& eos_;
};

/// Test hook: eta = 0 and v from the exact damped Burgers solution.
class BurgersSurrogateSampler {
 public:
  BurgersSurrogateSampler(const burgers::BurgersSeed& seed, const DampingProfile& p)
      : seed_(seed), p_(p) {}

  std::optional<LocalState> at(double t, double r) const {
    if (!seed_.domain().contains(r)) return std::nullopt;
    const double u = burgers::recover_label(seed_, p_, t, r);
    const double v = burgers::value_along_ray(seed_, p_, t, u);
    const auto g = burgers::spatial_gradient(seed_, p_, t, u);
    return LocalState{v, 0.0, 0.0, g.value, 0.0, 0.0, 0.0};
  }

 private:
  const burgers::BurgersSeed& seed_;
  const DampingProfile& p_;
};

enum class RayStatus { alive, collapsed, escaped };

inline const char* ray_status_name(RayStatus s) {
  switch (s) {
    case RayStatus::alive: return "alive";
    case RayStatus::collapsed: return "collapsed";
    case RayStatus::escaped: return "escaped";
  }
  return "unknown";
}

struct AcousticFan {
  std::vector<double> u_grid;
  std::vector<double> times;
  std::vector<std::vector<double>> X;       // [time][ray]; NaN once escaped
  std::vector<std::vector<double>> mu_jac;  // [time][ray]
  std::vector<std::vector<double>> mu_ode;  // [time][ray]; NaN when transport is off
  std::vector<RayStatus> status;
};

/// u_count rays with labels evenly spaced on [0, width].
inline std::vector<double> ray_labels(double width, int count) {
  if (count < 3) throw std::invalid_argument("a fan needs at least 3 rays");
  std::vector<double> u(count);
  for (int i = 0; i < count; ++i) u[i] = width * i / (count - 1);
  return u;
}

/// mu = -dX/du across the fan at one time; second-order three-point differences on the
/// (possibly nonuniform) labels, one-sided at the ends. Escaped rays are skipped.
inline std::vector<double> mu_jacobian(const std::vector<double>& u, const std::vector<double>& X) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (std::isfinite(X[i])) idx.push_back(i);
  }
  if (idx.size() < 3) throw InsufficientFan("fewer than 3 rays remain in the fan");
  std::vector<double> mu(X.size(), std::numeric_limits<double>::quiet_NaN());
  // Derivative at x0 of the parabola through (x0,y0),(x1,y1),(x2,y2).
  auto d3 = [](double x0, double x1, double x2, double y0, double y1, double y2) {
    const double h1 = x1 - x0;
    const double h2 = x2 - x0;
    return (y1 * h2 * h2 - y2 * h1 * h1 - y0 * (h2 * h2 - h1 * h1)) / (h1 * h2 * (h2 - h1));
  };
  const std::size_t n = idx.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t a, b, c;
    if (k == 0) {
      a = idx[0], b = idx[1], c = idx[2];
    } else if (k + 1 == n) {
      a = idx[n - 1], b = idx[n - 2], c = idx[n - 3];
    } else {
      a = idx[k], b = idx[k - 1], c = idx[k + 1];
    }
    mu[idx[k]] = -d3(u[a], u[b], u[c], X[a], X[b], X[c]);
  }
  return mu;
}

/// Per-time Jacobian mu for a whole fan.
inline std::vector<std::vector<double>> mu_jacobian(const AcousticFan& fan) {
  std::vector<std::vector<double>> out;
  out.reserve(fan.X.size());
  for (const auto& x : fan.X) out.push_back(mu_jacobian(fan.u_grid, x));
  return out;
}

/// Incremental ray tracer; rays are advanced between consecutive field samples.
class RayTracer {
 public:
  RayTracer(std::vector<double> u_grid, PolytropicEos eos, DampingProfile p, double t0,
            bool transport = true)
      : eos_(eos), p_(std::move(p)), transport_(transport), t_(t0) {
    if (u_grid.size() < 3) throw InsufficientFan("a fan needs at least 3 rays");
    if (!std::is_sorted(u_grid.begin(), u_grid.end()) ||
        std::adjacent_find(u_grid.begin(), u_grid.end()) != u_grid.end()) {
      throw std::invalid_argument("ray labels must be strictly increasing");
    }
    fan_.u_grid = std::move(u_grid);
    const std::size_t n = fan_.u_grid.size();
    fan_.status.assign(n, RayStatus::alive);
    x_.resize(n);
    mu_.assign(n, transport ? 1.0 : std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) x_[i] = 1.0 - fan_.u_grid[i];
    refresh_jacobian();
  }

  /// Advances every live ray from the current time to t1 with one RK4 step.
  template <class Sampler>
  void step(const Sampler& s, double t1) {
    const double t0 = t_;
    const double h = t1 - t0;
    if (!(h > 0.0)) throw std::invalid_argument("ray step must move forward in time");
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (fan_.status[i] == RayStatus::escaped) continue;
      const auto k1 = rhs(s, t0, x_[i], mu_[i]);
      const auto k2 = k1 ? rhs(s, t0 + 0.5 * h, x_[i] + 0.5 * h * k1->dx, mu_[i] + 0.5 * h * k1->dmu)
                         : std::nullopt;
      const auto k3 = k2 ? rhs(s, t0 + 0.5 * h, x_[i] + 0.5 * h * k2->dx, mu_[i] + 0.5 * h * k2->dmu)
                         : std::nullopt;
      const auto k4 = k3 ? rhs(s, t1, x_[i] + h * k3->dx, mu_[i] + h * k3->dmu) : std::nullopt;
      if (!k4) {
        fan_.status[i] = RayStatus::escaped;
        x_[i] = std::numeric_limits<double>::quiet_NaN();
        mu_[i] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      x_[i] += h / 6.0 * (k1->dx + 2.0 * k2->dx + 2.0 * k3->dx + k4->dx);
      if (transport_) mu_[i] += h / 6.0 * (k1->dmu + 2.0 * k2->dmu + 2.0 * k3->dmu + k4->dmu);
    }
    t_ = t1;
    refresh_jacobian();
  }

  /// Marks rays whose Jacobian mu fell to `threshold` or whose order inverted.
  void flag_collapse(double threshold) {
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (fan_.status[i] != RayStatus::alive) continue;
      bool inverted = false;
      if (i + 1 < x_.size() && std::isfinite(x_[i + 1])) inverted = x_[i + 1] >= x_[i];
      if (mu_jac_[i] <= threshold || inverted) fan_.status[i] = RayStatus::collapsed;
    }
  }

  void record() {
    fan_.times.push_back(t_);
    fan_.X.push_back(x_);
    fan_.mu_jac.push_back(mu_jac_);
    fan_.mu_ode.push_back(mu_);
  }

  double time() const { return t_; }
  const std::vector<double>& positions() const { return x_; }
  const std::vector<double>& jacobian_mu() const { return mu_jac_; }
  const std::vector<double>& transport_mu() const { return mu_; }
  const AcousticFan& fan() const { return fan_; }
  AcousticFan take_fan() { return std::move(fan_); }

 private:
  struct Rate {
    double dx;
    double dmu;
  };

  template <class Sampler>
  std::optional<Rate> rhs(const Sampler& s, double t, double x, double mu) const {
    const auto st = s.at(t, x);
    if (!st) return std::nullopt;
    Rate r{st->v + st->eta, 0.0};
    if (transport_) {
      const auto c = transport_coefficients(*st, eos_, p_.coefficient(t));
      r.dmu = mu * (c.m_over_mu + c.e);
    }
    return r;
  }

  void refresh_jacobian() { mu_jac_ = mu_jacobian(fan_.u_grid, x_); }

  PolytropicEos eos_;
  DampingProfile p_;
  bool transport_;
  double t_;
  AcousticFan fan_;
  std::vector<double> x_;
  std::vector<double> mu_;
  std::vector<double> mu_jac_;
};

/// Rays through a stored trajectory (snapshots in increasing time).
inline AcousticFan trace_rays(const std::vector<FluidField>& history, std::vector<double> u_grid,
                              const PolytropicEos& eos, const DampingProfile& p,
                              bool transport = true) {
  if (history.empty()) throw std::invalid_argument("empty trajectory");
  RayTracer tracer(std::move(u_grid), eos, p, history.front().t, transport);
  tracer.record();
  for (std::size_t k = 1; k < history.size(); ++k) {
    tracer.step(SnapshotPairSampler(history[k - 1], history[k], eos), history[k].t);
    tracer.record();
  }
  return tracer.take_fan();
}

struct MuReportOptions {
  double threshold = 0.01;
  /// Collapse extrapolation fits mu against ln(1+t) on the minimizing ray for mu in
  /// [fit_floor, fit_ceiling]; below fit_floor the captured front is grid-limited.
  double fit_floor = 0.2;
  double fit_ceiling = 0.5;
  /// Method comparison is restricted to mu_jac >= this.
  double compare_floor = 0.2;
};

struct MethodCollapse {
  std::optional<double> t_threshold;
  std::optional<double> t_extrapolated;
  std::size_t ray = 0;
};

struct MuReport {
  double threshold = 0.01;
  double t_max = 0.0;
  MethodCollapse jacobian;
  MethodCollapse transport;
  /// max |mu_jac - mu_ode| / mu_jac over samples with mu_jac >= compare_floor.
  double discrepancy = 0.0;
  double u_star = 0.0;
  double min_mu_jac = 1.0;
  double min_mu_ode = 1.0;
  bool collapsed() const { return jacobian.t_threshold.has_value(); }
};

namespace detail {

inline MethodCollapse collapse_for(const AcousticFan& fan,
                                   const std::vector<std::vector<double>>& mu,
                                   const MuReportOptions& opt) {
  MethodCollapse out;
  std::optional<std::pair<double, double>> prev;  // (t, min mu)
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    double lo = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < mu[k].size(); ++i) {
      if (std::isfinite(mu[k][i]) && mu[k][i] < lo) {
        lo = mu[k][i];
        arg = i;
      }
    }
    if (!std::isfinite(lo)) continue;
    if (lo < best) {
      best = lo;
      out.ray = arg;
    }
    if (!out.t_threshold && lo <= opt.threshold) {
      if (prev) {
        const auto [t0, m0] = *prev;
        out.t_threshold = t0 + (fan.times[k] - t0) * (m0 - opt.threshold) / (m0 - lo);
      } else {
        out.t_threshold = fan.times[k];
      }
      out.ray = arg;
      break;
    }
    prev = {fan.times[k], lo};
  }
  // Least squares mu = alpha + beta ln(1+t).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double m = mu[k][out.ray];
    if (!std::isfinite(m) || m < opt.fit_floor || m > opt.fit_ceiling) continue;
    const double x = std::log1p(fan.times[k]);
    sx += x, sy += m, sxx += x * x, sxy += x * m;
    ++n;
  }
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    const double beta = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    if (beta < 0.0) {
      const double alpha = (sy - beta * sx) / n;
      out.t_extrapolated = std::expm1(-alpha / beta);
    }
  }
  return out;
}

}  // namespace detail

/// First threshold crossings per method, extrapolated zeros, and the method gap.
inline MuReport detect_collapse(const AcousticFan& fan, const MuReportOptions& opt = {}) {
  MuReport r;
  r.threshold = opt.threshold;
  r.t_max = fan.times.empty() ? 0.0 : fan.times.back();
  if (fan.times.empty()) return r;
  r.jacobian = detail::collapse_for(fan, fan.mu_jac, opt);
  const bool has_ode = std::any_of(fan.mu_ode.begin(), fan.mu_ode.end(), [](const auto& row) {
    return std::any_of(row.begin(), row.end(), [](double x) { return std::isfinite(x); });
  });
  if (has_ode) r.transport = detail::collapse_for(fan, fan.mu_ode, opt);
  r.u_star = fan.u_grid[r.jacobian.ray];
  for (std::size_t k = 0; k < fan.times.size(); ++k) {
    for (std::size_t i = 0; i < fan.u_grid.size(); ++i) {
      const double j = fan.mu_jac[k][i];
      const double o = fan.mu_ode[k][i];
      if (std::isfinite(j)) r.min_mu_jac = std::min(r.min_mu_jac, j);
      if (std::isfinite(o)) r.min_mu_ode = std::min(r.min_mu_ode, o);
      if (std::isfinite(j) && std::isfinite(o) && j >= opt.compare_floor) {
        r.discrepancy = std::max(r.discrepancy, std::abs(j - o) / j);
      }
    }
  }
  return r;
}

/// Step observer that traces the fan alongside a solver run and stops it once min mu_jac
/// reaches the threshold. Samples are kept every `record_every` steps, and every step once
/// min mu_jac is below `dense_below`.
class AcousticMonitor {
 public:
  AcousticMonitor(std::vector<double> u_grid, PolytropicEos eos, DampingProfile p,
                  double threshold = 0.01, int record_every = 4, bool stop_on_collapse = true,
                  double dense_below = 0.15)
      : u_grid_(std::move(u_grid)),
        eos_(eos),
        p_(std::move(p)),
        threshold_(threshold),
        dense_below_(dense_below),
        every_(std::max(1, record_every)),
        stop_(stop_on_collapse) {}

  bool operator()(const FluidField& f) {
    if (!tracer_) {
      tracer_.emplace(u_grid_, eos_, p_, f.t, true);
      tracer_->record();
      prev_ = f;
      return true;
    }
    tracer_->step(SnapshotPairSampler(*prev_, f, eos_), f.t);
    ++steps_;
    prev_ = f;
    const double lo = min_alive(tracer_->jacobian_mu());
    if (lo <= threshold_) collapsed_ = true;
    if (steps_ % every_ == 0 || lo <= dense_below_ || collapsed_) tracer_->record();
    return !(stop_ && collapsed_);
  }

  /// Records the current state unless it is already the last sample.
  void finish() {
    if (tracer_ && (tracer_->fan().times.empty() || tracer_->fan().times.back() != tracer_->time())) {
      tracer_->record();
    }
  }

  bool collapsed() const { return collapsed_; }
  const AcousticFan& fan() const {
    if (!tracer_) throw std::logic_error("acoustic monitor has not observed any field");
    return tracer_->fan();
  }

 private:
  static double min_alive(const std::vector<double>& mu) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : mu) {
      if (std::isfinite(x)) m = std::min(m, x);
    }
    return m;
  }

  std::vector<double> u_grid_;
  PolytropicEos eos_;
  DampingProfile p_;
  double threshold_;
  double dense_below_;
  int every_;
  bool stop_;
  std::optional<RayTracer> tracer_;
  std::optional<FluidField> prev_;
  long steps_ = 0;
  bool collapsed_ = false;
};

/// CSV `t,u,mu_jac,mu_ode`.
inline std::string mu_history_csv(const AcousticFan& fan) {
  io::CsvWriter w({"t", "u", "mu_jac", "mu_ode"});
  for (std::size_t k = 0; k < fan.times.size(); ++k) {
    for (std::size_t i = 0; i < fan.u_grid.size(); ++i) {
      w.row({fan.times[k], fan.u_grid[i], fan.mu_jac[k][i], fan.mu_ode[k][i]});
    }
  }
  return w.str();
}

}  // namespace shockline
