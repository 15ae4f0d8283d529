#pragma once

/**
 * @file euler_radial.hpp
 * @brief Finite-volume solver for radially symmetric isentropic Euler with damping.
 *
 * Conservative variables (rho, rho v) on a uniform cell-centred grid:
 *
 *     d_t rho     + d_r (rho v)       = -g (2/r) rho v
 *     d_t (rho v) + d_r (rho v^2 + p) = -g (2/r) rho v^2 - a w(t) rho v
 *
 * with g = 1 (spherical) or 0 (planar). MUSCL/minmod reconstruction of (rho, v), HLL
 * fluxes and SSP-RK2 in time; the source terms are Strang-split and integrated exactly.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shockline/damping.hpp"
#include "shockline/eos.hpp"
#include "shockline/io.hpp"
#include "shockline/seeds.hpp"

namespace shockline {

enum class Geometry { spherical, planar };

inline const char* geometry_name(Geometry g) {
  return g == Geometry::spherical ? "spherical" : "planar";
}

struct Grid {
  double r_in = 0.0;
  double dr = 0.0;
  int cells = 0;

  static Grid span(double r_in, double r_out, int cells) {
    if (cells < 3) throw std::invalid_argument("grid needs at least 3 cells");
    if (!(r_out > r_in)) throw std::invalid_argument("grid must satisfy r_out > r_in");
    return Grid{r_in, (r_out - r_in) / cells, cells};
  }

  double center(int i) const { return r_in + (i + 0.5) * dr; }
  double r_out() const { return r_in + cells * dr; }
};

struct FluidField {
  Grid grid;
  std::vector<double> rho;
  std::vector<double> v;
  double t = 0.0;

  static FluidField quiescent(const Grid& g, double t = 0.0) {
    return FluidField{g, std::vector<double>(g.cells, 1.0), std::vector<double>(g.cells, 0.0), t};
  }
};

struct SolverOptions {
  Geometry geometry = Geometry::spherical;
  double cfl = 0.45;
  /// Stop once max|d_r v| * dr exceeds this.
  double gradient_limit = 0.5;
  /// Shift the grid with the outgoing pulse instead of resolving the whole light cone.
  bool comoving = false;
  /// Cadence (in steps) of the recorded gradient history.
  int history_every = 10;
  /// Directory for the state dump written on failure.
  std::filesystem::path dump_dir = ".";
};

/// Step failure (non-positive or non-finite density); carries the state dump path.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, std::filesystem::path dump)
      : std::runtime_error(what + " (state dump: " + dump.string() + ")"), dump_(std::move(dump)) {}
  const std::filesystem::path& dump_path() const { return dump_; }

 private:
  std::filesystem::path dump_;
};

class InvalidSeed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string snapshot_csv(const FluidField& f, const PolytropicEos& eos) {
  io::CsvWriter w({"t", "r", "rho", "v", "h", "eta"});
  for (int i = 0; i < f.grid.cells; ++i) {
    w.row({f.t, f.grid.center(i), f.rho[i], f.v[i], eos.enthalpy(f.rho[i]), eos.sound_speed(f.rho[i])});
  }
  return w.str();
}

inline void write_snapshot(const std::filesystem::path& path, const FluidField& f,
                           const PolytropicEos& eos) {
  io::write_text(path, snapshot_csv(f, eos));
}

/// Short-pulse annulus data on [1 - delta, 1]; quiescent elsewhere.
inline FluidField build_short_pulse(const ShortPulseSpec& spec, const PolytropicEos& eos,
                                    const DampingProfile& p, const Grid& grid) {
  const double delta = spec.delta();
  if (!(grid.r_in > 0.0) || grid.r_in >= 1.0 - delta || grid.r_out() <= 1.0) {
    throw std::invalid_argument("grid must satisfy 0 < r_in < 1 - delta and r_out > 1");
  }
  const double d32 = std::pow(delta, 1.5);
  const double d52 = std::pow(delta, 2.5);
  const double a0 = p.coefficient(0.0);
  FluidField f = FluidField::quiescent(grid);
  for (int i = 0; i < grid.cells; ++i) {
    const double r = grid.center(i);
    if (r < 1.0 - delta || r > 1.0) continue;
    const double s = (1.0 - r) / delta;
    const double phi = d52 * spec.phi0(s);
    const double phi_t = d32 * spec.phi1(s);
    const double phi_r = -d32 * spec.phi1(s);
    const double h = phi_t - 0.5 * phi_r * phi_r + a0 * phi;
    if (h <= -1.0 / (eos.gamma - 1.0)) {
      throw InvalidSeed("pulse seed '" + spec.seed().name + "' reaches vacuum at r = " +
                        io::format_double(r));
    }
    f.rho[i] = eos.density_from_enthalpy(h);
    f.v[i] = -phi_r;
  }
  return f;
}

inline double max_signal_speed(const FluidField& f, const PolytropicEos& eos) {
  double s = 0.0;
  for (int i = 0; i < f.grid.cells; ++i) s = std::max(s, std::abs(f.v[i]) + eos.sound_speed(f.rho[i]));
  return s;
}

inline double stable_dt(const FluidField& f, const PolytropicEos& eos, double cfl) {
  return cfl * f.grid.dr / max_signal_speed(f, eos);
}

namespace detail {

inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

// -d_r F for the planar flux; zero-gradient ghosts, two per side.
inline void flux_divergence(const std::vector<double>& rho, const std::vector<double>& mom,
                            double dr, const PolytropicEos& eos, std::vector<double>& d_rho,
                            std::vector<double>& d_mom) {
  const int n = static_cast<int>(rho.size());
  constexpr int G = 2;
  std::vector<double> pr(n + 2 * G), pv(n + 2 * G);
  for (int i = 0; i < n + 2 * G; ++i) {
    const int j = std::clamp(i - G, 0, n - 1);
    pr[i] = rho[j];
    pv[i] = mom[j] / rho[j];
  }
  // Faces k = 0..n sit between padded cells k + G - 1 and k + G.
  std::vector<double> f_rho(n + 1), f_mom(n + 1);
  const double gm1 = eos.gamma - 1.0;
  auto slope = [&](const std::vector<double>& q, int i) {
    return minmod(q[i] - q[i - 1], q[i + 1] - q[i]);
  };
  for (int k = 0; k <= n; ++k) {
    const int l = k + G - 1;
    const int r = k + G;
    const double rl = pr[l] + 0.5 * slope(pr, l);
    const double vl = pv[l] + 0.5 * slope(pv, l);
    const double rr = pr[r] - 0.5 * slope(pr, r);
    const double vr = pv[r] - 0.5 * slope(pv, r);
    if (rl == rr && vl == vr) {
      f_rho[k] = rl * vl;
      f_mom[k] = rl * vl * vl + eos.pressure(rl);
      continue;
    }
    const double c2l = std::exp(gm1 * std::log(rl));
    const double c2r = std::exp(gm1 * std::log(rr));
    const double cl = std::sqrt(c2l);
    const double cr = std::sqrt(c2r);
    const double pl = rl * c2l / eos.gamma;
    const double prr = rr * c2r / eos.gamma;
    const double sl = std::min(vl - cl, vr - cr);
    const double sr = std::max(vl + cl, vr + cr);
    const double fl0 = rl * vl;
    const double fl1 = rl * vl * vl + pl;
    const double fr0 = rr * vr;
    const double fr1 = rr * vr * vr + prr;
    if (sl >= 0.0) {
      f_rho[k] = fl0;
      f_mom[k] = fl1;
    } else if (sr <= 0.0) {
      f_rho[k] = fr0;
      f_mom[k] = fr1;
    } else {
      const double inv = 1.0 / (sr - sl);
      f_rho[k] = (sr * fl0 - sl * fr0 + sl * sr * (rr - rl)) * inv;
      f_mom[k] = (sr * fl1 - sl * fr1 + sl * sr * (rr * vr - rl * vl)) * inv;
    }
  }
  d_rho.resize(n);
  d_mom.resize(n);
  for (int i = 0; i < n; ++i) {
    d_rho[i] = -(f_rho[i + 1] - f_rho[i]) / dr;
    d_mom[i] = -(f_mom[i + 1] - f_mom[i]) / dr;
  }
}

// A(t0) / A(t1) without forming either factor.
inline double damping_ratio(const DampingProfile& p, double t0, double t1) {
  if (p.strength() == 0.0 || t0 == t1) return 1.0;
  if (!p.has_custom_weight()) {
    const double e = 1.0 - p.decay_exponent();
    return std::exp(p.exponent_scale() * (std::pow(1.0 + t1, e) - std::pow(1.0 + t0, e)));
  }
  return p.accumulated_factor(t0) / p.accumulated_factor(t1);
}

// Exact flow of the pointwise source ODE over [t0, t0 + dt]:
// v(t) = v0 A(t0)/A(t), rho(t) = rho0 exp(-g (2/r) v0 A(t0) int_{t0}^{t} ds/A).
inline void source_step(FluidField& f, const DampingProfile& p, Geometry geometry, double t0,
                        double dt) {
  const double r_mid = damping_ratio(p, t0, t0 + 0.5 * dt);
  const double r_end = damping_ratio(p, t0, t0 + dt);
  const double J = dt / 6.0 * (1.0 + 4.0 * r_mid + r_end);
  const bool spherical = geometry == Geometry::spherical;
  for (int i = 0; i < f.grid.cells; ++i) {
    const double v0 = f.v[i];
    if (v0 == 0.0) continue;
    if (spherical) f.rho[i] *= std::exp(-2.0 / f.grid.center(i) * v0 * J);
    f.v[i] = v0 * r_end;
  }
}

inline std::filesystem::path dump_failure(const FluidField& f, const PolytropicEos& eos,
                                          const SolverOptions& opt) {
  const auto path = opt.dump_dir / ("failure_t" + io::format_double(f.t) + ".csv");
  try {
    write_snapshot(path, f, eos);
  } catch (const std::exception&) {
    return path.string() + " (unwritable)";
  }
  return path;
}

}  // namespace detail

/// One Strang-split step: half source, SSP-RK2 transport, half source.
inline FluidField advance(const FluidField& field, const PolytropicEos& eos,
                          const DampingProfile& p, double dt, const SolverOptions& opt = {}) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const double limit = stable_dt(field, eos, opt.cfl);
  if (dt > limit * (1.0 + 1e-12)) {
    throw std::invalid_argument("time step " + io::format_double(dt) + " violates CFL bound " +
                                io::format_double(limit));
  }
  FluidField f = field;
  detail::source_step(f, p, opt.geometry, f.t, 0.5 * dt);

  const int n = f.grid.cells;
  std::vector<double> m0(n), r1(n), m1(n), d_rho, d_mom;
  for (int i = 0; i < n; ++i) m0[i] = f.rho[i] * f.v[i];
  detail::flux_divergence(f.rho, m0, f.grid.dr, eos, d_rho, d_mom);
  for (int i = 0; i < n; ++i) {
    r1[i] = f.rho[i] + dt * d_rho[i];
    m1[i] = m0[i] + dt * d_mom[i];
  }
  bool ok = std::all_of(r1.begin(), r1.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
  if (ok) {
    detail::flux_divergence(r1, m1, f.grid.dr, eos, d_rho, d_mom);
    for (int i = 0; i < n; ++i) {
      const double rho = 0.5 * (f.rho[i] + r1[i] + dt * d_rho[i]);
      const double mom = 0.5 * (m0[i] + m1[i] + dt * d_mom[i]);
      if (!(rho > 0.0) || !std::isfinite(rho) || !std::isfinite(mom)) {
        ok = false;
        break;
      }
      f.rho[i] = rho;
      f.v[i] = mom / rho;
    }
  }
  if (!ok) {
    throw SolverFailure("non-positive density at t = " + io::format_double(field.t),
                        detail::dump_failure(field, eos, opt));
  }
  detail::source_step(f, p, opt.geometry, f.t + 0.5 * dt, 0.5 * dt);
  f.t = field.t + dt;
  return f;
}

struct GradientReport {
  double max_dv = 0.0;
  double max_drho = 0.0;
  double r_dv = 0.0;
  double r_drho = 0.0;
};

/// Central-difference gradients over interior cells; locations are cell centres.
inline GradientReport gradient_monitor(const FluidField& f) {
  const int n = f.grid.cells;
  if (n < 3) throw std::invalid_argument("gradient monitor needs at least 3 cells");
  GradientReport g;
  g.r_dv = g.r_drho = f.grid.center(1);
  const double inv = 1.0 / (2.0 * f.grid.dr);
  for (int i = 1; i + 1 < n; ++i) {
    const double dv = std::abs(f.v[i + 1] - f.v[i - 1]) * inv;
    const double drho = std::abs(f.rho[i + 1] - f.rho[i - 1]) * inv;
    if (dv > g.max_dv) {
      g.max_dv = dv;
      g.r_dv = f.grid.center(i);
    }
    if (drho > g.max_drho) {
      g.max_drho = drho;
      g.r_drho = f.grid.center(i);
    }
  }
  return g;
}

/// Shifts the grid right by a quarter of its width once the disturbance front enters the
/// last eighth. Dropped cells are trailing flow; appended cells are quiescent.
inline bool recenter_window(FluidField& f, double tol = 1e-10) {
  const int n = f.grid.cells;
  const int guard = std::max(4, n / 8);
  bool disturbed = false;
  for (int i = n - guard; i < n && !disturbed; ++i) {
    disturbed = std::abs(f.rho[i] - 1.0) > tol || std::abs(f.v[i]) > tol;
  }
  if (!disturbed) return false;
  const int k = std::max(1, n / 4);
  f.rho.erase(f.rho.begin(), f.rho.begin() + k);
  f.v.erase(f.v.begin(), f.v.begin() + k);
  f.rho.insert(f.rho.end(), k, 1.0);
  f.v.insert(f.v.end(), k, 0.0);
  f.grid.r_in += k * f.grid.dr;
  return true;
}

enum class StopReason { t_max, gradient, monitor };

inline const char* stop_reason_name(StopReason s) {
  switch (s) {
    case StopReason::t_max: return "t_max";
    case StopReason::gradient: return "gradient";
    case StopReason::monitor: return "monitor";
  }
  return "unknown";
}

struct GradientSample {
  double t = 0.0;
  GradientReport report;
};

struct RunResult {
  FluidField field;
  StopReason reason = StopReason::t_max;
  long steps = 0;
  /// Largest max|d_r v| over every accepted step, including the initial field.
  double peak_dv = 0.0;
  std::vector<GradientSample> gradient_history;
};

/// Called with the initial field and after every step; returning false stops the run.
using StepObserver = std::function<bool(const FluidField&)>;

inline RunResult run_until(const FluidField& initial, const PolytropicEos& eos,
                           const DampingProfile& p, double t_max, const SolverOptions& opt = {},
                           const std::vector<StepObserver>& observers = {}) {
  if (!(t_max >= initial.t)) throw std::invalid_argument("t_max precedes the field time");
  RunResult res{initial, StopReason::t_max, 0, 0.0, {}};
  if (t_max == initial.t) return res;

  auto observe = [&](const FluidField& f) {
    bool go = true;
    for (const auto& o : observers) go = o(f) && go;
    return go;
  };
  auto record = [&](const FluidField& f, const GradientReport& g) {
    res.gradient_history.push_back({f.t, g});
  };

  FluidField& f = res.field;
  GradientReport g = gradient_monitor(f);
  res.peak_dv = g.max_dv;
  record(f, g);
  if (!observe(f)) {
    res.reason = StopReason::monitor;
    return res;
  }
  const double t_tol = 1e-12 * std::max(1.0, t_max);
  while (f.t < t_max - t_tol) {
    double dt = stable_dt(f, eos, opt.cfl);
    if (f.t + dt > t_max - t_tol) dt = t_max - f.t;
    f = advance(f, eos, p, dt, opt);
    if (t_max - f.t <= t_tol) f.t = t_max;
    ++res.steps;
    if (opt.comoving) recenter_window(f);
    g = gradient_monitor(f);
    res.peak_dv = std::max(res.peak_dv, g.max_dv);
    const bool blown = g.max_dv * f.grid.dr > opt.gradient_limit;
    const bool done = f.t >= t_max;
    if (res.steps % std::max(1, opt.history_every) == 0 || blown || done) record(f, g);
    if (!observe(f)) {
      res.reason = StopReason::monitor;
      return res;
    }
    if (blown) {
      res.reason = StopReason::gradient;
      return res;
    }
  }
  return res;
}

}  // namespace shockline
