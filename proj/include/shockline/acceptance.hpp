#pragma once

/**
 * @file acceptance.hpp
 * @brief The acceptance suite: one verdict per criterion, artifacts under a directory, and a
 * byte-for-byte reproducibility check across two complete runs.
 */

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <cstdio>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "shockline/harness.hpp"
#include "shockline/riemann_exact.hpp"

namespace shockline::acceptance {

namespace fs = std::filesystem;

struct Tolerances {
  double b1_relative = 1e-6;
  double b1_undamped = 1e-9;
  double b1_seconds_per_cell = 1.0;
  double m_relative_gap = 0.05;
  double m_floor = 0.2;
  double s_spread = 0.25;
  double s_margin = 0.25;
  double s_seconds = 600.0;
  double g_min_mu = 0.5;
  double g_gradient_factor = 2.0;
  double c_l1 = 0.02;
  double c_ratio = 1.5;
  double a_match = 1e-12;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  /// Deterministic one-line summary of the measured values.
  std::string detail;
  json data;
  double seconds = 0.0;
};

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

template <class F>
CriterionResult timed(F&& body) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = body();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline RunConfig euler_config(double gamma, double delta, double a, const std::string& seed,
                              double slope) {
  RunConfig c;
  c.mode = "euler";
  c.damping = {a, 2.0, "power", 1.0};
  c.seed = {seed, delta, slope, 1.0};
  c.eos = {"polytropic", gamma};
  return c;
}

}  // namespace detail

inline CriterionResult criterion_b1(const fs::path& dir, const Tolerances& tol) {
  CriterionResult r{"B1", "Burgers exactness", true, "", json::object(), 0.0};
  io::CsvWriter csv({"a", "lambda", "t_root", "t_fan", "rel_err"});
  double worst = 0.0, undamped = 0.0, slowest = 0.0;
  for (double a : {0.0, 1.0, -0.5}) {
    for (double lambda : {2.0, 3.0}) {
      const auto start = std::chrono::steady_clock::now();
      RunConfig cfg;
      cfg.mode = "burgers";
      cfg.damping = {a, lambda, "power", 1.0};
      cfg.seed = {"linear-ramp", 0.25, -1.0, 1.0};
      const BurgersOutcome out = burgers_core(cfg);
      if (!out.t_star || !out.t_crossing) {
        r.passed = false;
        continue;
      }
      const double err = std::abs(*out.t_crossing - *out.t_star) / *out.t_star;
      worst = std::max(worst, err);
      if (a == 0.0) undamped = std::max(undamped, std::abs(*out.t_star - 1.0));
      csv.row({a, lambda, *out.t_star, *out.t_crossing, err});
      slowest = std::max(slowest,
                         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
  }
  csv.save(dir / "B1_burgers_exactness.csv");
  r.passed = r.passed && worst <= tol.b1_relative && undamped <= tol.b1_undamped &&
             slowest <= tol.b1_seconds_per_cell;
  r.detail = "max rel err " + detail::sci(worst) + " (tol " + detail::sci(tol.b1_relative) +
             "), undamped |T*-1| " + detail::sci(undamped) + " (tol " + detail::sci(tol.b1_undamped) + ")";
  r.data = {{"max_relative_error", worst}, {"undamped_error", undamped}};
  return r;
}

inline CriterionResult criterion_b2(const fs::path& dir, const Tolerances&) {
  CriterionResult r{"B2", "Burgers bracket", true, "", json::object(), 0.0};
  io::CsvWriter csv({"a", "lambda", "t_star", "lower", "upper"});
  int cells = 0, inside = 0;
  const auto seed = burgers::linear_ramp(1.0);
  for (double a : {0.0, 1.0, -0.5, -0.25, 0.5}) {
    for (double lambda : {1.6, 2.0, 3.0, 5.0}) {
      const auto p = DampingProfile::power_law(a, lambda);
      const auto cls = burgers::shock_time(seed, p);
      const auto* s = std::get_if<Shock>(&cls);
      const CBounds b = p.c_bounds();
      const double c = seed.compression();
      ++cells;
      const bool ok = s && s->t_star >= b.lower / c && s->t_star <= b.upper / c;
      inside += ok;
      csv.row({a, lambda, s ? s->t_star : NAN, b.lower / c, b.upper / c});
    }
  }
  csv.save(dir / "B2_bracket.csv");
  r.passed = inside == cells;
  r.detail = std::to_string(inside) + "/" + std::to_string(cells) + " lifespans inside [e^-beta/c, e^beta/c]";
  r.data = {{"cells", cells}, {"inside", inside}};
  return r;
}

inline CriterionResult criterion_b3(const fs::path& dir, const Tolerances&) {
  CriterionResult r{"B3", "Damping shift", true, "", json::object(), 0.0};
  RunConfig cfg;
  cfg.mode = "sweep";
  cfg.seed = {"linear-ramp", 0.25, -1.0, 1.0};
  cfg.sweep.model = "burgers";
  cfg.sweep.a = {-0.5, -0.25, 0.0, 0.5, 1.0};
  cfg.sweep.lambda = {2.0};
  const auto along_a = sweep_core(cfg, dir);
  cfg.damping.a = 1.0;
  cfg.sweep.a = {1.0};
  cfg.sweep.lambda = {1.6, 2.0, 3.0, 5.0};
  const auto along_l = sweep_core(cfg, dir);

  io::CsvWriter csv({"a", "lambda", "t_star"});
  bool inc = true, toward = true;
  for (std::size_t k = 0; k < along_a.cells.size(); ++k) {
    const auto& c = along_a.cells[k];
    csv.row({c.a, c.lambda, c.t_star.value_or(NAN)});
    if (!c.t_star || (k > 0 && !(*c.t_star > *along_a.cells[k - 1].t_star))) inc = false;
  }
  for (std::size_t k = 0; k < along_l.cells.size(); ++k) {
    const auto& c = along_l.cells[k];
    csv.row({c.a, c.lambda, c.t_star.value_or(NAN)});
    if (!c.t_star ||
        (k > 0 && !(std::abs(*c.t_star - 1.0) < std::abs(*along_l.cells[k - 1].t_star - 1.0)))) {
      toward = false;
    }
  }
  csv.save(dir / "B3_damping_shift.csv");
  r.passed = inc && toward;
  r.detail = std::string("T*(a) ") + (inc ? "strictly increasing" : "NOT increasing") +
             ", |T*(lambda)-1| " + (toward ? "strictly decreasing" : "NOT decreasing");
  r.data = {{"increasing_in_a", inc}, {"approaching_in_lambda", toward}};
  return r;
}

inline CriterionResult criterion_m(const fs::path& dir, const Tolerances& tol) {
  CriterionResult r{"M", "Dual-method mu", true, "", json::object(), 0.0};
  double worst = 0.0;
  json runs = json::array();
  for (double a : {0.0, 1.0}) {
    RunConfig cfg = detail::euler_config(1.4, 0.25, a, "sine", -1.0);
    cfg.grid.cells = 4096;
    cfg.t_max = std::exp(2.0);
    cfg.acoustic.stop_below = 0.15;
    const EulerOutcome e = euler_core(cfg, dir);
    MuReportOptions mo;
    mo.compare_floor = tol.m_floor;
    const MuReport rep = detect_collapse(e.fan, mo);
    worst = std::max(worst, rep.discrepancy);
    const std::string tag = a == 0.0 ? "a0" : "a1";
    io::write_text(dir / ("M_mu_history_" + tag + ".csv"), mu_history_csv(e.fan));
    runs.push_back({{"a", a},
                    {"discrepancy", rep.discrepancy},
                    {"min_mu_jac", rep.min_mu_jac},
                    {"t_end", e.run.field.t}});
    if (!(rep.min_mu_jac < 1.0)) r.passed = false;
  }
  r.passed = r.passed && worst <= tol.m_relative_gap;
  r.detail = "max |mu_jac - mu_ode|/mu_jac " + detail::sci(worst) + " where mu_jac >= " +
             detail::sci(tol.m_floor) + " (tol " + detail::sci(tol.m_relative_gap) + ")";
  r.data = {{"max_relative_gap", worst}, {"runs", runs}};
  return r;
}

inline CriterionResult criterion_s(const fs::path& dir, const Tolerances& tol) {
  CriterionResult r{"S", "Lifespan scaling", true, "", json::object(), 0.0};
  const auto start = std::chrono::steady_clock::now();
  io::CsvWriter csv({"delta", "a", "t_collapse", "scaled", "lower", "upper"});
  std::vector<double> undamped;
  bool contained = true;
  json rows = json::array();
  constexpr double slope = -1.0;
  for (double a : {0.0, 1.0}) {
    for (double delta : {0.4, 0.2, 0.1}) {
      // gamma = 3 makes (gamma + 1)/2 = 2, the constant of the closed-form lifespan.
      RunConfig cfg = detail::euler_config(3.0, delta, a, "sine", slope);
      cfg.grid.comoving = true;
      cfg.grid.cells = 1024;
      cfg.t_max = 200.0;
      cfg.acoustic.stop_below = 0.15;
      const EulerOutcome e = euler_core(cfg, dir);
      const double t = e.mu.jacobian.t_extrapolated.value_or(NAN);
      const double scaled = std::sqrt(delta) * std::log1p(t);
      const CBounds c = DampingProfile::power_law(a, 2.0).c_bounds();
      const double lo = c.lower / (2.0 * std::abs(slope));
      const double hi = c.upper / (2.0 * std::abs(slope));
      const bool in = scaled >= (1.0 - tol.s_margin) * lo && scaled <= (1.0 + tol.s_margin) * hi;
      contained = contained && in;
      if (a == 0.0) undamped.push_back(scaled);
      csv.row({delta, a, t, scaled, lo, hi});
      rows.push_back({{"delta", delta}, {"a", a}, {"t_collapse", num(t)}, {"scaled", num(scaled)}, {"inside", in}});
    }
  }
  csv.save(dir / "S_lifespan_scaling.csv");
  double mean = 0.0;
  for (double x : undamped) mean += x / undamped.size();
  double spread = 0.0;
  for (double x : undamped) spread = std::max(spread, std::abs(x - mean) / mean);
  if (!std::isfinite(spread)) spread = INFINITY;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = spread <= tol.s_spread && contained && secs <= tol.s_seconds;
  r.detail = "sqrt(delta) ln(1+T) spread " + detail::sci(spread) + " (tol " + detail::sci(tol.s_spread) +
             "), all inside margin-widened interval: " + (contained ? "yes" : "no");
  r.data = {{"spread", num(spread)}, {"contained", contained}, {"runs", rows}};
  return r;
}

inline CriterionResult criterion_g(const fs::path& dir, const Tolerances& tol) {
  CriterionResult r{"G", "Global case", true, "", json::object(), 0.0};
  RunConfig cfg = detail::euler_config(1.4, 0.2, 1.0, "front-ramp", 1.0);
  cfg.grid.comoving = true;
  cfg.grid.cells = 512;
  cfg.t_max = 50.0;
  cfg.acoustic.record_every = 50;
  const EulerOutcome e = euler_core(cfg, dir);
  const double g0 = e.initial_gradient.max_dv;
  const bool reached = e.run.reason == StopReason::t_max && e.run.field.t == 50.0;
  const double ratio = e.run.peak_dv / g0;
  r.passed = reached && e.mu.min_mu_jac >= tol.g_min_mu && ratio <= tol.g_gradient_factor;
  io::CsvWriter g({"t", "max_dv"});
  for (const auto& s : e.run.gradient_history) g.row({s.t, s.report.max_dv});
  g.save(dir / "G_gradient_history.csv");
  r.detail = "t_end " + detail::sci(e.run.field.t) + ", min mu " + detail::sci(e.mu.min_mu_jac) +
             " (>= " + detail::sci(tol.g_min_mu) + "), peak/initial max|d_r v| " + detail::sci(ratio) +
             " (<= " + detail::sci(tol.g_gradient_factor) + ")";
  r.data = {{"t_end", e.run.field.t},
            {"min_mu_jac", e.mu.min_mu_jac},
            {"min_mu_ode", e.mu.min_mu_ode},
            {"gradient_ratio", ratio}};
  return r;
}

/// Relative L1 density error of the planar Sod-type problem at t = 0.1.
inline double sod_error(int cells) {
  const PolytropicEos eos{1.4};
  const Grid g = Grid::span(0.0, 1.0, cells);
  FluidField f = FluidField::quiescent(g);
  for (int i = 0; i < cells; ++i) f.rho[i] = g.center(i) < 0.5 ? 1.0 : 0.125;
  SolverOptions opt;
  opt.geometry = Geometry::planar;
  const auto res = run_until(f, eos, DampingProfile::power_law(0.0, 2.0), 0.1, opt);
  const IsentropicRiemann exact({1.0, 0.0}, {0.125, 0.0}, eos);
  double err = 0.0, norm = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double ref = exact.sample((g.center(i) - 0.5) / 0.1).rho;
    err += std::abs(res.field.rho[i] - ref);
    norm += ref;
  }
  return err / norm;
}

inline CriterionResult criterion_c(const fs::path& dir, const Tolerances& tol) {
  CriterionResult r{"C", "Solver convergence", true, "", json::object(), 0.0};
  const double e512 = sod_error(512), e1024 = sod_error(1024), e4096 = sod_error(4096);
  io::CsvWriter csv({"cells", "l1_relative"});
  csv.row({512, e512});
  csv.row({1024, e1024});
  csv.row({4096, e4096});
  csv.save(dir / "C_sod_convergence.csv");
  const double ratio = e512 / e1024;
  r.passed = e4096 <= tol.c_l1 && ratio >= tol.c_ratio;
  r.detail = "L1 error at 4096 cells " + detail::sci(e4096) + " (tol " + detail::sci(tol.c_l1) +
             "), 512->1024 ratio " + detail::sci(ratio) + " (>= " + detail::sci(tol.c_ratio) + ")";
  r.data = {{"l1_4096", e4096}, {"ratio_512_1024", ratio}};
  return r;
}

inline CriterionResult criterion_a(const fs::path& dir, const Tolerances& tol) {
  CriterionResult r{"A", "Asymptote consistency", true, "", json::object(), 0.0};
  const auto p = DampingProfile::power_law(0.0, 2.0);
  io::CsvWriter csv({"delta", "slope", "asymptote_zero", "t_star", "rel_diff"});
  double worst = 0.0;
  for (double delta : {0.25, 0.1, 0.4}) {
    for (double slope : {-1.0, -2.0}) {
      const ShockInterval iv = t_star_interval(delta, slope, p);
      const auto z = bisect_root([&](double t) { return mu_asymptote(t, delta, slope, 1.0); }, 0.0,
                                 2.0 * iv.upper + 1.0, 1e-16, 400);
      const double diff = std::abs(z.root - iv.lower) / iv.lower;
      worst = std::max({worst, diff, iv.upper != iv.lower ? INFINITY : 0.0});
      csv.row({delta, slope, z.root, iv.lower, diff});
    }
  }
  csv.save(dir / "A_asymptote.csv");
  r.passed = worst <= tol.a_match;
  r.detail = "max relative gap " + detail::sci(worst) + " (tol " + detail::sci(tol.a_match) + ")";
  r.data = {{"max_relative_gap", worst}};
  return r;
}

/// Every criterion except R, artifacts under `dir`.
inline std::vector<CriterionResult> run_suite(const fs::path& dir, const Tolerances& tol = {}) {
  fs::create_directories(dir);
  using Fn = CriterionResult (*)(const fs::path&, const Tolerances&);
  const Fn fns[] = {criterion_b1, criterion_b2, criterion_b3, criterion_m,
                    criterion_s,  criterion_g,  criterion_c,  criterion_a};
  std::vector<CriterionResult> out;
  for (Fn f : fns) out.push_back(detail::timed([&] { return f(dir, tol); }));
  json summary = json::array();
  for (const auto& r : out) {
    summary.push_back({{"id", r.id}, {"passed", r.passed}, {"detail", r.detail}, {"data", r.data}});
  }
  io::write_text(dir / "acceptance.json", summary.dump(2) + "\n");
  return out;
}

namespace detail {

inline std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline std::vector<fs::path> listing(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().filename() != "timing.json") {
      out.push_back(fs::relative(e.path(), root));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Byte comparison of two artifact trees, ignoring timing.json.
inline CriterionResult compare_trees(const fs::path& a, const fs::path& b) {
  CriterionResult r{"R", "Reproducibility", true, "", json::object(), 0.0};
  const auto la = detail::listing(a);
  const auto lb = detail::listing(b);
  std::vector<std::string> differing;
  if (la != lb) differing.push_back("<file set>");
  for (const auto& rel : la) {
    if (!fs::exists(b / rel)) continue;
    if (detail::slurp(a / rel) != detail::slurp(b / rel)) differing.push_back(rel.generic_string());
  }
  r.passed = differing.empty() && !la.empty();
  r.detail = std::to_string(la.size()) + " files compared, " + std::to_string(differing.size()) + " differ";
  r.data = {{"files", la.size()}, {"differing", differing}};
  return r;
}

inline std::string format_line(const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f s", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + "  " + r.id + "  " + r.title + ": " + r.detail +
         "  [" + secs + "]";
}

/// Runs the suite twice (run1/, run2/ under `dir`), prints one line per criterion plus R.
/// Returns true when every criterion passed.
inline bool run_acceptance(const fs::path& dir, std::ostream& log, const Tolerances& tol = {}) {
  const auto first = run_suite(dir / "run1", tol);
  for (const auto& r : first) log << format_line(r) << std::endl;
  const auto start = std::chrono::steady_clock::now();
  const auto second = run_suite(dir / "run2", tol);
  CriterionResult rep = compare_trees(dir / "run1", dir / "run2");
  for (std::size_t k = 0; k < first.size(); ++k) {
    if (first[k].passed != second[k].passed) rep.passed = false;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  log << format_line(rep) << std::endl;
  bool all = rep.passed;
  for (const auto& r : first) all = all && r.passed;
  return all;
}

}  // namespace shockline::acceptance
