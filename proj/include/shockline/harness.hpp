#pragma once

/**
 * @file harness.hpp
 * @brief Run configuration, the burgers/euler/predict/sweep drivers and their artifacts.
 *
 * Every driver is deterministic given its configuration. Wall-clock time is written to a
 * separate timing.json so that reports and CSVs stay byte-reproducible.
 */

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shockline/acoustic_geometry.hpp"
#include "shockline/burgers.hpp"
#include "shockline/classification.hpp"
#include "shockline/damping.hpp"
#include "shockline/eos.hpp"
#include "shockline/euler_radial.hpp"
#include "shockline/io.hpp"
#include "shockline/plot.hpp"
#include "shockline/predict.hpp"
#include "shockline/seeds.hpp"

namespace shockline {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "shockline.report/1";

using json = nlohmann::json;

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct DampingConfig {
  double a = 0.0;
  double lambda = 2.0;
  /// "power" for 1/(1+t)^lambda, "exponential" for exp(-rate t).
  std::string weight = "power";
  double rate = 1.0;
};

struct SeedConfig {
  std::string name;
  double delta = 0.25;
  double min_slope = -1.0;
  double c = 1.0;
};

struct EosConfig {
  std::string kind = "polytropic";
  double gamma = 1.4;
};

struct GridConfig {
  int cells = 4096;
  std::optional<double> r_in;
  std::optional<double> r_out;
  bool comoving = false;
  double cfl = 0.45;
  std::string geometry = "spherical";
};

struct AcousticConfig {
  int rays = 65;
  double threshold = 0.01;
  /// The run stops once min mu_jac falls to this level.
  double stop_below = 0.01;
  int record_every = 4;
  double fit_floor = 0.2;
  double fit_ceiling = 0.5;
};

struct SweepConfig {
  std::string model = "burgers";
  std::vector<double> a;
  std::vector<double> lambda;
  int workers = 0;
};

struct RunConfig {
  std::string mode = "predict";
  DampingConfig damping;
  SeedConfig seed;
  EosConfig eos;
  GridConfig grid;
  AcousticConfig acoustic;
  SweepConfig sweep;
  std::optional<double> t_max;
  std::filesystem::path output = "shockline_out";
};

namespace detail {

inline const std::set<std::string>& known_modes() {
  static const std::set<std::string> m{"burgers", "euler", "predict", "sweep", "accept"};
  return m;
}

inline void check_keys(const json& obj, const std::string& where,
                       const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "<root>" : where, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError(where.empty() ? k : where + "." + k, "unknown key");
  }
}

template <class T>
void read(const json& obj, const std::string& where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const std::string field = where.empty() ? key : where + "." + key;
  try {
    const json& v = obj.at(key);
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(field, "expected a number");
      out = v.get<double>();
      if (!std::isfinite(out)) throw ConfigError(field, "must be finite");
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
      out = v.get<int>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(field, "expected true or false");
      out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(field, "expected a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::optional<double>>) {
      if (v.is_null()) {
        out.reset();
      } else {
        if (!v.is_number()) throw ConfigError(field, "expected a number or null");
        out = v.get<double>();
      }
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw ConfigError(field, "expected an array of numbers");
      out.clear();
      for (const auto& e : v) {
        if (!e.is_number() || !std::isfinite(e.get<double>())) {
          throw ConfigError(field, "expected finite numbers");
        }
        out.push_back(e.get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(field, e.what());
  }
}

inline bool contains_name(const std::vector<std::string>& names, const std::string& n) {
  return std::find(names.begin(), names.end(), n) != names.end();
}

}  // namespace detail

/// Parses and validates a configuration object.
inline RunConfig parse_config(const json& j) {
  using detail::check_keys;
  using detail::read;
  RunConfig c;
  check_keys(j, "", {"mode", "damping", "seed", "eos", "grid", "acoustic", "sweep", "t_max", "output"});
  read(j, "", "mode", c.mode);
  if (!detail::known_modes().count(c.mode)) throw ConfigError("mode", "unknown mode '" + c.mode + "'");
  if (j.contains("damping")) {
    const auto& d = j["damping"];
    check_keys(d, "damping", {"a", "lambda", "weight", "rate"});
    read(d, "damping", "a", c.damping.a);
    read(d, "damping", "lambda", c.damping.lambda);
    read(d, "damping", "weight", c.damping.weight);
    read(d, "damping", "rate", c.damping.rate);
  }
  if (c.damping.weight != "power" && c.damping.weight != "exponential") {
    throw ConfigError("damping.weight", "expected 'power' or 'exponential'");
  }
  if (c.damping.weight == "power" && !(c.damping.lambda > 1.0)) {
    throw ConfigError("damping.lambda", "must exceed 1");
  }
  if (c.damping.weight == "exponential" && !(c.damping.rate > 0.0)) {
    throw ConfigError("damping.rate", "must be positive");
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, "sweep", {"model", "a", "lambda", "workers"});
    read(s, "sweep", "model", c.sweep.model);
    read(s, "sweep", "a", c.sweep.a);
    read(s, "sweep", "lambda", c.sweep.lambda);
    read(s, "sweep", "workers", c.sweep.workers);
  }
  if (c.sweep.model != "burgers" && c.sweep.model != "euler" && c.sweep.model != "predict") {
    throw ConfigError("sweep.model", "expected 'burgers', 'euler' or 'predict'");
  }
  const std::string model = c.mode == "sweep" ? c.sweep.model : c.mode;
  c.seed.name = model == "burgers" ? "linear-ramp" : "sine";
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    check_keys(s, "seed", {"name", "delta", "min_slope", "c"});
    read(s, "seed", "name", c.seed.name);
    read(s, "seed", "delta", c.seed.delta);
    read(s, "seed", "min_slope", c.seed.min_slope);
    read(s, "seed", "c", c.seed.c);
  }
  if (j.contains("eos")) {
    const auto& e = j["eos"];
    check_keys(e, "eos", {"kind", "gamma"});
    read(e, "eos", "kind", c.eos.kind);
    read(e, "eos", "gamma", c.eos.gamma);
  }
  if (c.eos.kind != "polytropic" && c.eos.kind != "chaplygin") {
    throw ConfigError("eos.kind", "expected 'polytropic' or 'chaplygin'");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, "grid", {"cells", "r_in", "r_out", "comoving", "cfl", "geometry"});
    read(g, "grid", "cells", c.grid.cells);
    read(g, "grid", "r_in", c.grid.r_in);
    read(g, "grid", "r_out", c.grid.r_out);
    read(g, "grid", "comoving", c.grid.comoving);
    read(g, "grid", "cfl", c.grid.cfl);
    read(g, "grid", "geometry", c.grid.geometry);
  }
  if (c.grid.cells < 16) throw ConfigError("grid.cells", "must be at least 16");
  if (c.grid.r_in && !(*c.grid.r_in > 0.0)) throw ConfigError("grid.r_in", "must be positive");
  if (c.grid.r_in && c.grid.r_out && !(*c.grid.r_out > *c.grid.r_in)) {
    throw ConfigError("grid.r_out", "must exceed grid.r_in");
  }
  if (!(c.grid.cfl > 0.0 && c.grid.cfl <= 1.0)) throw ConfigError("grid.cfl", "must lie in (0, 1]");
  if (c.grid.geometry != "spherical" && c.grid.geometry != "planar") {
    throw ConfigError("grid.geometry", "expected 'spherical' or 'planar'");
  }
  if (j.contains("acoustic")) {
    const auto& a = j["acoustic"];
    check_keys(a, "acoustic", {"rays", "threshold", "stop_below", "record_every", "fit_floor", "fit_ceiling"});
    read(a, "acoustic", "rays", c.acoustic.rays);
    read(a, "acoustic", "threshold", c.acoustic.threshold);
    c.acoustic.stop_below = c.acoustic.threshold;
    read(a, "acoustic", "stop_below", c.acoustic.stop_below);
    read(a, "acoustic", "record_every", c.acoustic.record_every);
    read(a, "acoustic", "fit_floor", c.acoustic.fit_floor);
    read(a, "acoustic", "fit_ceiling", c.acoustic.fit_ceiling);
  }
  if (c.acoustic.rays < 3) throw ConfigError("acoustic.rays", "must be at least 3");
  if (c.acoustic.record_every < 1) throw ConfigError("acoustic.record_every", "must be at least 1");
  if (!(c.acoustic.fit_floor < c.acoustic.fit_ceiling)) {
    throw ConfigError("acoustic.fit_floor", "must be below acoustic.fit_ceiling");
  }
  for (double l : c.sweep.lambda) {
    if (!(l > 1.0)) throw ConfigError("sweep.lambda", "every lambda must exceed 1");
  }
  if (c.sweep.workers < 0) throw ConfigError("sweep.workers", "must be non-negative");
  if (j.contains("t_max")) {
    double t = 0.0;
    read(j, "", "t_max", t);
    if (!(t >= 0.0)) throw ConfigError("t_max", "must be non-negative");
    c.t_max = t;
  }
  if (j.contains("output")) {
    std::string o;
    read(j, "", "output", o);
    c.output = o;
  }

  if (model == "burgers") {
    if (!detail::contains_name(burgers::seed_names(), c.seed.name)) {
      throw ConfigError("seed.name", "unknown Burgers seed '" + c.seed.name + "'");
    }
  } else if (model == "euler" || model == "predict") {
    if (!detail::contains_name(pulse_seed_names(), c.seed.name)) {
      throw ConfigError("seed.name", "unknown pulse seed '" + c.seed.name + "'");
    }
    if (!(c.seed.delta > 0.0 && c.seed.delta < 1.0)) throw ConfigError("seed.delta", "must lie in (0, 1)");
    if (model == "euler") {
      if (c.eos.kind != "polytropic") {
        throw ConfigError("eos.kind", "only polytropic gases are simulated");
      }
      if (!(c.eos.gamma > 1.0)) throw ConfigError("eos.gamma", "must exceed 1");
      try {
        make_pulse_seed(c.seed.name, c.seed.min_slope);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("seed.min_slope", e.what());
      }
    }
  }
  return c;
}

inline json config_to_json(const RunConfig& c) {
  json j;
  j["mode"] = c.mode;
  j["damping"] = {{"a", c.damping.a}, {"lambda", c.damping.lambda}, {"weight", c.damping.weight}};
  if (c.damping.weight == "exponential") j["damping"]["rate"] = c.damping.rate;
  j["seed"] = {{"name", c.seed.name}, {"delta", c.seed.delta}, {"min_slope", c.seed.min_slope}, {"c", c.seed.c}};
  j["eos"] = {{"kind", c.eos.kind}, {"gamma", c.eos.gamma}};
  j["grid"] = {{"cells", c.grid.cells},
               {"r_in", c.grid.r_in ? json(*c.grid.r_in) : json(nullptr)},
               {"r_out", c.grid.r_out ? json(*c.grid.r_out) : json(nullptr)},
               {"comoving", c.grid.comoving},
               {"cfl", c.grid.cfl},
               {"geometry", c.grid.geometry}};
  j["acoustic"] = {{"rays", c.acoustic.rays},           {"threshold", c.acoustic.threshold},
                   {"stop_below", c.acoustic.stop_below}, {"record_every", c.acoustic.record_every},
                   {"fit_floor", c.acoustic.fit_floor},   {"fit_ceiling", c.acoustic.fit_ceiling}};
  j["sweep"] = {{"model", c.sweep.model}, {"a", c.sweep.a}, {"lambda", c.sweep.lambda}};
  j["t_max"] = c.t_max ? json(*c.t_max) : json(nullptr);
  return j;
}

inline DampingProfile make_damping(const DampingConfig& d) {
  if (d.weight == "exponential") {
    const double k = d.rate;
    return DampingProfile::custom(d.a, [k](double t) { return std::exp(-k * t); },
                                  "exp(-" + io::format_double(k) + " t)");
  }
  return DampingProfile::power_law(d.a, d.lambda);
}

inline EosDescriptor make_eos_descriptor(const EosConfig& e) {
  return e.kind == "chaplygin" ? EosDescriptor::chaplygin() : EosDescriptor::polytropic(e.gamma);
}

/// Finite numbers as-is; NaN as "none"; infinities as "diverged".
inline json num(double x) {
  if (std::isnan(x)) return "none";
  if (std::isinf(x)) return "diverged";
  return x;
}

inline json num(const std::optional<double>& x) { return x ? num(*x) : json("none"); }

inline json classification_json(const ShockClassification& c) {
  json j;
  j["variant"] = variant_name(c);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Shock>) j["t_star"] = num(v.t_star);
        if constexpr (std::is_same_v<T, ShockInterval>) {
          j["lower"] = num(v.lower);
          j["upper"] = num(v.upper);
        }
        if constexpr (std::is_same_v<T, Global>) j["note"] = v.note;
        if constexpr (std::is_same_v<T, Inconclusive>) {
          j["t_max"] = num(v.t_max);
          j["note"] = v.note;
        }
      },
      c);
  return j;
}

// ---------------------------------------------------------------------------------------
// Burgers

struct BurgersOutcome {
  ShockClassification classification;
  std::optional<double> t_star;
  std::optional<double> t_crossing;  // from a 2049-ray fan
  std::optional<CBounds> bracket;    // [e^-beta/c, e^beta/c]
  std::vector<double> minimizers;
};

inline BurgersOutcome burgers_core(const RunConfig& cfg) {
  const auto seed = burgers::make_seed(cfg.seed.name, cfg.seed.c);
  const auto p = make_damping(cfg.damping);
  BurgersOutcome out{burgers::shock_time(seed, p), std::nullopt, std::nullopt, std::nullopt,
                     seed.minimizers()};
  if (const auto* s = std::get_if<Shock>(&out.classification)) {
    out.t_star = s->t_star;
    const auto& dom = seed.domain();
    std::vector<double> u(2049);
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = dom.lo + dom.width() * static_cast<double>(i) / (u.size() - 1);
    }
    out.t_crossing = burgers::first_crossing_time(seed, p, u, 2.0 * s->t_star + 1.0);
  }
  if (!p.has_custom_weight() && seed.compression() > 0.0) {
    const CBounds b = p.c_bounds();
    out.bracket = CBounds{b.lower / seed.compression(), b.upper / seed.compression()};
  }
  return out;
}

// ---------------------------------------------------------------------------------------
// Euler

struct EulerOutcome {
  ShockClassification prediction;
  RunResult run;
  AcousticFan fan;
  MuReport mu;
  GradientReport initial_gradient;
  double min_slope = 0.0;
  bool within_hypothesis = true;
};

inline Grid euler_grid(const RunConfig& cfg, double t_max) {
  const double delta = cfg.seed.delta;
  // Default inner edges stay at least halfway between the origin and the pulse.
  const double half_inner = 0.5 * (1.0 - delta);
  if (cfg.grid.comoving) {
    return Grid::span(cfg.grid.r_in.value_or(std::max(1.0 - 3.0 * delta, half_inner)),
                      cfg.grid.r_out.value_or(1.0 + delta), cfg.grid.cells);
  }
  return Grid::span(cfg.grid.r_in.value_or(std::min(0.2, half_inner)),
                    cfg.grid.r_out.value_or(1.0 + t_max + 0.5), cfg.grid.cells);
}

inline double euler_t_max(const RunConfig& cfg) { return cfg.t_max.value_or(std::exp(2.0)); }

inline EulerOutcome euler_core(const RunConfig& cfg, const std::filesystem::path& dump_dir) {
  const PolytropicEos eos{cfg.eos.gamma};
  const auto p = make_damping(cfg.damping);
  const ShortPulseSpec spec(cfg.seed.delta, make_pulse_seed(cfg.seed.name, cfg.seed.min_slope));
  const double t_max = euler_t_max(cfg);
  const Grid grid = euler_grid(cfg, t_max);
  const FluidField f0 = build_short_pulse(spec, eos, p, grid);

  SolverOptions opt;
  opt.geometry = cfg.grid.geometry == "planar" ? Geometry::planar : Geometry::spherical;
  opt.cfl = cfg.grid.cfl;
  opt.comoving = cfg.grid.comoving;
  opt.history_every = std::max(1, cfg.acoustic.record_every);
  opt.dump_dir = dump_dir;

  AcousticMonitor monitor(ray_labels(spec.delta(), cfg.acoustic.rays), eos, p,
                          cfg.acoustic.stop_below, cfg.acoustic.record_every, true,
                          std::min(cfg.acoustic.fit_floor, 0.15));
  EulerOutcome out;
  out.prediction = classify_case(spec, p, make_eos_descriptor(cfg.eos));
  out.initial_gradient = gradient_monitor(f0);
  out.min_slope = spec.min_slope();
  out.within_hypothesis = p.within_theorem_hypothesis();
  out.run = run_until(f0, eos, p, t_max, opt, {std::ref(monitor)});
  monitor.finish();
  out.fan = monitor.fan();
  MuReportOptions mo;
  mo.threshold = cfg.acoustic.threshold;
  mo.fit_floor = cfg.acoustic.fit_floor;
  mo.fit_ceiling = cfg.acoustic.fit_ceiling;
  out.mu = detect_collapse(out.fan, mo);
  return out;
}

// ---------------------------------------------------------------------------------------
// Predict

struct PredictOutcome {
  ShockClassification classification;
  bool chaplygin = false;
  std::optional<ShockInterval> interval;
  std::optional<ShockInterval> asymptote_zero;
};

inline PredictOutcome predict_core(const RunConfig& cfg) {
  const auto p = make_damping(cfg.damping);
  const double slope = cfg.seed.min_slope;
  PredictOutcome out;
  const auto eos = make_eos_descriptor(cfg.eos);
  out.chaplygin = chaplygin_flag(eos);
  out.classification = classify_case(slope, cfg.seed.delta, p, eos);
  if (const auto* iv = std::get_if<ShockInterval>(&out.classification)) {
    out.interval = *iv;
    const CBounds c = p.c_bounds();
    out.asymptote_zero = ShockInterval{*mu_asymptote_zero(cfg.seed.delta, slope, c.lower),
                                       *mu_asymptote_zero(cfg.seed.delta, slope, c.upper)};
  }
  return out;
}

// ---------------------------------------------------------------------------------------
// Artifacts

struct RunOutput {
  json report;
  std::vector<std::string> files;  // relative to the output directory
};

namespace detail {

inline void emit(const std::filesystem::path& dir, RunOutput& out, const std::string& name,
                 const std::string& text) {
  io::write_text(dir / name, text);
  out.files.push_back(name);
}

inline std::string mu_rays_svg(const AcousticFan& fan, const std::string& title) {
  plot::Figure fig{title, "t", "mu (Jacobian)", {}, false};
  const std::size_t n = fan.u_grid.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 8);
  for (std::size_t i = 0; i < n; i += stride) {
    plot::Series s{"u=" + plot::detail::tick(fan.u_grid[i]), {}, {}};
    for (std::size_t k = 0; k < fan.times.size(); ++k) {
      s.x.push_back(fan.times[k]);
      s.y.push_back(fan.mu_jac[k][i]);
    }
    fig.series.push_back(std::move(s));
  }
  return plot::render_svg(fig);
}

}  // namespace detail

inline RunOutput run_burgers(const RunConfig& cfg, const std::filesystem::path& dir) {
  RunOutput out;
  const BurgersOutcome b = burgers_core(cfg);
  const auto seed = burgers::make_seed(cfg.seed.name, cfg.seed.c);
  const auto p = make_damping(cfg.damping);

  const double horizon = b.t_star ? 1.25 * *b.t_star : cfg.t_max.value_or(10.0);
  std::vector<double> times(201), u(33);
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = horizon * k / (times.size() - 1);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = seed.domain().lo + seed.domain().width() * i / (u.size() - 1);
  }
  const auto fan = burgers::trace_fan(seed, p, times, u);
  io::CsvWriter mu_csv({"t", "u", "x", "mu"});
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      mu_csv.row({times[k], u[i], fan.positions[k][i], fan.mu[k][i]});
    }
  }
  detail::emit(dir, out, "mu_history.csv", mu_csv.str());
  plot::Figure fig{"Burgers characteristic fan: mu per ray", "t", "mu", {}, false};
  for (std::size_t i = 0; i < u.size(); i += 4) {
    plot::Series s{"u=" + plot::detail::tick(u[i]), times, {}};
    for (std::size_t k = 0; k < times.size(); ++k) s.y.push_back(fan.mu[k][i]);
    fig.series.push_back(std::move(s));
  }
  detail::emit(dir, out, "mu_rays.svg", plot::render_svg(fig));

  json r;
  r["schema"] = kReportSchema;
  r["mode"] = "burgers";
  r["config"] = config_to_json(cfg);
  r["classification"] = classification_json(b.classification);
  r["t_star"] = num(b.t_star);
  r["t_crossing_fan"] = num(b.t_crossing);
  r["compression"] = num(seed.compression());
  r["minimizers"] = b.minimizers;
  r["predicted_interval"] =
      b.bracket ? json{{"lower", num(b.bracket->lower)}, {"upper", num(b.bracket->upper)}} : json("none");
  r["files"] = out.files;
  r["wall_clock"] = "timing.json";
  out.report = std::move(r);
  return out;
}

inline RunOutput run_euler(const RunConfig& cfg, const std::filesystem::path& dir) {
  RunOutput out;
  const PolytropicEos eos{cfg.eos.gamma};
  const EulerOutcome e = euler_core(cfg, dir);

  detail::emit(dir, out, "mu_history.csv", mu_history_csv(e.fan));
  io::CsvWriter g({"t", "max_dv", "r_dv", "max_drho", "r_drho"});
  for (const auto& s : e.run.gradient_history) {
    g.row({s.t, s.report.max_dv, s.report.r_dv, s.report.max_drho, s.report.r_drho});
  }
  detail::emit(dir, out, "gradient_history.csv", g.str());
  detail::emit(dir, out, "snapshot_final.csv", snapshot_csv(e.run.field, eos));
  detail::emit(dir, out, "mu_rays.svg", detail::mu_rays_svg(e.fan, "Acoustic fan: mu per ray"));
  plot::Figure gf{"Maximum radial velocity gradient", "t", "max |d_r v|", {}, true};
  plot::Series gs{"max |d_r v|", {}, {}};
  for (const auto& s : e.run.gradient_history) {
    gs.x.push_back(s.t);
    gs.y.push_back(s.report.max_dv);
  }
  gf.series.push_back(std::move(gs));
  detail::emit(dir, out, "gradient.svg", plot::render_svg(gf));

  json r;
  r["schema"] = kReportSchema;
  r["mode"] = "euler";
  r["config"] = config_to_json(cfg);
  r["classification"] = classification_json(e.prediction);
  if (const auto* iv = std::get_if<ShockInterval>(&e.prediction)) {
    r["predicted_interval"] = {{"lower", num(iv->lower)}, {"upper", num(iv->upper)}};
  } else {
    r["predicted_interval"] = "none";
  }
  r["min_slope"] = num(e.min_slope);
  r["within_theorem_hypothesis"] = e.within_hypothesis;
  r["stop_reason"] = stop_reason_name(e.run.reason);
  r["t_end"] = num(e.run.field.t);
  r["steps"] = e.run.steps;
  r["t_collapse"] = {{"jacobian", num(e.mu.jacobian.t_extrapolated)},
                     {"transport", num(e.mu.transport.t_extrapolated)},
                     {"jacobian_threshold", num(e.mu.jacobian.t_threshold)},
                     {"transport_threshold", num(e.mu.transport.t_threshold)},
                     {"threshold", e.mu.threshold}};
  r["mu"] = {{"min_jacobian", num(e.mu.min_mu_jac)},
             {"min_transport", num(e.mu.min_mu_ode)},
             {"discrepancy", num(e.mu.discrepancy)},
             {"u_star", num(e.mu.u_star)}};
  r["gradient"] = {{"initial_max_dv", num(e.initial_gradient.max_dv)}, {"peak_max_dv", num(e.run.peak_dv)}};
  r["files"] = out.files;
  r["wall_clock"] = "timing.json";
  out.report = std::move(r);
  return out;
}

inline RunOutput run_predict(const RunConfig& cfg, const std::filesystem::path&) {
  RunOutput out;
  const PredictOutcome pr = predict_core(cfg);
  json r;
  r["schema"] = kReportSchema;
  r["mode"] = "predict";
  r["config"] = config_to_json(cfg);
  r["classification"] = classification_json(pr.classification);
  r["chaplygin"] = pr.chaplygin;
  r["predicted_interval"] =
      pr.interval ? json{{"lower", num(pr.interval->lower)}, {"upper", num(pr.interval->upper)}} : json("none");
  r["asymptote_zero"] = pr.asymptote_zero ? json{{"lower", num(pr.asymptote_zero->lower)},
                                                 {"upper", num(pr.asymptote_zero->upper)}}
                                          : json("none");
  r["files"] = json::array();
  r["wall_clock"] = "timing.json";
  out.report = std::move(r);
  return out;
}

// ---------------------------------------------------------------------------------------
// Sweep

struct SweepCell {
  double a = 0.0;
  double lambda = 2.0;
  bool ok = true;
  std::string error;
  std::string classification;
  std::optional<double> t_star;
  std::optional<double> t_lower;
  std::optional<double> t_upper;
};

/// Runs `fn(index)` for index in [0, n) on up to `workers` threads (0 = logical cores).
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  std::size_t w = workers > 0 ? static_cast<std::size_t>(workers)
                              : std::max(1u, std::thread::hardware_concurrency());
  w = std::min(w, std::max<std::size_t>(n, 1));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < w; ++k) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline SweepCell sweep_cell(const RunConfig& base, double a, double lambda,
                            const std::filesystem::path& dir) {
  RunConfig cfg = base;
  cfg.damping.a = a;
  cfg.damping.lambda = lambda;
  SweepCell cell{a, lambda, true, "", "", std::nullopt, std::nullopt, std::nullopt};
  try {
    if (base.sweep.model == "burgers") {
      const auto b = burgers_core(cfg);
      cell.classification = variant_name(b.classification);
      cell.t_star = b.t_star;
      if (b.bracket) cell.t_lower = b.bracket->lower, cell.t_upper = b.bracket->upper;
    } else if (base.sweep.model == "predict") {
      const auto pr = predict_core(cfg);
      cell.classification = variant_name(pr.classification);
      if (pr.interval) cell.t_lower = pr.interval->lower, cell.t_upper = pr.interval->upper;
    } else {
      const auto e = euler_core(cfg, dir);
      cell.classification = variant_name(e.prediction);
      cell.t_star = e.mu.jacobian.t_extrapolated;
      if (const auto* iv = std::get_if<ShockInterval>(&e.prediction)) {
        cell.t_lower = iv->lower, cell.t_upper = iv->upper;
      }
    }
  } catch (const std::exception& ex) {
    cell.ok = false;
    cell.error = ex.what();
  }
  return cell;
}

struct SweepResult {
  std::vector<SweepCell> cells;  // sorted by (a, lambda)
  std::optional<ShiftTable> shift;
};

inline SweepResult sweep_core(const RunConfig& cfg, const std::filesystem::path& dir) {
  const std::vector<double> as = cfg.sweep.a.empty() ? std::vector<double>{cfg.damping.a} : cfg.sweep.a;
  const std::vector<double> ls =
      cfg.sweep.lambda.empty() ? std::vector<double>{cfg.damping.lambda} : cfg.sweep.lambda;
  std::vector<std::pair<double, double>> keys;
  for (double a : as) {
    for (double l : ls) keys.emplace_back(a, l);
  }
  std::vector<SweepCell> cells(keys.size());
  parallel_for(keys.size(), cfg.sweep.workers,
               [&](std::size_t i) { cells[i] = sweep_cell(cfg, keys[i].first, keys[i].second, dir); });
  SweepResult res;
  std::vector<std::optional<double>> numerical;
  for (const auto& c : cells) numerical.push_back(c.t_star);
  std::sort(cells.begin(), cells.end(), [](const SweepCell& x, const SweepCell& y) {
    return std::pair(x.a, x.lambda) < std::pair(y.a, y.lambda);
  });
  res.cells = std::move(cells);
  if (cfg.seed.min_slope <= -1.0 && cfg.seed.delta > 0.0 && cfg.seed.delta < 1.0 &&
      cfg.damping.weight == "power") {
    std::optional<double> undamped;
    if (cfg.sweep.model == "burgers" && cfg.seed.c > 0.0) undamped = 1.0 / cfg.seed.c;
    const bool any_numerical = std::any_of(numerical.begin(), numerical.end(),
                                           [](const auto& x) { return x.has_value(); });
    res.shift = shift_analysis(as, ls, cfg.seed.delta, cfg.seed.min_slope,
                               any_numerical ? numerical : std::vector<std::optional<double>>{},
                               undamped);
  }
  return res;
}

inline RunOutput run_sweep(const RunConfig& cfg, const std::filesystem::path& dir) {
  RunOutput out;
  const SweepResult res = sweep_core(cfg, dir);
  io::CsvWriter w({"a", "lambda", "status", "classification", "t_star", "t_lower", "t_upper"});
  auto cell_num = [](const std::optional<double>& x) {
    return x ? io::format_double(*x) : std::string("none");
  };
  json cells = json::array();
  for (const auto& c : res.cells) {
    w.raw_row({io::format_double(c.a), io::format_double(c.lambda), c.ok ? "ok" : "failed",
               c.ok ? c.classification : "none", cell_num(c.t_star), cell_num(c.t_lower),
               cell_num(c.t_upper)});
    json jc{{"a", c.a}, {"lambda", c.lambda}, {"status", c.ok ? "ok" : "failed"}};
    if (!c.ok) jc["error"] = c.error;
    jc["classification"] = c.ok ? c.classification : "none";
    jc["t_star"] = num(c.t_star);
    cells.push_back(jc);
  }
  detail::emit(dir, out, "sweep.csv", w.str());

  // Lifespan against a (one series per lambda) and against lambda (one per a).
  std::map<double, plot::Series> by_lambda, by_a;
  for (const auto& c : res.cells) {
    const double y = c.t_star ? *c.t_star
                              : (c.t_lower && c.t_upper ? 0.5 * (*c.t_lower + *c.t_upper)
                                                        : std::numeric_limits<double>::quiet_NaN());
    auto& sl = by_lambda[c.lambda];
    sl.label = "lambda=" + plot::detail::tick(c.lambda);
    sl.x.push_back(c.a);
    sl.y.push_back(y);
    auto& sa = by_a[c.a];
    sa.label = "a=" + plot::detail::tick(c.a);
    sa.x.push_back(c.lambda);
    sa.y.push_back(y);
  }
  plot::Figure fa{"Lifespan against damping strength", "a", "T*", {}, false};
  for (auto& [k, s] : by_lambda) fa.series.push_back(std::move(s));
  plot::Figure fl{"Lifespan against decay exponent", "lambda", "T*", {}, false};
  for (auto& [k, s] : by_a) fl.series.push_back(std::move(s));
  detail::emit(dir, out, "tstar_vs_a.svg", plot::render_svg(fa));
  detail::emit(dir, out, "tstar_vs_lambda.svg", plot::render_svg(fl));

  json r;
  r["schema"] = kReportSchema;
  r["mode"] = "sweep";
  r["config"] = config_to_json(cfg);
  r["cells"] = cells;
  if (res.shift) {
    detail::emit(dir, out, "shift_table.csv", shift_table_csv(*res.shift));
    r["monotonicity"] = {{"ok", res.shift->monotone()}, {"violations", res.shift->violations}};
  } else {
    r["monotonicity"] = "none";
  }
  r["files"] = out.files;
  r["wall_clock"] = "timing.json";
  out.report = std::move(r);
  return out;
}

/// Resolves the output directory: SHOCKLINE_OUT wins over the configuration.
inline std::filesystem::path output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("SHOCKLINE_OUT"); env && *env) return env;
  return cfg.output;
}

/// Runs a non-acceptance mode and writes report.json and timing.json next to its artifacts.
inline RunOutput run(const RunConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  if (cfg.mode == "burgers") {
    out = run_burgers(cfg, dir);
  } else if (cfg.mode == "euler") {
    out = run_euler(cfg, dir);
  } else if (cfg.mode == "predict") {
    out = run_predict(cfg, dir);
  } else if (cfg.mode == "sweep") {
    out = run_sweep(cfg, dir);
  } else {
    throw ConfigError("mode", "'" + cfg.mode + "' is not a single-run mode");
  }
  io::write_text(dir / "report.json", out.report.dump(2) + "\n");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  io::write_text(dir / "timing.json", json{{"wall_clock_seconds", secs}}.dump(2) + "\n");
  return out;
}

}  // namespace shockline
