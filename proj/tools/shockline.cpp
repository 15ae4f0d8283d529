// shockline command-line driver.
//
//   shockline <burgers|euler|predict|sweep> [--config FILE] [overrides...]
//   shockline accept [--output DIR]
//   shockline version
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 acceptance failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shockline/acceptance.hpp"
#include "shockline/harness.hpp"

namespace {

using shockline::json;

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kSolver = 3;
constexpr int kAcceptance = 4;

struct Overrides {
  std::string config;
  std::optional<double> a, lambda, rate, delta, min_slope, c, gamma, cfl, r_in, r_out, t_max;
  std::optional<double> threshold, stop_below;
  std::optional<std::string> weight, seed, eos, geometry, model, output;
  std::optional<int> cells, rays, record_every, workers;
  bool comoving = false;
  std::vector<double> sweep_a, sweep_lambda;
};

void add_run_flags(CLI::App* cmd, Overrides& o, bool sweep) {
  cmd->add_option("-c,--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--a", o.a, "damping amplitude a");
  cmd->add_option("--lambda", o.lambda, "damping decay exponent (> 1)");
  cmd->add_option("--weight", o.weight, "damping weight: power or exponential");
  cmd->add_option("--rate", o.rate, "rate of the exponential weight");
  cmd->add_option("--seed", o.seed, "named seed");
  cmd->add_option("--delta", o.delta, "pulse width in (0, 1)");
  cmd->add_option("--min-slope", o.min_slope, "minimum radial slope of the pulse");
  cmd->add_option("--compression", o.c, "Burgers compression c");
  cmd->add_option("--eos", o.eos, "polytropic or chaplygin");
  cmd->add_option("--gamma", o.gamma, "adiabatic exponent");
  cmd->add_option("--cells", o.cells, "grid cells");
  cmd->add_option("--cfl", o.cfl, "CFL number");
  cmd->add_option("--r-in", o.r_in, "inner radius");
  cmd->add_option("--r-out", o.r_out, "outer radius");
  cmd->add_option("--geometry", o.geometry, "spherical or planar");
  cmd->add_flag("--comoving", o.comoving, "follow the pulse with a moving window");
  cmd->add_option("--rays", o.rays, "acoustic rays across the pulse");
  cmd->add_option("--threshold", o.threshold, "mu collapse threshold");
  cmd->add_option("--stop-below", o.stop_below, "stop once min mu drops below this");
  cmd->add_option("--record-every", o.record_every, "steps between recorded snapshots");
  cmd->add_option("--t-max", o.t_max, "final time");
  cmd->add_option("-o,--output", o.output, "output directory");
  if (sweep) {
    cmd->add_option("--sweep-a", o.sweep_a, "a axis")->delimiter(',');
    cmd->add_option("--sweep-lambda", o.sweep_lambda, "lambda axis")->delimiter(',');
    cmd->add_option("--model", o.model, "burgers, euler or predict");
    cmd->add_option("--workers", o.workers, "worker threads (0 = logical cores)");
  }
}

template <class T>
void put(json& j, const char* section, const char* key, const std::optional<T>& v) {
  if (!v) return;
  if (section) {
    j[section][key] = *v;
  } else {
    j[key] = *v;
  }
}

json load_config(const Overrides& o, const std::string& mode) {
  json j = json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    try {
      j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
      throw shockline::ConfigError("config", std::string("cannot parse ") + o.config + ": " + e.what());
    }
    if (!j.is_object()) throw shockline::ConfigError("config", "top level must be an object");
  }
  j["mode"] = mode;
  put(j, "damping", "a", o.a);
  put(j, "damping", "lambda", o.lambda);
  put(j, "damping", "weight", o.weight);
  put(j, "damping", "rate", o.rate);
  put(j, "seed", "name", o.seed);
  put(j, "seed", "delta", o.delta);
  put(j, "seed", "min_slope", o.min_slope);
  put(j, "seed", "c", o.c);
  put(j, "eos", "kind", o.eos);
  put(j, "eos", "gamma", o.gamma);
  put(j, "grid", "cells", o.cells);
  put(j, "grid", "cfl", o.cfl);
  put(j, "grid", "r_in", o.r_in);
  put(j, "grid", "r_out", o.r_out);
  put(j, "grid", "geometry", o.geometry);
  if (o.comoving) j["grid"]["comoving"] = true;
  put(j, "acoustic", "rays", o.rays);
  put(j, "acoustic", "threshold", o.threshold);
  put(j, "acoustic", "stop_below", o.stop_below);
  put(j, "acoustic", "record_every", o.record_every);
  put(j, "sweep", "model", o.model);
  put(j, "sweep", "workers", o.workers);
  if (!o.sweep_a.empty()) j["sweep"]["a"] = o.sweep_a;
  if (!o.sweep_lambda.empty()) j["sweep"]["lambda"] = o.sweep_lambda;
  put<double>(j, nullptr, "t_max", o.t_max);
  put(j, nullptr, "output", o.output);
  return j;
}

int run_mode(const Overrides& o, const std::string& mode) {
  const shockline::RunConfig cfg = shockline::parse_config(load_config(o, mode));
  const auto dir = shockline::output_dir(cfg);
  const auto out = shockline::run(cfg, dir);
  std::cout << out.report.dump(2) << "\n";
  std::cerr << "artifacts written to " << dir.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shock formation in damped compressible flow: predictions, simulations, sweeps"};
  app.require_subcommand(1);

  Overrides o;
  std::string mode;
  for (const char* name : {"burgers", "euler", "predict", "sweep"}) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " driver");
    add_run_flags(cmd, o, std::string(name) == "sweep");
    cmd->callback([&mode, name] { mode = name; });
  }
  std::string accept_dir = "shockline_accept";
  auto* accept = app.add_subcommand("accept", "run the acceptance suite twice and compare outputs");
  accept->add_option("-o,--output", accept_dir, "artifact directory");
  accept->callback([&mode] { mode = "accept"; });
  app.add_subcommand("version", "print the version")->callback([&mode] { mode = "version"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (mode == "version") {
      std::cout << "shockline " << shockline::kVersion << "\n";
      return kOk;
    }
    if (mode == "accept") {
      const char* env = std::getenv("SHOCKLINE_OUT");
      const std::filesystem::path dir = env && *env ? env : accept_dir;
      return shockline::acceptance::run_acceptance(dir, std::cout) ? kOk : kAcceptance;
    }
    return run_mode(o, mode);
  } catch (const shockline::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const shockline::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    std::cerr << "state dump: " << e.dump_path().string() << "\n";
    return kSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
}
