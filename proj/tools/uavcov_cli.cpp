#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "uavcov/config.hpp"
#include "uavcov/errors.hpp"
#include "uavcov/sweep.hpp"
#include "uavcov/validation.hpp"

namespace fs = std::filesystem;
using namespace uavcov;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

struct Flags {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;
  long drops = 100000;
  int threads = 0;
  std::string method = "analytic";
  std::string methods;
  double tol = 0.0;
  std::string axis;
  std::string grid;
  std::string quantity = "coverage";
  std::string figure;
};

RunConfig base_config(const Flags& f) { return f.config.empty() ? RunConfig{} : load_config(f.config); }

SweepOptions sweep_options(const Flags& f) {
  SweepOptions o;
  o.mc.n_drops = f.drops;
  o.mc.seed = f.seed;
  o.mc.threads = f.threads;
  o.threads = f.threads;
  if (f.tol > 0.0) {
    o.analytic.quad.rel_tol = f.tol;
    o.analytic.inversion.target_rel_err = f.tol;
  }
  o.mc.validate();
  return o;
}

// --methods (comma list) wins over --method.
void apply_methods(const Flags& f, SweepSpec& s) {
  s.analytic = s.mc = s.bound = s.closed_form = false;
  if (f.methods.empty()) {
    if (f.method != "analytic" && f.method != "mc" && f.method != "both")
      throw ConfigError("--method must be analytic, mc or both");
    s.analytic = f.method != "mc";
    s.mc = f.method != "analytic";
    return;
  }
  std::stringstream ss(f.methods);
  std::string m;
  while (std::getline(ss, m, ',')) {
    if (m == "analytic") s.analytic = true;
    else if (m == "mc") s.mc = true;
    else if (m == "bound") s.bound = true;
    else if (m == "closed_form") s.closed_form = true;
    else throw ConfigError("unknown method '" + m + "'");
  }
}

Quantity parse_quantity(const std::string& q) {
  if (q == "coverage") return Quantity::Coverage;
  if (q == "cellfree") return Quantity::CellFree;
  throw ConfigError("--quantity must be coverage or cellfree");
}

fs::path write_table(const Flags& f, const std::string& name, const Table& t, const std::string& hash) {
  std::error_code ec;
  fs::create_directories(f.out, ec);
  const fs::path path = fs::path(f.out) / (name + ".csv");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  write_csv(os, t, hash, f.seed);
  if (!os) throw ConfigError("write failed for " + path.string());
  return path;
}

int cmd_point_or_sweep(const Flags& f, bool single) {
  const RunConfig rc = base_config(f);
  SweepSpec s;
  if (single) {
    s.axis = SweepAxis::BetaDb;
    s.grid = {linear_to_db(rc.network.beta)};
  } else {
    if (f.axis.empty() || f.grid.empty()) throw ConfigError("sweep needs --axis and --grid");
    s.axis = parse_axis(f.axis);
    s.grid = parse_grid(f.grid);
  }
  s.quantity = parse_quantity(f.quantity);
  apply_methods(f, s);
  s.validate();
  const Table t = run_sweep(rc, s, sweep_options(f));
  const auto path = write_table(f, single ? "coverage" : "sweep_" + to_string(s.axis), t, config_hash(rc));
  std::cout << "wrote " << path.string() << " (" << t.rows.size() << " rows)\n";
  return 0;
}

int cmd_figure(const Flags& f) {
  const auto ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), f.figure) == ids.end()) throw ConfigError("unknown figure '" + f.figure + "'");
  if (f.method != "analytic" && f.method != "mc" && f.method != "both")
    throw ConfigError("--method must be analytic, mc or both");
  const Table t = run_figure(f.figure, f.method != "mc", f.method != "analytic", sweep_options(f));
  const auto path = write_table(f, f.figure, t, config_hash(figure_config(f.figure)));
  std::cout << "wrote " << path.string() << " (" << t.rows.size() << " rows)\n";
  return 0;
}

int report(const std::vector<CheckResult>& results) {
  print_results(std::cout, results);
  for (const auto& r : results)
    if (!r.pass) return kExitValidation;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage of UAV networks: analytic evaluation, Monte Carlo and figure presets"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON configuration (defaults to the suburban setting)")->check(CLI::ExistingFile);
  app.add_option("--out", f.out, "output directory for CSV files");
  app.add_option("--seed", f.seed, "Monte Carlo seed");
  app.add_option("--drops", f.drops, "Monte Carlo drops per point");
  app.add_option("--threads", f.threads, "worker threads (0: all cores)");
  app.add_option("--method", f.method, "analytic, mc or both");
  app.add_option("--tol", f.tol, "relative tolerance for quadrature and inversion");

  auto* cov = app.add_subcommand("coverage", "coverage at the configured operating point");
  auto* sweep = app.add_subcommand("sweep", "coverage over a parameter grid");
  auto* fig = app.add_subcommand("figure", "preset sweep reproducing a figure");
  auto* val = app.add_subcommand("validate", "Monte Carlo against analytic cross-checks");
  auto* self = app.add_subcommand("selftest", "inversion and derivative corpus");
  for (auto* sc : {cov, sweep}) {
    sc->add_option("--quantity", f.quantity, "coverage or cellfree");
    sc->add_option("--methods", f.methods, "comma list of analytic, mc, bound, closed_form");
  }
  sweep->add_option("--axis", f.axis, "theta_bar, h_bar, lambda, beta_db or n_antennas")->required();
  sweep->add_option("--grid", f.grid, "a,b,c or lo:hi:count[:log]")->required();
  fig->add_option("id", f.figure, "fig2a..fig6b")->required();
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*cov) return cmd_point_or_sweep(f, true);
    if (*sweep) return cmd_point_or_sweep(f, false);
    if (*fig) return cmd_figure(f);
    if (*val) {
      ValidationOptions o;
      o.drops = f.drops;
      o.seed = f.seed;
      o.threads = f.threads;
      return report(run_validation(base_config(f), o));
    }
    if (*self) return report(run_selftest());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
