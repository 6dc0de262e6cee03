#include "uavcov/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace uavcov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string cell(std::optional<double> v) { return v ? format_number(*v) : std::string(); }

AntennaCount antennas_from(double v) {
  if (std::isinf(v) && v > 0) return AntennaCount::infinite();
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) throw ConfigError("antenna count must be a positive integer or inf");
  return AntennaCount(static_cast<int>(v));
}

template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(nt), n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        f(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  };
  if (nt <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

std::string scenario_text(const ScenarioSpec& s) {
  return s.is_apil() ? "apil:" + describe(s.angle()) : "apdl:" + describe(s.altitude());
}

const std::vector<std::string> kTupleColumns = {"scenario", "lambda", "beta_db", "n_antennas", "alpha",
                                                "ell",      "power_mw", "noise_dbm", "c1",      "c2"};

std::vector<std::string> tuple_cells(const RunConfig& rc) {
  const auto& c = rc.network;
  return {scenario_text(rc.scenario),
          format_number(c.lambda),
          format_number(linear_to_db(c.beta)),
          c.n_antennas.to_string(),
          format_number(c.alpha),
          format_number(c.ell),
          format_number(c.power_mw),
          c.noise_mw > 0.0 ? format_number(mw_to_dbm(c.noise_mw)) : "-inf",
          format_number(c.c1),
          format_number(c.c2)};
}

std::optional<double> closed_form_value(const RunConfig& rc, Quantity q, const QuadratureSpec& quad) {
  const auto& c = rc.network;
  if (q == Quantity::Coverage) {
    if (rc.scenario.is_apil() && c.noise_mw == 0.0 && !c.n_antennas.is_infinite() && c.n_antennas.value() == 1)
      return p_cov_interference_limited(c.beta, c.alpha, quad);
    return std::nullopt;
  }
  if (c.alpha != 4.0) return std::nullopt;
  if (rc.scenario.is_apil()) return p_cf_apil_closed_form(c, rc.scenario.angle(), quad).value;
  if (std::holds_alternative<ProportionalAltitude>(rc.scenario.altitude()) && c.ell == 1.0)
    return p_cf_apdl_closed_form(c, rc.scenario.altitude(), quad).value;
  return std::nullopt;
}

void move_column(Table& t, const std::string& name, std::size_t to) {
  const std::size_t from = t.column(name);
  auto mv = [&](auto& v) {
    auto x = v[from];
    v.erase(v.begin() + static_cast<long>(from));
    v.insert(v.begin() + static_cast<long>(to), x);
  };
  mv(t.columns);
  for (auto& r : t.rows) mv(r);
}

void append(Table& dst, const Table& src) {
  if (dst.columns.empty()) dst.columns = src.columns;
  dst.rows.insert(dst.rows.end(), src.rows.begin(), src.rows.end());
}

std::vector<double> step_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) g.push_back(lo + i * step);
  return g;
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

SweepAxis parse_axis(const std::string& s) {
  if (s == "theta_bar") return SweepAxis::ThetaBar;
  if (s == "h_bar") return SweepAxis::HBar;
  if (s == "lambda") return SweepAxis::Lambda;
  if (s == "beta_db") return SweepAxis::BetaDb;
  if (s == "n_antennas") return SweepAxis::NAntennas;
  throw ConfigError("unknown sweep axis '" + s + "'");
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::ThetaBar: return "theta_bar";
    case SweepAxis::HBar: return "h_bar";
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::BetaDb: return "beta_db";
    case SweepAxis::NAntennas: return "n_antennas";
  }
  return "?";
}

std::string axis_column(SweepAxis a) {
  switch (a) {
    case SweepAxis::ThetaBar: return "theta_bar_deg";
    case SweepAxis::HBar: return "h_bar_m";
    case SweepAxis::Lambda: return "lambda_per_m2";
    case SweepAxis::BetaDb: return "beta_db_axis";
    case SweepAxis::NAntennas: return "n_antennas_axis";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  if (!analytic && !mc && !bound && !closed_form) throw ConfigError("sweep needs at least one method");
}

std::vector<double> make_grid(double lo, double hi, int count, bool log_spaced) {
  if (count < 1) throw ConfigError("grid count must be >= 1");
  if (!(hi >= lo)) throw ConfigError("grid needs max >= min");
  if (log_spaced && !(lo > 0.0)) throw ConfigError("log grid needs positive bounds");
  std::vector<double> g;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    g.push_back(log_spaced ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo));
  }
  return g;
}

std::vector<double> parse_grid(const std::string& s) {
  auto num = [&](const std::string& x) {
    if (x == "inf" || x == "Infinity") return kInf;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(x, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != x.size()) throw ConfigError("bad grid value '" + x + "'");
    return v;
  };
  auto split = [](const std::string& x, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(x);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
  };
  if (s.find(':') != std::string::npos) {
    const auto p = split(s, ':');
    if (p.size() < 3 || p.size() > 4 || (p.size() == 4 && p[3] != "log" && p[3] != "linear"))
      throw ConfigError("grid range must be lo:hi:count[:log|:linear]");
    const double c = num(p[2]);
    if (c != std::floor(c)) throw ConfigError("grid count must be an integer");
    return make_grid(num(p[0]), num(p[1]), static_cast<int>(c), p.size() == 4 && p[3] == "log");
  }
  std::vector<double> g;
  for (const auto& x : split(s, ',')) g.push_back(num(x));
  if (g.empty()) throw ConfigError("grid is empty");
  return g;
}

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ConfigError("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  const std::string& c = rows.at(row).at(column(name));
  if (c.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(c);
}

RunConfig apply_axis(const RunConfig& base, SweepAxis axis, double value) {
  RunConfig rc = base;
  switch (axis) {
    case SweepAxis::ThetaBar: {
      if (!rc.scenario.is_apil()) throw ConfigError("theta_bar sweeps need an APIL scenario");
      AngleDistribution a = rc.scenario.angle();
      if (auto* d = std::get_if<DegenerateAngle>(&a))
        d->theta_bar = deg_to_rad(value);
      else
        std::get<GammaTanAngle>(a).theta_bar = deg_to_rad(value);
      rc.scenario = ScenarioSpec::apil(a);
      break;
    }
    case SweepAxis::HBar: {
      if (rc.scenario.is_apil()) throw ConfigError("h_bar sweeps need an APDL scenario");
      AltitudeDistribution h = rc.scenario.altitude();
      if (auto* d = std::get_if<DegenerateAltitude>(&h))
        d->h_bar = value;
      else if (auto* u = std::get_if<UniformAltitude>(&h))
        u->h_bar = value;
      else
        throw ConfigError("h_bar sweeps need a degenerate or uniform altitude");
      rc.scenario = ScenarioSpec::apdl(h);
      break;
    }
    case SweepAxis::Lambda: rc.network.lambda = value; break;
    case SweepAxis::BetaDb: rc.network.beta = db_to_linear(value); break;
    case SweepAxis::NAntennas: rc.network.n_antennas = antennas_from(value); break;
  }
  rc.network.validate();
  validate(rc.scenario);
  return rc;
}

Table run_sweep(const RunConfig& base, const SweepSpec& spec, const SweepOptions& opt) {
  spec.validate();
  const std::size_t n = spec.grid.size();
  std::vector<RunConfig> cfgs;
  for (double v : spec.grid) cfgs.push_back(apply_axis(base, spec.axis, v));
  const std::string q = spec.quantity == Quantity::Coverage ? "p_cov" : "p_cf";

  std::vector<std::optional<double>> analytic(n), bound(n), closed(n);
  if (spec.analytic || spec.bound || spec.closed_form) {
    parallel_for(n, opt.threads, [&](std::size_t i) {
      const RunConfig& rc = cfgs[i];
      if (spec.quantity == Quantity::Coverage) {
        if (spec.analytic) analytic[i] = coverage(rc.network, rc.scenario, opt.analytic).value;
        if (spec.bound && !rc.network.n_antennas.is_infinite())
          bound[i] = coverage_lower_bound(rc.network, rc.scenario, opt.analytic).value;
      } else if (spec.analytic) {
        analytic[i] = coverage_cellfree(rc.network, rc.scenario, opt.analytic).value;
      }
      if (spec.closed_form) closed[i] = closed_form_value(rc, spec.quantity, opt.analytic.quad);
    });
  }

  std::vector<std::optional<McEstimate>> mc(n);
  if (spec.mc) {
    auto run = [&](const NetworkConfig& cfg, std::span<const McVariant> vs, std::span<const double> bs) {
      return spec.quantity == Quantity::Coverage ? estimate_p_cov_sweep(cfg, vs, bs, opt.mc)
                                                 : estimate_p_cf_sweep(cfg, vs, bs, opt.mc);
    };
    if (spec.axis == SweepAxis::Lambda) {
      for (std::size_t i = 0; i < n; ++i) {
        const McVariant v{cfgs[i].scenario, cfgs[i].network.n_antennas};
        const double b = cfgs[i].network.beta;
        mc[i] = run(cfgs[i].network, std::span(&v, 1), std::span(&b, 1)).front();
      }
    } else if (spec.axis == SweepAxis::BetaDb) {
      const McVariant v{base.scenario, base.network.n_antennas};
      std::vector<double> betas;
      for (const auto& rc : cfgs) betas.push_back(rc.network.beta);
      const auto est = run(base.network, std::span(&v, 1), betas);
      for (std::size_t i = 0; i < n; ++i) mc[i] = est[i];
    } else {
      std::vector<McVariant> vs;
      for (const auto& rc : cfgs) vs.push_back({rc.scenario, rc.network.n_antennas});
      const double b = base.network.beta;
      const auto est = run(base.network, vs, std::span(&b, 1));
      for (std::size_t i = 0; i < n; ++i) mc[i] = est[i];
    }
  }

  Table t;
  t.columns.push_back(axis_column(spec.axis));
  if (spec.analytic) t.columns.push_back(q + "_analytic");
  if (spec.bound) t.columns.push_back(q + "_bound");
  if (spec.closed_form) t.columns.push_back(q + "_closed_form");
  if (spec.mc) {
    for (const char* c : {"_mc", "_mc_std_error"}) t.columns.push_back(q + c);
    t.columns.push_back("ci_low");
    t.columns.push_back("ci_high");
  }
  t.columns.insert(t.columns.end(), kTupleColumns.begin(), kTupleColumns.end());
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> r{format_number(spec.grid[i])};
    if (spec.analytic) r.push_back(cell(analytic[i]));
    if (spec.bound) r.push_back(cell(bound[i]));
    if (spec.closed_form) r.push_back(cell(closed[i]));
    if (spec.mc) {
      r.push_back(format_number(mc[i]->mean));
      r.push_back(format_number(mc[i]->std_error));
      r.push_back(format_number(mc[i]->ci_low));
      r.push_back(format_number(mc[i]->ci_high));
    }
    const auto tup = tuple_cells(cfgs[i]);
    r.insert(r.end(), tup.begin(), tup.end());
    t.rows.push_back(std::move(r));
  }
  // p_cov_mc must sit right after the analytic column for the documented fig2a layout
  if (spec.mc) move_column(t, q + "_mc_std_error", t.column("ci_high"));
  return t;
}

std::vector<std::string> figure_ids() {
  return {"fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b"};
}

RunConfig figure_config(const std::string& id) {
  RunConfig rc;
  rc.network = NetworkConfig::suburban();
  rc.network.n_antennas = AntennaCount(4);
  rc.network.beta = db_to_linear(-10.0);
  const std::string f = id.substr(0, 4);
  if (id.size() != 5 || (id[4] != 'a' && id[4] != 'b')) throw ConfigError("unknown figure '" + id + "'");
  if (f == "fig2") {
    rc.network.lambda = 1e-7;
    rc.scenario = ScenarioSpec::apil(DegenerateAngle{deg_to_rad(20.0)});
  } else if (f == "fig3") {
    rc.network.lambda = 1e-7;
    rc.scenario = ScenarioSpec::apil(GammaTanAngle{4.0, deg_to_rad(20.0)});
  } else if (f == "fig4") {
    rc.network.lambda = 1e-5;
    rc.scenario = ScenarioSpec::apdl(DegenerateAltitude{40.0});
  } else if (f == "fig5") {
    rc.network.lambda = 1e-5;
    rc.scenario = ScenarioSpec::apdl(UniformAltitude{40.0, 5.0});
  } else if (f == "fig6") {
    rc.network.lambda = 1e-6;
    rc.scenario = id[4] == 'a' ? ScenarioSpec::apil(DegenerateAngle{deg_to_rad(5.0)})
                               : ScenarioSpec::apdl(DegenerateAltitude{40.0});
  } else {
    throw ConfigError("unknown figure '" + id + "'");
  }
  return rc;
}

Table run_figure(const std::string& id, bool analytic, bool mc, const SweepOptions& opt) {
  const RunConfig base = figure_config(id);
  const std::string f = id.substr(0, 4);
  SweepSpec spec;
  spec.analytic = analytic;
  spec.mc = mc;
  if (f == "fig6") {
    spec.axis = SweepAxis::BetaDb;
    spec.quantity = Quantity::CellFree;
    spec.grid = step_grid(-20.0, 20.0, 2.0);
    Table t;
    for (double n : {1.0, 2.0, 4.0, 8.0, kInf}) append(t, run_sweep(apply_axis(base, SweepAxis::NAntennas, n), spec, opt));
    move_column(t, "n_antennas", 1);
    return t;
  }
  if (f == "fig2" || f == "fig3") {
    spec.axis = SweepAxis::ThetaBar;
    // the Gamma law needs a positive mean angle
    spec.grid = step_grid(f == "fig2" ? 0.0 : 5.0, 85.0, 5.0);
  } else {
    spec.axis = SweepAxis::HBar;
    spec.grid = step_grid(10.0, 150.0, 10.0);
  }
  if (id[4] == 'a') return run_sweep(base, spec, opt);
  Table t;
  for (double lam : make_grid(1e-7, 1e-5, 9, true)) append(t, run_sweep(apply_axis(base, SweepAxis::Lambda, lam), spec, opt));
  move_column(t, "lambda", 1);
  return t;
}

void write_csv(std::ostream& os, const Table& t, const std::string& config_hash, std::uint64_t seed) {
  auto quote = [](const std::string& c) {
    if (c.find_first_of(",\"\n") == std::string::npos) return c;
    std::string out = "\"";
    for (char ch : c) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  };
  os << "# config_hash=" << config_hash << " seed=" << seed << '\n';
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << quote(t.columns[j]);
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t j = 0; j < r.size(); ++j) os << (j ? "," : "") << quote(r[j]);
    os << '\n';
  }
}

}  // namespace uavcov
