#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "uavcov/config.hpp"
#include "uavcov/coverage.hpp"
#include "uavcov/errors.hpp"
#include "uavcov/inversion.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/sweep.hpp"
#include "uavcov/validation.hpp"

namespace py = pybind11;
using namespace uavcov;

namespace {

// Configurations cross the boundary as JSON text in the config-file schema.
RunConfig parse(const std::string& text) { return parse_config(nlohmann::json::parse(text.empty() ? "{}" : text)); }

py::dict estimate_dict(const McEstimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["ci_low"] = e.ci_low;
  d["ci_high"] = e.ci_high;
  d["n_effective"] = e.n_effective;
  return d;
}

McSpec mc(long drops, std::uint64_t seed, int threads) {
  McSpec s;
  s.n_drops = drops;
  s.seed = seed;
  s.threads = threads;
  return s;
}

py::tuple table_tuple(const Table& t) { return py::make_tuple(t.columns, t.rows); }

}  // namespace

PYBIND11_MODULE(_uavcov, m) {
  m.doc() = "Coverage of UAV networks: analytic evaluation and Monte Carlo";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(config_error.ptr(), e.what());
    } catch (const NumericalError& e) {
      PyErr_SetString(numerical_error.ptr(), e.what());
    } catch (const nlohmann::json::exception& e) {
      PyErr_SetString(config_error.ptr(), e.what());
    }
  });

  m.def("normalize_config", [](const std::string& c) { return to_json(parse(c)).dump(); }, py::arg("config"));
  m.def("config_hash", [](const std::string& c) { return config_hash(parse(c)); }, py::arg("config"));

  m.def("coverage", [](const std::string& c) {
    const auto rc = parse(c);
    return coverage(rc.network, rc.scenario).value;
  }, py::arg("config"));
  m.def("coverage_lower_bound", [](const std::string& c) {
    const auto rc = parse(c);
    return coverage_lower_bound(rc.network, rc.scenario).value;
  }, py::arg("config"));
  m.def("coverage_cellfree", [](const std::string& c) {
    const auto rc = parse(c);
    return coverage_cellfree(rc.network, rc.scenario).value;
  }, py::arg("config"));
  m.def("p_cov_interference_limited", [](double beta, double alpha) { return p_cov_interference_limited(beta, alpha); },
        py::arg("beta"), py::arg("alpha"));

  m.def("estimate_coverage", [](const std::string& c, long drops, std::uint64_t seed, int threads) {
    const auto rc = parse(c);
    McEstimate e;
    {
      py::gil_scoped_release release;
      e = estimate_p_cov(rc.network, rc.scenario, mc(drops, seed, threads));
    }
    return estimate_dict(e);
  }, py::arg("config"), py::arg("drops") = 100000, py::arg("seed") = 1, py::arg("threads") = 0);
  m.def("estimate_cellfree", [](const std::string& c, long drops, std::uint64_t seed, int threads) {
    const auto rc = parse(c);
    McEstimate e;
    {
      py::gil_scoped_release release;
      e = estimate_p_cf(rc.network, rc.scenario, mc(drops, seed, threads));
    }
    return estimate_dict(e);
  }, py::arg("config"), py::arg("drops") = 100000, py::arg("seed") = 1, py::arg("threads") = 0);

  m.def("invert_laplace", [](const std::function<std::complex<double>(std::complex<double>)>& F, double t,
                             const std::string& method, int nodes) {
    InversionSpec spec;
    if (method == "talbot") spec.method = InversionMethod::Talbot;
    else if (method == "euler") spec.method = InversionMethod::Euler;
    else throw ConfigError("method must be talbot or euler");
    spec.nodes = nodes;
    return invert_laplace(F, t, spec);
  }, py::arg("F"), py::arg("t"), py::arg("method") = "talbot", py::arg("nodes") = 32);

  m.def("sweep", [](const std::string& c, const std::string& axis, const std::vector<double>& grid,
                    const std::string& quantity, const std::vector<std::string>& methods, long drops,
                    std::uint64_t seed, int threads) {
    SweepSpec s;
    s.axis = parse_axis(axis);
    s.grid = grid;
    if (quantity == "coverage") s.quantity = Quantity::Coverage;
    else if (quantity == "cellfree") s.quantity = Quantity::CellFree;
    else throw ConfigError("quantity must be coverage or cellfree");
    s.analytic = s.mc = s.bound = s.closed_form = false;
    for (const auto& mth : methods) {
      if (mth == "analytic") s.analytic = true;
      else if (mth == "mc") s.mc = true;
      else if (mth == "bound") s.bound = true;
      else if (mth == "closed_form") s.closed_form = true;
      else throw ConfigError("unknown method '" + mth + "'");
    }
    SweepOptions o;
    o.mc = mc(drops, seed, threads);
    o.threads = threads;
    const auto rc = parse(c);
    Table t;
    {
      py::gil_scoped_release release;
      t = run_sweep(rc, s, o);
    }
    return table_tuple(t);
  }, py::arg("config"), py::arg("axis"), py::arg("grid"), py::arg("quantity") = "coverage",
     py::arg("methods") = std::vector<std::string>{"analytic"}, py::arg("drops") = 100000, py::arg("seed") = 1,
     py::arg("threads") = 0);

  m.def("figure_ids", &figure_ids);
  m.def("figure", [](const std::string& id, bool analytic, bool mc_on, long drops, std::uint64_t seed, int threads) {
    SweepOptions o;
    o.mc = mc(drops, seed, threads);
    o.threads = threads;
    Table t;
    {
      py::gil_scoped_release release;
      t = run_figure(id, analytic, mc_on, o);
    }
    return table_tuple(t);
  }, py::arg("id"), py::arg("analytic") = true, py::arg("mc") = false, py::arg("drops") = 100000,
     py::arg("seed") = 1, py::arg("threads") = 0);

  m.def("selftest", [] {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& r : run_selftest()) out.emplace_back(r.name, r.pass, r.detail);
    return out;
  });
}
