#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavcov/config.hpp"
#include "uavcov/coverage.hpp"
#include "uavcov/montecarlo.hpp"

namespace uavcov {

enum class SweepAxis { ThetaBar, HBar, Lambda, BetaDb, NAntennas };
enum class Quantity { Coverage, CellFree };

SweepAxis parse_axis(const std::string& s);
std::string to_string(SweepAxis a);
// CSV column carrying the axis value, e.g. theta_bar_deg.
std::string axis_column(SweepAxis a);

struct SweepSpec {
  SweepAxis axis = SweepAxis::BetaDb;
  std::vector<double> grid;  // axis units: degrees, meters, 1/m^2, dB, antennas (+inf allowed)
  Quantity quantity = Quantity::Coverage;
  bool analytic = true;
  bool mc = false;
  bool bound = false;
  bool closed_form = false;

  void validate() const;
};

// count points from lo to hi, linear or logarithmic.
std::vector<double> make_grid(double lo, double hi, int count, bool log_spaced);
// "a,b,c" or "lo:hi:count" or "lo:hi:count:log".
std::vector<double> parse_grid(const std::string& s);

// Row-major string table; numeric cells are printed with 10 significant digits, unavailable
// values are empty.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column(const std::string& name) const;
  [[nodiscard]] double number(std::size_t row, const std::string& name) const;
};

struct SweepOptions {
  CoverageOptions analytic;
  McSpec mc;
  int threads = 0;  // analytic grid points evaluated concurrently
};

// Applies one axis value to a configuration; throws ConfigError when the axis does not fit the
// scenario (theta_bar on an APDL scenario, for example).
RunConfig apply_axis(const RunConfig& base, SweepAxis axis, double value);

Table run_sweep(const RunConfig& base, const SweepSpec& spec, const SweepOptions& opt);

// Figure presets: fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b, fig6a, fig6b.
// 2D presets tabulate one axis; 3D presets (the "b" variants of 2-5) emit long format over
// (axis, lambda). fig6a/fig6b tabulate cell-free coverage against beta for N in {1,2,4,8,inf}.
std::vector<std::string> figure_ids();
Table run_figure(const std::string& id, bool analytic, bool mc, const SweepOptions& opt);
// Suburban configuration of a preset at its operating point.
RunConfig figure_config(const std::string& id);

// "# config_hash=... seed=..." then a header row and the data rows.
void write_csv(std::ostream& os, const Table& t, const std::string& config_hash, std::uint64_t seed);
std::string format_number(double v);

}  // namespace uavcov
