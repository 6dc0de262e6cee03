#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "uavcov/analytic.hpp"
#include "uavcov/model.hpp"
#include "uavcov/sampler.hpp"

namespace uavcov {

struct McSpec {
  long n_drops = 100000;
  std::uint64_t seed = 1;
  std::optional<double> disk_radius;  // empty: auto_disk_radius(lambda, target_count)
  double target_count = 3000.0;
  double ci_level = 0.99;
  int threads = 0;  // 0: hardware concurrency
  // Add the mean contribution of UAVs beyond the disk to every interference/shot sum.
  bool tail_correction = true;
  // Sample on the full disk but keep only UAVs within this radius (tail correction from here).
  // Compares two truncation radii on common drops.
  std::optional<double> keep_radius;

  void validate() const;
  [[nodiscard]] double radius(double lambda) const;
  [[nodiscard]] double effective_radius(double lambda) const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long n_effective = 0;
};

// One scenario/antenna-count combination simulated on common drops.
struct McVariant {
  ScenarioSpec scenario;
  AntennaCount n_antennas;
};

// Single-UAV association coverage P[SINR >= beta]. Serving gain Gamma(N, 1), unit for
// N = infinity (the massive-array limit), interferer gains Exp(1).
McEstimate estimate_p_cov(const NetworkConfig& cfg, const ScenarioSpec& scenario, const McSpec& spec);
// Result index v * betas.size() + b; geometry, marks and fading are shared across entries.
std::vector<McEstimate> estimate_p_cov_sweep(const NetworkConfig& cfg, std::span<const McVariant> variants,
                                             std::span<const double> betas, const McSpec& spec);

// Cell-free coverage P[P sum G_i L_i |U_i|^-alpha >= beta sigma0], G_i ~ Gamma(N, 1).
McEstimate estimate_p_cf(const NetworkConfig& cfg, const ScenarioSpec& scenario, const McSpec& spec);
std::vector<McEstimate> estimate_p_cf_sweep(const NetworkConfig& cfg, std::span<const McVariant> variants,
                                            std::span<const double> betas, const McSpec& spec);

// E[exp(-s T_K)], T_K = sum of W_i L_i |U_i|^-alpha over all but the K nearest projections.
McEstimate estimate_shot_laplace(double s, int k, const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                 const WeightModel& w, const McSpec& spec);
std::vector<McEstimate> estimate_shot_laplace_sweep(std::span<const double> s, int k, const NetworkConfig& cfg,
                                                    const ScenarioSpec& scenario, const WeightModel& w,
                                                    const McSpec& spec);

// R* = max_i W_i L_i |U_i|^-alpha per drop (0 for an empty drop).
std::vector<double> sample_rstar(const NetworkConfig& cfg, const ScenarioSpec& scenario, const WeightModel& w,
                                 const McSpec& spec);

struct CcdfPoint {
  double r;
  double ccdf;
  double ci_low;
  double ci_high;
};
// Empirical P[R* > r] on `grid`, or on 40 log-spaced points spanning the sample when empty.
std::vector<CcdfPoint> estimate_distance_ccdf(const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                              const WeightModel& w, const McSpec& spec,
                                              std::span<const double> grid = {});

// Mean of W L |U|^-alpha summed over UAVs outside the disk (per unit E[W]).
double tail_mean_interference(const NetworkConfig& cfg, const ScenarioSpec& scenario, double radius);

// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
// Asymptotic critical value sqrt(-ln(level/2) / 2) / sqrt(n).
double ks_critical_value(std::size_t n, double level = 0.01);

// Two-sided standard normal quantile for a central interval of probability `level`.
double normal_quantile_two_sided(double level);
// Pairwise summation.
double pairwise_sum(std::span<const double> v);

}  // namespace uavcov
