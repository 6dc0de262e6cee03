#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "uavcov/model.hpp"

namespace uavcov {

// xoshiro256++ seeded through splitmix64. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;
  explicit Rng(std::uint64_t seed);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  // Uniform on the open interval (0, 1).
  double uniform();
  double exponential();
  // Gamma(n, 1) as a sum of n exponentials.
  double gamma_int(int n);

 private:
  std::uint64_t s_[4];
};

// Independent streams per (seed, drop, purpose) keep drops reproducible for any thread count,
// and let estimators redraw one purpose without disturbing the others.
enum class Stream : std::uint64_t { Count = 1, Projection, Mark, Los, Fading, Serving };

Rng make_stream(std::uint64_t seed, std::uint64_t drop, Stream purpose);

struct UavRealization {
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;
  double theta = 0.0;
  bool los = true;
  double gain_serving = 1.0;  // Gamma(N, 1), 1 for the infinite-array limit
  double gain_interf = 1.0;   // Exp(1)

  [[nodiscard]] double projection_sq() const { return x * x + y * y; }
  [[nodiscard]] double distance_sq() const { return projection_sq() + h * h; }
};

struct NetworkDrop {
  std::vector<UavRealization> uavs;
  double disk_radius_m = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

// Radius whose disk holds `target_count` UAVs on average.
double auto_disk_radius(double lambda, double target_count = 3000.0);

// Poisson(lambda pi R^2) UAVs with uniform projections on the disk; marks per the scenario.
NetworkDrop sample_drop(const NetworkConfig& cfg, const ScenarioSpec& scenario, double disk_radius,
                        std::uint64_t seed, std::uint64_t drop_index = 0);

// Elevation angle and altitude of one UAV at squared projection distance r2, drawn from the
// Mark stream. Shared by sample_drop and the Monte Carlo fast path.
struct Mark {
  double theta;
  double h;
};
class MarkDrawer {
 public:
  explicit MarkDrawer(const ScenarioSpec& scenario);
  Mark draw(double r2, Rng& rng) const;

 private:
  ScenarioSpec scenario_;
};

struct EffectiveDistance {
  double distance;  // L^(-1/alpha) |U|
  std::size_t index;
};

// Sorted ascending; with ell = 0 the NLoS entries are +inf.
std::vector<EffectiveDistance> effective_distances(const NetworkDrop& drop, double alpha, double ell);

// One row per UAV: drop_id,x,y,h,theta,los
void write_drop_csv_header(std::ostream& os);
void write_drop_csv(std::ostream& os, const NetworkDrop& drop);

}  // namespace uavcov
