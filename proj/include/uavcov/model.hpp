#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>

#include "uavcov/errors.hpp"
#include "uavcov/quadrature.hpp"

namespace uavcov {

// Number of transmit antennas per UAV. Infinity selects the massive-array limit formulas,
// which treat the beamforming gain through its concentration G/N -> 1.
class AntennaCount {
 public:
  constexpr AntennaCount() = default;
  explicit AntennaCount(int n);
  static constexpr AntennaCount infinite() {
    AntennaCount a;
    a.n_ = 0;
    return a;
  }
  [[nodiscard]] constexpr bool is_infinite() const { return n_ == 0; }
  // Only meaningful for finite counts.
  [[nodiscard]] int value() const;
  [[nodiscard]] std::string to_string() const;
  friend constexpr bool operator==(AntennaCount, AntennaCount) = default;

 private:
  int n_ = 1;  // 0 encodes infinity
};

// Physical and network parameters, all in linear units (power in mW, beta as a ratio).
struct NetworkConfig {
  double lambda = 1e-7;        // UAV projection density, 1/m^2
  double power_mw = 50.0;      // P
  double noise_mw = 0.0;       // sigma_0
  double alpha = 2.75;         // path-loss exponent
  double ell = 0.25;           // NLoS attenuation
  double c1 = 24.5811;         // LoS model slope
  double c2 = 39.5971;         // LoS model offset
  AntennaCount n_antennas{4};
  double beta = 0.1;           // SINR threshold

  void validate() const;
  // Suburban values: P = 50 mW, sigma_0 = -92.5 dBm, alpha = 2.75, ell = 0.25,
  // (c1, c2) = (24.5811, 39.5971), N = 4, beta = -10 dB, lambda = 1e-7.
  static NetworkConfig suburban();
};

struct DegenerateAngle {
  double theta_bar;  // radians in [0, pi/2)
};

// tan(Theta) ~ Gamma(shape, shape / tan(theta_bar)), so E[tan Theta] = tan(theta_bar).
struct GammaTanAngle {
  double shape;
  double theta_bar;
  [[nodiscard]] double rate() const { return shape / std::tan(theta_bar); }
};

using AngleDistribution = std::variant<DegenerateAngle, GammaTanAngle>;

struct DegenerateAltitude {
  double h_bar;  // meters
};
// H ~ Uni[h_bar - half_width, h_bar + half_width]
struct UniformAltitude {
  double h_bar;
  double half_width;
};
// H ~ Exp(rate), rate in 1/m
struct ExponentialAltitude {
  double rate;
};
// H = h0 * |X|: the elevation angle is the constant arctan(h0).
struct ProportionalAltitude {
  double h0;
};

using AltitudeDistribution =
    std::variant<DegenerateAltitude, UniformAltitude, ExponentialAltitude, ProportionalAltitude>;

enum class ScenarioKind { Apil, Apdl };

class ScenarioSpec {
 public:
  static ScenarioSpec apil(AngleDistribution angle);
  static ScenarioSpec apdl(AltitudeDistribution altitude);

  [[nodiscard]] ScenarioKind kind() const { return kind_; }
  [[nodiscard]] bool is_apil() const { return kind_ == ScenarioKind::Apil; }
  // Throws ConfigError when the scenario carries the other distribution family.
  [[nodiscard]] const AngleDistribution& angle() const;
  [[nodiscard]] const AltitudeDistribution& altitude() const;

 private:
  ScenarioKind kind_ = ScenarioKind::Apil;
  std::optional<AngleDistribution> angle_;
  std::optional<AltitudeDistribution> altitude_;
};

// Samplers cap elevation angles here so that sec(Theta) stays finite.
inline constexpr double kMaxSampledAngle = std::numbers::pi / 2.0 - 1e-9;

void validate(const AngleDistribution& dist);
void validate(const AltitudeDistribution& dist);
void validate(const ScenarioSpec& scenario);

[[nodiscard]] std::string describe(const AngleDistribution& dist);
[[nodiscard]] std::string describe(const AltitudeDistribution& dist);

// LoS probability 1 / (1 + c2 exp(-c1 theta)) for elevation angle theta in [0, pi/2].
double los_probability(double theta, double c1, double c2);
inline double los_probability(double theta, const NetworkConfig& cfg) {
  return los_probability(theta, cfg.c1, cfg.c2);
}
// Unchecked variant for inner loops; theta must already be valid.
inline double los_probability_unchecked(double theta, double c1, double c2) {
  return 1.0 / (1.0 + c2 * std::exp(-c1 * theta));
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// E[f(Theta)] over an angle distribution. Degenerate evaluates f once; GammaTan integrates
// f(arctan u) against the Gamma density of u adaptively. f may return a real, complex or
// Eigen vector value. Throws NumericalError when the quadrature misses its tolerance.
template <class F>
auto expect_over_angle(F&& f, const AngleDistribution& dist, const QuadratureSpec& spec = {}) {
  using V = std::decay_t<decltype(f(0.0))>;
  if (const auto* d = std::get_if<DegenerateAngle>(&dist)) return V(f(d->theta_bar));
  const auto& g = std::get<GammaTanAngle>(dist);
  const double a = g.shape;
  const double rate = g.rate();
  const double log_norm = std::lgamma(a);
  // x = rate * tan(Theta) ~ Gamma(a, 1); w = x^a removes the x^(a-1) singularity.
  auto in_w = [&](double w) {
    const double x = std::pow(w, 1.0 / a);
    const double theta = std::min(std::atan(x / rate), kMaxSampledAngle);
    return V(f(theta) * (std::exp(-x - log_norm) / a));
  };
  auto in_x = [&](double x) {
    const double theta = std::min(std::atan(x / rate), kMaxSampledAngle);
    return V(f(theta) * std::exp((a - 1.0) * std::log(x) - x - log_norm));
  };
  const double knee = std::max(a - 1.0, 0.0) + 6.0 * std::sqrt(a) + 2.0;
  QuadResult<V> head = a < 1.0 ? integrate(in_w, 0.0, std::pow(knee, a), spec)
                               : integrate(in_x, 0.0, knee, spec);
  auto tail = integrate_to_infinity(in_x, knee, std::sqrt(a) + 1.0, spec.scaled(1.0));
  require_converged(head, "angle expectation");
  require_converged(tail, "angle expectation tail");
  V out = head.value;
  out += tail.value;
  return out;
}

// Smallest and largest altitude in the support (upper bound may be +inf).
std::pair<double, double> altitude_support(const AltitudeDistribution& dist);
double mean_altitude(const AltitudeDistribution& dist);

// E[g(H)] over an altitude distribution with H independent of the projection.
// `kinks` lists altitudes where g is not smooth. ProportionalAltitude has no stand-alone
// altitude law and is rejected.
template <class G>
auto expect_over_altitude(G&& g, const AltitudeDistribution& dist, const QuadratureSpec& spec = {},
                          std::span<const double> kinks = {}) {
  using V = std::decay_t<decltype(g(0.0))>;
  if (const auto* d = std::get_if<DegenerateAltitude>(&dist)) return V(g(d->h_bar));
  if (const auto* u = std::get_if<UniformAltitude>(&dist)) {
    if (u->half_width == 0.0) return V(g(u->h_bar));
    const double lo = u->h_bar - u->half_width;
    const double hi = u->h_bar + u->half_width;
    auto r = integrate([&](double h) { return V(g(h)); }, lo, hi, spec, kinks);
    require_converged(r, "altitude expectation");
    V out = r.value;
    out *= 1.0 / (hi - lo);
    return out;
  }
  if (const auto* e = std::get_if<ExponentialAltitude>(&dist)) {
    const double mu = e->rate;
    auto weighted = [&](double h) { return V(g(h) * (mu * std::exp(-mu * h))); };
    double knee = 8.0 / mu;
    for (double k : kinks) knee = std::max(knee, k);
    auto head = integrate(weighted, 0.0, knee, spec, kinks);
    auto tail = integrate_to_infinity(weighted, knee, 1.0 / mu, spec);
    require_converged(head, "altitude expectation");
    require_converged(tail, "altitude expectation tail");
    V out = head.value;
    out += tail.value;
    return out;
  }
  throw ConfigError("altitude proportional to projection distance has no stand-alone law");
}

}  // namespace uavcov
