#include "uavcov/model.hpp"

#include <limits>
#include <sstream>

namespace uavcov {

AntennaCount::AntennaCount(int n) : n_(n) {
  if (n < 1) throw ConfigError("antenna count must be >= 1");
}

int AntennaCount::value() const {
  if (is_infinite()) throw ConfigError("infinite antenna count has no finite value");
  return n_;
}

std::string AntennaCount::to_string() const { return is_infinite() ? "inf" : std::to_string(n_); }

void NetworkConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(lambda) || !(lambda > 0.0)) throw ConfigError("lambda must be positive and finite");
  if (!finite(power_mw) || !(power_mw > 0.0)) throw ConfigError("power_mw must be positive");
  if (!finite(noise_mw) || !(noise_mw >= 0.0)) throw ConfigError("noise power must be >= 0");
  if (!finite(alpha) || !(alpha > 2.0)) throw ConfigError("alpha must exceed 2");
  if (!finite(ell) || ell < 0.0 || ell > 1.0) throw ConfigError("ell must lie in [0, 1]");
  if (!finite(c1) || !(c1 > 0.0)) throw ConfigError("c1 must be positive");
  if (!finite(c2) || !(c2 > 0.0)) throw ConfigError("c2 must be positive");
  if (!finite(beta) || !(beta > 0.0)) throw ConfigError("beta must be positive");
}

NetworkConfig NetworkConfig::suburban() {
  NetworkConfig cfg;
  cfg.lambda = 1e-7;
  cfg.power_mw = 50.0;
  cfg.noise_mw = dbm_to_mw(-92.5);
  cfg.alpha = 2.75;
  cfg.ell = 0.25;
  cfg.c1 = 24.5811;
  cfg.c2 = 39.5971;
  cfg.n_antennas = AntennaCount(4);
  cfg.beta = db_to_linear(-10.0);
  return cfg;
}

ScenarioSpec ScenarioSpec::apil(AngleDistribution angle) {
  ScenarioSpec s;
  s.kind_ = ScenarioKind::Apil;
  s.angle_ = angle;
  return s;
}

ScenarioSpec ScenarioSpec::apdl(AltitudeDistribution altitude) {
  ScenarioSpec s;
  s.kind_ = ScenarioKind::Apdl;
  s.altitude_ = altitude;
  return s;
}

const AngleDistribution& ScenarioSpec::angle() const {
  if (!angle_) throw ConfigError("APDL scenario carries no elevation-angle distribution");
  return *angle_;
}

const AltitudeDistribution& ScenarioSpec::altitude() const {
  if (!altitude_) throw ConfigError("APIL scenario carries no altitude distribution");
  return *altitude_;
}

void validate(const AngleDistribution& dist) {
  auto check_angle = [](double t) {
    if (!std::isfinite(t) || t < 0.0 || t >= std::numbers::pi / 2.0)
      throw ConfigError("mean elevation angle must lie in [0, 90) degrees");
  };
  if (const auto* d = std::get_if<DegenerateAngle>(&dist)) {
    check_angle(d->theta_bar);
  } else {
    const auto& g = std::get<GammaTanAngle>(dist);
    check_angle(g.theta_bar);
    if (!(g.theta_bar > 0.0)) throw ConfigError("Gamma-tangent angle needs a positive mean angle");
    if (!std::isfinite(g.shape) || !(g.shape > 0.0)) throw ConfigError("Gamma shape must be > 0");
  }
}

void validate(const AltitudeDistribution& dist) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DegenerateAltitude>) {
          if (!std::isfinite(d.h_bar) || d.h_bar < 0.0) throw ConfigError("altitude must be >= 0");
        } else if constexpr (std::is_same_v<T, UniformAltitude>) {
          if (!std::isfinite(d.h_bar) || !std::isfinite(d.half_width) || d.half_width < 0.0)
            throw ConfigError("uniform altitude needs finite h_bar and half_width >= 0");
          if (d.h_bar < d.half_width) throw ConfigError("uniform altitude needs h_bar >= half_width");
        } else if constexpr (std::is_same_v<T, ExponentialAltitude>) {
          if (!std::isfinite(d.rate) || !(d.rate > 0.0)) throw ConfigError("altitude rate must be > 0");
        } else {
          if (!std::isfinite(d.h0) || !(d.h0 > 0.0)) throw ConfigError("h0 must be > 0");
        }
      },
      dist);
}

void validate(const ScenarioSpec& scenario) {
  if (scenario.is_apil())
    validate(scenario.angle());
  else
    validate(scenario.altitude());
}

std::string describe(const AngleDistribution& dist) {
  std::ostringstream os;
  if (const auto* d = std::get_if<DegenerateAngle>(&dist)) {
    os << "degenerate(theta_bar=" << rad_to_deg(d->theta_bar) << "deg)";
  } else {
    const auto& g = std::get<GammaTanAngle>(dist);
    os << "gamma_tan(shape=" << g.shape << ",theta_bar=" << rad_to_deg(g.theta_bar) << "deg)";
  }
  return os.str();
}

std::string describe(const AltitudeDistribution& dist) {
  std::ostringstream os;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DegenerateAltitude>)
          os << "degenerate(h_bar=" << d.h_bar << "m)";
        else if constexpr (std::is_same_v<T, UniformAltitude>)
          os << "uniform(h_bar=" << d.h_bar << "m,half_width=" << d.half_width << "m)";
        else if constexpr (std::is_same_v<T, ExponentialAltitude>)
          os << "exponential(rate=" << d.rate << "/m)";
        else
          os << "proportional(h0=" << d.h0 << ")";
      },
      dist);
  return os.str();
}

double los_probability(double theta, double c1, double c2) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > std::numbers::pi / 2.0)
    throw ConfigError("elevation angle must lie in [0, pi/2]");
  return los_probability_unchecked(theta, c1, c2);
}

std::pair<double, double> altitude_support(const AltitudeDistribution& dist) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [&](const auto& d) -> std::pair<double, double> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DegenerateAltitude>)
          return {d.h_bar, d.h_bar};
        else if constexpr (std::is_same_v<T, UniformAltitude>)
          return {d.h_bar - d.half_width, d.h_bar + d.half_width};
        else
          return {0.0, inf};
      },
      dist);
}

double mean_altitude(const AltitudeDistribution& dist) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, DegenerateAltitude>)
          return d.h_bar;
        else if constexpr (std::is_same_v<T, UniformAltitude>)
          return d.h_bar;
        else if constexpr (std::is_same_v<T, ExponentialAltitude>)
          return 1.0 / d.rate;
        else
          throw ConfigError("altitude proportional to projection distance has no finite mean");
      },
      dist);
}

}  // namespace uavcov
