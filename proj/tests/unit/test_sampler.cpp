#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "uavcov/analytic.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/sampler.hpp"

using namespace uavcov;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a = make_stream(7, 3, Stream::Mark);
  Rng b = make_stream(7, 3, Stream::Mark);
  Rng c = make_stream(7, 4, Stream::Mark);
  Rng d = make_stream(7, 3, Stream::Los);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
  double s = 0.0;
  Rng u(1);
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    s += v;
  }
  CHECK(s / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("UAV count is Poisson with mean lambda pi R^2") {
  auto cfg = NetworkConfig::suburban();
  cfg.lambda = 1e-5;
  const ScenarioSpec sc = ScenarioSpec::apil(DegenerateAngle{0.2});
  const int drops = 10000;
  double sum = 0.0;
  for (int d = 0; d < drops; ++d) sum += static_cast<double>(sample_drop(cfg, sc, 1e4, 11, d).uavs.size());
  const double mean = sum / drops;
  const double expect = kPi * 1e3;
  CHECK(std::abs(mean - expect) < 3.0 * std::sqrt(expect / drops));
}

TEST_CASE("realizations satisfy the marking relations") {
  auto cfg = NetworkConfig::suburban();
  cfg.lambda = 1e-5;
  const double tb = deg_to_rad(25.0);
  auto drop = sample_drop(cfg, ScenarioSpec::apil(DegenerateAngle{tb}), 2000.0, 5);
  REQUIRE(!drop.uavs.empty());
  for (const auto& u : drop.uavs) {
    CHECK(u.theta == tb);
    CHECK(u.h == doctest::Approx(std::sqrt(u.projection_sq()) * std::tan(u.theta)).epsilon(1e-9));
    CHECK(u.projection_sq() <= 2000.0 * 2000.0);
    CHECK(u.gain_interf > 0.0);
  }
  drop = sample_drop(cfg, ScenarioSpec::apil(GammaTanAngle{4.0, tb}), 2000.0, 5);
  for (const auto& u : drop.uavs) {
    CHECK(u.theta >= 0.0);
    CHECK(u.theta < kPi / 2);
    CHECK(u.h == doctest::Approx(std::sqrt(u.projection_sq()) * std::tan(u.theta)).epsilon(1e-9));
  }
  drop = sample_drop(cfg, ScenarioSpec::apdl(UniformAltitude{40.0, 5.0}), 2000.0, 5);
  for (const auto& u : drop.uavs) {
    CHECK(u.h >= 35.0);
    CHECK(u.h <= 45.0);
    CHECK(u.h == doctest::Approx(std::sqrt(u.projection_sq()) * std::tan(u.theta)).epsilon(1e-9));
  }
  cfg.n_antennas = AntennaCount(3);
  drop = sample_drop(cfg, ScenarioSpec::apdl(DegenerateAltitude{40.0}), 2000.0, 5);
  const auto again = sample_drop(cfg, ScenarioSpec::apdl(DegenerateAltitude{40.0}), 2000.0, 5);
  REQUIRE(drop.uavs.size() == again.uavs.size());
  for (std::size_t i = 0; i < drop.uavs.size(); ++i) {
    CHECK(drop.uavs[i].x == again.uavs[i].x);
    CHECK(drop.uavs[i].los == again.uavs[i].los);
    CHECK(drop.uavs[i].gain_serving == again.uavs[i].gain_serving);
  }
  CHECK_THROWS_AS(sample_drop(cfg, ScenarioSpec::apdl(DegenerateAltitude{40.0}), 0.0, 5), ConfigError);
}

TEST_CASE("effective distances") {
  NetworkDrop d;
  UavRealization u;
  u.x = 100.0;
  u.los = true;
  d.uavs = {u};
  CHECK(effective_distances(d, 2.75, 0.25).front().distance == doctest::Approx(100.0));
  d.uavs[0].los = false;
  CHECK(effective_distances(d, 4.0, 0.25).front().distance == doctest::Approx(141.4213562373095));
  CHECK(std::isinf(effective_distances(d, 4.0, 0.0).front().distance));
  CHECK(effective_distances(NetworkDrop{}, 4.0, 0.25).empty());
  UavRealization near;
  near.x = 10.0;
  d.uavs.push_back(near);
  const auto e = effective_distances(d, 4.0, 0.25);
  CHECK(e.front().index == 1);
  CHECK(e.front().distance <= e.back().distance);
}

TEST_CASE("nearest squared distance laws") {
  auto cfg = NetworkConfig::suburban();
  cfg.lambda = 1e-5;
  const double R = 1500.0;
  const int drops = 10000;
  // APDL, constant altitude: P[min |U|^2 <= y] = 1 - exp(-pi lambda (y - h^2)+)
  std::vector<double> m;
  for (int d = 0; d < drops; ++d) {
    const auto drop = sample_drop(cfg, ScenarioSpec::apdl(DegenerateAltitude{40.0}), R, 21, d);
    double best = INFINITY;
    for (const auto& u : drop.uavs) best = std::min(best, u.distance_sq());
    m.push_back(best);
  }
  auto cdf = [&](double y) { return -std::expm1(-kPi * cfg.lambda * std::max(y - 1600.0, 0.0)); };
  CHECK(ks_statistic(m, cdf) < ks_critical_value(m.size(), 0.01));

  // APIL, W = L = 1: Exp(pi lambda E[cos^2])
  const AngleDistribution a = GammaTanAngle{4.0, deg_to_rad(30.0)};
  const double rate = kPi * cfg.lambda * mean_cos2(a);
  m.clear();
  for (int d = 0; d < drops; ++d) {
    const auto drop = sample_drop(cfg, ScenarioSpec::apil(a), R, 22, d);
    double best = INFINITY;
    for (const auto& u : drop.uavs) best = std::min(best, u.distance_sq());
    m.push_back(best);
  }
  CHECK(ks_statistic(m, [&](double y) { return -std::expm1(-rate * y); }) < ks_critical_value(m.size(), 0.01));
}

TEST_CASE("projection order and Gamma law of the K-th projection") {
  auto cfg = NetworkConfig::suburban();
  cfg.lambda = 1e-5;
  const int drops = 5000;
  std::array<double, 3> sum{}, sq{};
  for (int d = 0; d < drops; ++d) {
    for (const auto& sc : {ScenarioSpec::apil(DegenerateAngle{0.4}), ScenarioSpec::apdl(DegenerateAltitude{40.0})}) {
      const auto drop = sample_drop(cfg, sc, 1500.0, 31, d);
      std::vector<std::size_t> by_u(drop.uavs.size()), by_x(drop.uavs.size());
      std::iota(by_u.begin(), by_u.end(), 0);
      std::iota(by_x.begin(), by_x.end(), 0);
      std::sort(by_u.begin(), by_u.end(),
                [&](auto i, auto j) { return drop.uavs[i].distance_sq() < drop.uavs[j].distance_sq(); });
      std::sort(by_x.begin(), by_x.end(),
                [&](auto i, auto j) { return drop.uavs[i].projection_sq() < drop.uavs[j].projection_sq(); });
      REQUIRE(by_u == by_x);
      if (sc.is_apil())
        for (int k = 0; k < 3; ++k) {
          const double x = drop.uavs[by_x[k]].projection_sq();
          sum[k] += x;
          sq[k] += x * x;
        }
    }
  }
  for (int k = 0; k < 3; ++k) {
    const double mean = sum[k] / drops;
    const double se = std::sqrt((sq[k] / drops - mean * mean) / drops);
    CHECK(std::abs(mean - (k + 1) / (kPi * cfg.lambda)) < 3.0 * se);
  }
}

TEST_CASE("drop csv dump") {
  auto cfg = NetworkConfig::suburban();
  cfg.lambda = 1e-5;
  const auto drop = sample_drop(cfg, ScenarioSpec::apil(DegenerateAngle{0.2}), 500.0, 1, 9);
  std::ostringstream os;
  write_drop_csv_header(os);
  write_drop_csv(os, drop);
  const std::string s = os.str();
  CHECK(s.rfind("drop_id,x,y,h,theta,los\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(drop.uavs.size()) + 1);
}
