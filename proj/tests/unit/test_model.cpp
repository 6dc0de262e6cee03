#include <doctest.h>

#include <cmath>
#include <random>

#include "uavcov/model.hpp"

using namespace uavcov;

TEST_CASE("los probability at the Table constants") {
  const auto cfg = NetworkConfig::suburban();
  CHECK(los_probability(0.0, cfg) == doctest::Approx(1.0 / (1.0 + 39.5971)).epsilon(1e-12));
  CHECK(std::abs(los_probability(std::numbers::pi / 2, cfg) - 1.0) < 1e-15);
  CHECK(los_probability(0.3, 24.5811, 1e-300) == doctest::Approx(1.0));
}

TEST_CASE("los probability is monotone on a fine grid") {
  const auto cfg = NetworkConfig::suburban();
  double prev = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = std::numbers::pi / 2 * i / 1000.0;
    const double p = los_probability(t, cfg);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("los probability rejects bad angles") {
  CHECK_THROWS_AS(los_probability(-0.1, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(los_probability(2.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(los_probability(std::nan(""), 1.0, 1.0), ConfigError);
}

TEST_CASE("unit conversions") {
  CHECK(dbm_to_mw(-92.5) == doctest::Approx(5.6234e-10).epsilon(1e-4));
  CHECK(db_to_linear(-10.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(db_to_linear(0.0) == 1.0);
  for (double x : {-120.0, -92.5, -3.0, 0.0, 7.25, 40.0}) {
    CHECK(std::abs(linear_to_db(db_to_linear(x)) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
    const double mw = dbm_to_mw(x);
    CHECK(std::abs(dbm_to_mw(mw_to_dbm(mw)) - mw) <= 1e-12 * mw);
  }
}

TEST_CASE("network config validation") {
  auto cfg = NetworkConfig::suburban();
  CHECK_NOTHROW(cfg.validate());
  cfg.alpha = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = NetworkConfig::suburban();
  cfg.ell = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = NetworkConfig::suburban();
  cfg.noise_mw = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(AntennaCount(0), ConfigError);
  CHECK(AntennaCount::infinite().is_infinite());
  CHECK(AntennaCount(8).value() == 8);
}

TEST_CASE("scenario carries exactly one distribution family") {
  auto apil = ScenarioSpec::apil(DegenerateAngle{0.2});
  CHECK(apil.is_apil());
  CHECK_THROWS_AS((void)apil.altitude(), ConfigError);
  auto apdl = ScenarioSpec::apdl(UniformAltitude{40.0, 5.0});
  CHECK_FALSE(apdl.is_apil());
  CHECK_THROWS_AS((void)apdl.angle(), ConfigError);
  CHECK_THROWS_AS(validate(AltitudeDistribution{UniformAltitude{3.0, 5.0}}), ConfigError);
  CHECK_THROWS_AS(validate(AngleDistribution{DegenerateAngle{std::numbers::pi / 2}}), ConfigError);
}

TEST_CASE("angle expectation: normalization and degenerate evaluation") {
  const AngleDistribution g = GammaTanAngle{4.0, deg_to_rad(20.0)};
  CHECK(expect_over_angle([](double) { return 1.0; }, g) == doctest::Approx(1.0).epsilon(1e-10));
  const AngleDistribution g_small = GammaTanAngle{0.5, deg_to_rad(30.0)};
  CHECK(expect_over_angle([](double) { return 1.0; }, g_small) == doctest::Approx(1.0).epsilon(1e-9));
  auto c2 = [](double t) { return std::cos(t) * std::cos(t); };
  CHECK(expect_over_angle(c2, DegenerateAngle{0.0}) == 1.0);
  const double t = 0.7;
  CHECK(expect_over_angle(c2, DegenerateAngle{t}) == c2(t));
}

TEST_CASE("angle expectation of cos^2 against Gamma sampling") {
  const double a = 4.0, theta_bar = deg_to_rad(20.0);
  const double rate = a / std::tan(theta_bar);
  std::mt19937_64 rng(12345);
  std::gamma_distribution<double> gam(a, 1.0 / rate);
  const int n = 1000000;
  double sum = 0, sum2 = 0, tan_sum = 0, tan_sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = gam(rng);
    const double c = 1.0 / (1.0 + u * u);
    sum += c;
    sum2 += c * c;
    tan_sum += u;
    tan_sum2 += u * u;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  const double analytic = expect_over_angle([](double th) { return std::cos(th) * std::cos(th); },
                                            GammaTanAngle{a, theta_bar});
  CHECK(std::abs(analytic - mean) < 3 * se);
  const double tmean = tan_sum / n;
  const double tse = std::sqrt((tan_sum2 / n - tmean * tmean) / n);
  CHECK(std::abs(tmean - std::tan(theta_bar)) < 3 * tse);
}

TEST_CASE("altitude expectation") {
  auto sq = [](double h) { return h * h; };
  CHECK(expect_over_altitude(sq, DegenerateAltitude{40.0}) == 1600.0);
  // E[H^2] for Uni[35,45] = 40^2 + 10^2/12
  CHECK(expect_over_altitude(sq, UniformAltitude{40.0, 5.0}) ==
        doctest::Approx(1600.0 + 100.0 / 12.0).epsilon(1e-12));
  CHECK(expect_over_altitude(sq, ExponentialAltitude{0.02}) == doctest::Approx(2.0 / 0.0004).epsilon(1e-9));
  CHECK_THROWS_AS(expect_over_altitude(sq, ProportionalAltitude{1.0}), ConfigError);
  CHECK(mean_altitude(UniformAltitude{40.0, 5.0}) == 40.0);
  CHECK(altitude_support(UniformAltitude{40.0, 5.0}).first == 35.0);
}
