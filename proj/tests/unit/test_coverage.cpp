#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "uavcov/analytic.hpp"
#include "uavcov/coverage.hpp"

using namespace uavcov;
namespace bq = boost::math::quadrature;

namespace {

constexpr double kPi = std::numbers::pi;

double ref_IG(double u, double alpha) {
  bq::exp_sinh<double> es;
  return es.integrate([&](double x) { return u / (u + std::pow(1.0 + x, alpha / 2.0)); }, 1e-13);
}

// E over D ~ Exp(c) of exp(-u sigma0 D^(alpha/2) / P - c D I_G(u))
double ref_laplace_z(double u, const NetworkConfig& cfg, double om) {
  const double c = kPi * cfg.lambda * om;
  const double ig = ref_IG(u, cfg.alpha);
  const double np = cfg.noise_mw / cfg.power_mw;
  bq::exp_sinh<double> es;
  return es.integrate(
      [&](double x) { return std::exp(-x * (1.0 + ig) - u * np * std::pow(x / c, cfg.alpha / 2.0)); }, 1e-12);
}

NetworkConfig table() { return NetworkConfig::suburban(); }

}  // namespace

TEST_CASE("interference-limited single antenna") {
  auto cfg = table();
  cfg.noise_mw = 0.0;
  cfg.n_antennas = AntennaCount(1);
  const AngleDistribution a = DegenerateAngle{deg_to_rad(20.0)};
  for (double bdb : {-10.0, 0.0, 10.0}) {
    cfg.beta = db_to_linear(bdb);
    const double ref = 1.0 / (1.0 + ref_IG(cfg.beta, cfg.alpha));
    CHECK(p_cov_interference_limited(cfg.beta, cfg.alpha) == doctest::Approx(ref).epsilon(1e-10));
    for (double lam : {1e-7, 1e-6, 1e-5}) {
      cfg.lambda = lam;
      CHECK(std::abs(p_cov_apil(cfg, a).value - ref) < 1e-9);
    }
    // Jensen with no noise: exp(-I_G)
    CHECK(p_cov_apil_lower_bound(cfg, a).value == doctest::Approx(std::exp(-(1.0 / ref - 1.0))).epsilon(1e-10));
  }
}

TEST_CASE("noisy coverage against independent quadrature") {
  auto cfg = table();
  const AngleDistribution a = DegenerateAngle{deg_to_rad(20.0)};
  const double om = omega(a, cfg);
  cfg.n_antennas = AntennaCount(1);
  CHECK(p_cov_apil(cfg, a).value == doctest::Approx(ref_laplace_z(cfg.beta, cfg, om)).epsilon(1e-8));

  // N = 2: d/dt [t L(1/t)] at t = 1/beta by a fourth-order central difference.
  cfg.n_antennas = AntennaCount(2);
  for (double bdb : {-10.0, 5.0}) {
    cfg.beta = db_to_linear(bdb);
    const double t0 = 1.0 / cfg.beta;
    const double h = 1e-3 * t0;
    auto g = [&](double t) { return t * ref_laplace_z(1.0 / t, cfg, om); };
    const double d = (-g(t0 + 2 * h) + 8 * g(t0 + h) - 8 * g(t0 - h) + g(t0 - 2 * h)) / (12 * h);
    CHECK(p_cov_apil(cfg, a).value == doctest::Approx(d).epsilon(1e-6));
  }
}

TEST_CASE("APDL with altitude proportional to projection reduces to APIL") {
  auto cfg = table();
  const double theta = deg_to_rad(20.0);
  const AngleDistribution a = DegenerateAngle{theta};
  const AltitudeDistribution h = ProportionalAltitude{std::tan(theta)};
  for (int n : {1, 4}) {
    cfg.n_antennas = AntennaCount(n);
    CHECK(std::abs(p_cov_apdl(cfg, h).value - p_cov_apil(cfg, a).value) < 1e-6);
    CHECK(std::abs(p_cov_apdl_lower_bound(cfg, h).value - p_cov_apil_lower_bound(cfg, a).value) < 1e-6);
  }
  cfg.n_antennas = AntennaCount::infinite();
  CHECK(std::abs(p_cov_apdl_massive(cfg, h).value - p_cov_apil_massive(cfg, a).value) < 1e-6);
}

TEST_CASE("serving geometry moments") {
  auto cfg = table();
  const AngleDistribution a = DegenerateAngle{deg_to_rad(20.0)};
  const double c = kPi * cfg.lambda * omega(a, cfg);
  const auto geo = make_serving_geometry(cfg, ScenarioSpec::apil(a), {});
  CHECK(geo->mean_distance_power(1.0) == doctest::Approx(1.0 / c).epsilon(1e-12));
  CHECK(geo->distance_cdf(1.0 / c) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  const auto apdl = make_serving_geometry(cfg, ScenarioSpec::apdl(DegenerateAltitude{40.0}), {});
  // the distance law integrates to one
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(1);
  CHECK(std::abs(apdl->laplace_z(zero)[0] - 1.0) < 1e-9);
  CHECK(apdl->distance_cdf(1e12) == doctest::Approx(1.0));
}

TEST_CASE("single-antenna Jensen bound lies below the exact value") {
  auto cfg = table();
  cfg.n_antennas = AntennaCount(1);
  const AngleDistribution a = DegenerateAngle{deg_to_rad(20.0)};
  const AltitudeDistribution h = DegenerateAltitude{40.0};
  for (double bdb : {-20.0, -10.0, 0.0, 10.0}) {
    cfg.beta = db_to_linear(bdb);
    CHECK(p_cov_apil_lower_bound(cfg, a).value <= p_cov_apil(cfg, a).value + 1e-9);
    CHECK(p_cov_apdl_lower_bound(cfg, h).value <= p_cov_apdl(cfg, h).value + 1e-9);
  }
}

TEST_CASE("coverage falls with the threshold and cell-free coverage dominates") {
  auto cfg = table();
  cfg.lambda = 1e-6;
  const AngleDistribution a = DegenerateAngle{deg_to_rad(5.0)};
  double prev = 1.0;
  for (double bdb = -20.0; bdb <= 20.0; bdb += 4.0) {
    cfg.beta = db_to_linear(bdb);
    const double p = p_cov_apil(cfg, a).value;
    CHECK(p <= prev + 1e-9);
    CHECK(p_cf_apil(cfg, a).value >= p - 1e-9);
    prev = p;
  }
  cfg.beta = db_to_linear(60.0);
  CHECK(p_cov_apil(cfg, a).value < 1e-3);
}

TEST_CASE("cell-free closed forms match the inversion path") {
  auto cfg = table();
  cfg.alpha = 4.0;
  cfg.lambda = 1e-6;
  const AngleDistribution a = DegenerateAngle{deg_to_rad(5.0)};
  for (auto n : {AntennaCount(1), AntennaCount(4), AntennaCount::infinite()}) {
    cfg.n_antennas = n;
    for (double bdb : {-20.0, 0.0, 20.0}) {
      cfg.beta = db_to_linear(bdb);
      const double ref = p_cf_apil_closed_form(cfg, a).value;
      CHECK(p_cf_apil(cfg, a).value == doctest::Approx(ref).epsilon(1e-6));
    }
  }
  // erf form written out for N = 4
  cfg.n_antennas = AntennaCount(4);
  cfg.beta = 1.0;
  const double expect = std::erf(std::pow(kPi, 1.5) * cfg.lambda * omega(a, cfg) / (2.0 * 6.0) *
                                 std::sqrt(cfg.power_mw / cfg.noise_mw) * std::tgamma(4.5));
  CHECK(p_cf_apil_closed_form(cfg, a).value == doctest::Approx(expect).epsilon(1e-14));

  cfg.ell = 1.0;
  const AltitudeDistribution h = ProportionalAltitude{0.5};
  for (double bdb : {-10.0, 10.0}) {
    cfg.beta = db_to_linear(bdb);
    CHECK(p_cf_apdl(cfg, h).value == doctest::Approx(p_cf_apdl_closed_form(cfg, h).value).epsilon(1e-6));
  }
  cfg.alpha = 3.0;
  CHECK_THROWS_AS((void)p_cf_apil_closed_form(cfg, a), ConfigError);
  CHECK_THROWS_AS((void)p_cf_apdl_closed_form(cfg, DegenerateAltitude{40.0}), ConfigError);
}

TEST_CASE("noiseless cell-free coverage is certain") {
  auto cfg = table();
  cfg.noise_mw = 0.0;
  CHECK(p_cf_apil(cfg, DegenerateAngle{0.3}).value == 1.0);
  CHECK(p_cf_apdl(cfg, DegenerateAltitude{40.0}).value == 1.0);
}

TEST_CASE("distribution insensitivity") {
  auto cfg = table();
  cfg.lambda = 1e-5;
  const double d = p_cov_apdl(cfg, DegenerateAltitude{40.0}).value;
  const double u = p_cov_apdl(cfg, UniformAltitude{40.0, 5.0}).value;
  CHECK(std::abs(d - u) < 0.05);
  cfg.lambda = 1e-7;
  const double th = deg_to_rad(30.0);
  CHECK(std::abs(p_cov_apil(cfg, DegenerateAngle{th}).value - p_cov_apil(cfg, GammaTanAngle{4.0, th}).value) < 0.05);
}

TEST_CASE("massive array limit") {
  auto cfg = table();
  cfg.n_antennas = AntennaCount::infinite();
  const AngleDistribution a = DegenerateAngle{deg_to_rad(20.0)};
  CHECK_THROWS_AS((void)p_cov_apil(cfg, a), ConfigError);
  CHECK_THROWS_AS((void)p_cov_apil_lower_bound(cfg, a), ConfigError);
  cfg.beta = 1e-4;
  CHECK(p_cov_apil_massive(cfg, a).value > 0.99);
  // noiseless unit-gain limit through the alternate contour
  cfg.noise_mw = 0.0;
  cfg.beta = 1.0;
  const auto geo = make_serving_geometry(cfg, ScenarioSpec::apil(a), {});
  InversionSpec talbot;
  const double ref = invert_laplace_batch(
      [&](const Eigen::VectorXcd& s) -> Eigen::VectorXcd {
        return (geo->laplace_z(s).array() / s.array()).matrix();
      },
      1.0, talbot);
  CHECK(coverage(cfg, ScenarioSpec::apil(a)).value == doctest::Approx(ref).epsilon(1e-6));
}
