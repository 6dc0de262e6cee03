#include <doctest.h>

#include <cmath>

#include "uavcov/analytic.hpp"
#include "uavcov/coverage.hpp"
#include "uavcov/montecarlo.hpp"

using namespace uavcov;

TEST_CASE("statistics helpers") {
  CHECK(normal_quantile_two_sided(0.99) == doctest::Approx(2.5758293035489).epsilon(1e-10));
  CHECK(ks_critical_value(10000, 0.01) == doctest::Approx(0.016276).epsilon(1e-4));
  std::vector<double> v(1001, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.1).epsilon(1e-14));
  std::vector<double> u;
  for (int i = 0; i < 1000; ++i) u.push_back((i + 0.5) / 1000.0);
  CHECK(ks_statistic(u, [](double x) { return x; }) == doctest::Approx(0.0005));
}

TEST_CASE("empty networks give zero coverage and s = 0 gives a unit transform") {
  auto cfg = NetworkConfig::suburban();
  cfg.lambda = 1e-13;
  McSpec spec;
  spec.n_drops = 500;
  spec.disk_radius = 100.0;
  const auto sc = ScenarioSpec::apil(DegenerateAngle{0.3});
  const auto e = estimate_p_cov(cfg, sc, spec);
  CHECK(e.mean == 0.0);
  CHECK(e.std_error == 0.0);
  cfg.lambda = 1e-6;
  spec.disk_radius.reset();
  const auto l = estimate_shot_laplace(0.0, 0, cfg, sc, UnitWeight{}, spec);
  CHECK(l.mean == 1.0);
  CHECK(l.std_error == 0.0);
  cfg.noise_mw = 0.0;
  CHECK(estimate_p_cf(cfg, sc, spec).mean == 1.0);
}

TEST_CASE("results do not depend on the thread count") {
  auto cfg = NetworkConfig::suburban();
  McSpec spec;
  spec.n_drops = 1500;
  spec.target_count = 300;
  const auto sc = ScenarioSpec::apdl(UniformAltitude{40.0, 5.0});
  spec.threads = 1;
  const auto a = estimate_p_cov(cfg, sc, spec);
  const auto la = estimate_shot_laplace(1e8, 1, cfg, sc, ExpWeight{1.0}, spec);
  spec.threads = 3;
  const auto b = estimate_p_cov(cfg, sc, spec);
  const auto lb = estimate_shot_laplace(1e8, 1, cfg, sc, ExpWeight{1.0}, spec);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(la.mean == lb.mean);
}

TEST_CASE("interference-limited coverage and CI calibration") {
  auto cfg = NetworkConfig::suburban();
  cfg.noise_mw = 0.0;
  cfg.n_antennas = AntennaCount(1);
  cfg.lambda = 1e-6;
  const auto sc = ScenarioSpec::apil(DegenerateAngle{deg_to_rad(20.0)});
  const double truth = p_cov_interference_limited(cfg.beta, cfg.alpha);
  McSpec spec;
  spec.n_drops = 1000;
  spec.target_count = 300;
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    spec.seed = seed;
    const auto e = estimate_p_cov(cfg, sc, spec);
    REQUIRE(e.ci_low <= e.mean);
    REQUIRE(e.mean <= e.ci_high);
    if (e.ci_low <= truth && truth <= e.ci_high) ++covered;
  }
  CHECK(covered >= 95);
}

TEST_CASE("truncation sensitivity on common drops") {
  auto cfg = NetworkConfig::suburban();
  const auto sc = ScenarioSpec::apil(DegenerateAngle{deg_to_rad(20.0)});
  McSpec spec;
  spec.n_drops = 4000;
  spec.target_count = 4.0 * 3000.0;
  const auto wide = estimate_p_cov(cfg, sc, spec);
  spec.keep_radius = spec.radius(cfg.lambda) / 2.0;
  const auto base = estimate_p_cov(cfg, sc, spec);
  CHECK(std::abs(wide.mean - base.mean) < base.std_error);
}

TEST_CASE("cell-free estimate against the erf form") {
  auto cfg = NetworkConfig::suburban();
  cfg.alpha = 4.0;
  cfg.lambda = 1e-6;
  const AngleDistribution a = DegenerateAngle{deg_to_rad(5.0)};
  McSpec spec;
  spec.n_drops = 20000;
  std::vector<McVariant> vs{{ScenarioSpec::apil(a), AntennaCount(1)}, {ScenarioSpec::apil(a), AntennaCount(4)}};
  std::vector<double> betas{db_to_linear(-20.0), db_to_linear(20.0)};
  const auto est = estimate_p_cf_sweep(cfg, vs, betas, spec);
  for (std::size_t v = 0; v < vs.size(); ++v)
    for (std::size_t b = 0; b < betas.size(); ++b) {
      auto c = cfg;
      c.n_antennas = vs[v].n_antennas;
      c.beta = betas[b];
      const double ref = p_cf_apil_closed_form(c, a).value;
      const auto& e = est[v * betas.size() + b];
      CHECK(e.ci_low - 1e-3 <= ref);
      CHECK(ref <= e.ci_high + 1e-3);
    }
}

TEST_CASE("distance ccdf table") {
  auto cfg = NetworkConfig::suburban();
  cfg.lambda = 1e-5;
  McSpec spec;
  spec.n_drops = 2000;
  spec.disk_radius = 2000.0;
  const auto t = estimate_distance_ccdf(cfg, ScenarioSpec::apil(DegenerateAngle{0.3}), UnitWeight{}, spec);
  REQUIRE(t.size() == 40);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].ccdf <= t[i - 1].ccdf);
  for (const auto& p : t) {
    CHECK(p.ci_low <= p.ccdf);
    CHECK(p.ccdf <= p.ci_high);
  }
}

TEST_CASE("invalid Monte Carlo requests") {
  McSpec spec;
  spec.n_drops = 10;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec.n_drops = 1000;
  spec.ci_level = 1.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}
