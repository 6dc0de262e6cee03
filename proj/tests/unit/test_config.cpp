#include <doctest.h>

#include "uavcov/config.hpp"

using namespace uavcov;
using nlohmann::json;

TEST_CASE("config defaults follow the suburban table") {
  const auto cfg = parse_config(json::object());
  CHECK(cfg.network.lambda == 1e-7);
  CHECK(cfg.network.power_mw == 50.0);
  CHECK(cfg.network.noise_mw == doctest::Approx(dbm_to_mw(-92.5)));
  CHECK(cfg.network.beta == doctest::Approx(0.1));
  CHECK(cfg.network.n_antennas == AntennaCount(4));
  CHECK(cfg.scenario.is_apil());
}

TEST_CASE("config parses both scenario kinds and infinite antennas") {
  auto j = json::parse(R"({"lambda":1e-6,"n_antennas":"inf","beta_db":0,
    "scenario":{"kind":"apdl","altitude":{"variant":"uniform","h_bar_m":40,"half_width_m":5}}})");
  const auto cfg = parse_config(j);
  CHECK(cfg.network.n_antennas.is_infinite());
  CHECK(cfg.network.beta == 1.0);
  const auto& u = std::get<UniformAltitude>(cfg.scenario.altitude());
  CHECK(u.half_width == 5.0);
  auto g = parse_config(json::parse(R"({"scenario":{"angle":{"variant":"gamma_tan","theta_bar_deg":15,"shape":4}}})"));
  CHECK(std::get<GammaTanAngle>(g.scenario.angle()).shape == 4.0);
}

TEST_CASE("config rejects unknown keys and invalid values") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"lamda":1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"alpha":1.5})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"n_antennas":0})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"n_antennas":"many"})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"scenario":{"kind":"apil","altitude":{}}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"scenario":{"angle":{"theta_bar_deg":90}}})")), ConfigError);
}

TEST_CASE("config round trip and hash") {
  auto j = json::parse(R"({"lambda":1e-5,"noise_dbm":null,"n_antennas":2,
    "scenario":{"kind":"apdl","altitude":{"variant":"proportional","h0":0.5}}})");
  const auto cfg = parse_config(j);
  CHECK(cfg.network.noise_mw == 0.0);
  const auto again = parse_config(to_json(cfg));
  CHECK(config_hash(again) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);
  CHECK(config_hash(cfg) != config_hash(RunConfig{}));
}
