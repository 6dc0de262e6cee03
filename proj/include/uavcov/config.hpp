#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "uavcov/model.hpp"

namespace uavcov {

// A network configuration together with the UAV placement scenario.
struct RunConfig {
  NetworkConfig network = NetworkConfig::suburban();
  ScenarioSpec scenario = ScenarioSpec::apil(DegenerateAngle{deg_to_rad(20.0)});
};

// Keys (all optional; missing keys keep the suburban defaults):
//   lambda, power_mw, noise_dbm, alpha, ell, c1, c2, n_antennas (integer or "inf"), beta_db,
//   scenario: { kind: "apil" | "apdl",
//               angle: { variant: "degenerate" | "gamma_tan", theta_bar_deg, shape },
//               altitude: { variant: "degenerate" | "uniform" | "exponential" | "proportional",
//                           h_bar_m, half_width_m, rate_per_m, h0 } }
// Unknown keys and out-of-range values raise ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

// Inverse of parse_config; noise and threshold are written back in dBm / dB.
nlohmann::json to_json(const RunConfig& cfg);

// 16 hex digits of FNV-1a over the canonical JSON dump.
std::string config_hash(const RunConfig& cfg);

AntennaCount parse_antennas(const nlohmann::json& v);

}  // namespace uavcov
