#include "uavcov/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>

namespace uavcov {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

std::string text(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

AngleDistribution parse_angle(const json& j) {
  reject_unknown(j, {"variant", "theta_bar_deg", "shape"}, "scenario.angle");
  const std::string variant = text(j, "variant", "degenerate");
  const double theta = deg_to_rad(number(j, "theta_bar_deg", 20.0));
  if (variant == "degenerate") return DegenerateAngle{theta};
  if (variant == "gamma_tan") return GammaTanAngle{number(j, "shape", 4.0), theta};
  throw ConfigError("unknown angle variant '" + variant + "'");
}

AltitudeDistribution parse_altitude(const json& j) {
  reject_unknown(j, {"variant", "h_bar_m", "half_width_m", "rate_per_m", "h0"}, "scenario.altitude");
  const std::string variant = text(j, "variant", "degenerate");
  const double h_bar = number(j, "h_bar_m", 40.0);
  if (variant == "degenerate") return DegenerateAltitude{h_bar};
  if (variant == "uniform") return UniformAltitude{h_bar, number(j, "half_width_m", 5.0)};
  if (variant == "exponential") return ExponentialAltitude{number(j, "rate_per_m", 1.0 / h_bar)};
  if (variant == "proportional") return ProportionalAltitude{number(j, "h0", 1.0)};
  throw ConfigError("unknown altitude variant '" + variant + "'");
}

}  // namespace

AntennaCount parse_antennas(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "Infinity" || s == "infinity") return AntennaCount::infinite();
    try {
      std::size_t used = 0;
      const int n = std::stoi(s, &used);
      if (used == s.size()) return AntennaCount(n);
    } catch (const std::exception&) {
    }
    throw ConfigError("n_antennas must be a positive integer or \"inf\", got '" + s + "'");
  }
  if (v.is_number_integer()) return AntennaCount(v.get<int>());
  throw ConfigError("n_antennas must be a positive integer or \"inf\"");
}

RunConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"lambda", "power_mw", "noise_dbm", "alpha", "ell", "c1", "c2", "n_antennas",
                  "beta_db", "scenario"},
                 "config");
  RunConfig out;
  NetworkConfig& n = out.network;
  n.lambda = number(j, "lambda", n.lambda);
  n.power_mw = number(j, "power_mw", n.power_mw);
  if (j.contains("noise_dbm")) {
    const auto& v = j.at("noise_dbm");
    // null stands for a noiseless receiver (minus infinity dBm)
    if (v.is_null())
      n.noise_mw = 0.0;
    else
      n.noise_mw = dbm_to_mw(number(j, "noise_dbm", 0.0));
  }
  n.alpha = number(j, "alpha", n.alpha);
  n.ell = number(j, "ell", n.ell);
  n.c1 = number(j, "c1", n.c1);
  n.c2 = number(j, "c2", n.c2);
  if (j.contains("n_antennas")) n.n_antennas = parse_antennas(j.at("n_antennas"));
  if (j.contains("beta_db")) n.beta = db_to_linear(number(j, "beta_db", 0.0));
  n.validate();

  if (j.contains("scenario")) {
    const json& s = j.at("scenario");
    reject_unknown(s, {"kind", "angle", "altitude"}, "scenario");
    const std::string kind = text(s, "kind", "apil");
    if (kind == "apil") {
      if (s.contains("altitude")) throw ConfigError("APIL scenario must not carry an altitude block");
      out.scenario = ScenarioSpec::apil(parse_angle(s.value("angle", json::object())));
    } else if (kind == "apdl") {
      if (s.contains("angle")) throw ConfigError("APDL scenario must not carry an angle block");
      out.scenario = ScenarioSpec::apdl(parse_altitude(s.value("altitude", json::object())));
    } else {
      throw ConfigError("scenario.kind must be \"apil\" or \"apdl\"");
    }
  }
  validate(out.scenario);
  return out;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  const NetworkConfig& n = cfg.network;
  json j;
  j["lambda"] = n.lambda;
  j["power_mw"] = n.power_mw;
  j["noise_dbm"] = n.noise_mw > 0.0 ? json(mw_to_dbm(n.noise_mw)) : json(nullptr);
  j["alpha"] = n.alpha;
  j["ell"] = n.ell;
  j["c1"] = n.c1;
  j["c2"] = n.c2;
  j["n_antennas"] = n.n_antennas.is_infinite() ? json("inf") : json(n.n_antennas.value());
  j["beta_db"] = linear_to_db(n.beta);
  json s;
  if (cfg.scenario.is_apil()) {
    s["kind"] = "apil";
    json a;
    if (const auto* d = std::get_if<DegenerateAngle>(&cfg.scenario.angle())) {
      a["variant"] = "degenerate";
      a["theta_bar_deg"] = rad_to_deg(d->theta_bar);
    } else {
      const auto& g = std::get<GammaTanAngle>(cfg.scenario.angle());
      a["variant"] = "gamma_tan";
      a["theta_bar_deg"] = rad_to_deg(g.theta_bar);
      a["shape"] = g.shape;
    }
    s["angle"] = a;
  } else {
    s["kind"] = "apdl";
    json a;
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, DegenerateAltitude>) {
            a["variant"] = "degenerate";
            a["h_bar_m"] = d.h_bar;
          } else if constexpr (std::is_same_v<T, UniformAltitude>) {
            a["variant"] = "uniform";
            a["h_bar_m"] = d.h_bar;
            a["half_width_m"] = d.half_width;
          } else if constexpr (std::is_same_v<T, ExponentialAltitude>) {
            a["variant"] = "exponential";
            a["rate_per_m"] = d.rate;
          } else {
            a["variant"] = "proportional";
            a["h0"] = d.h0;
          }
        },
        cfg.scenario.altitude());
    s["altitude"] = a;
  }
  j["scenario"] = s;
  return j;
}

std::string config_hash(const RunConfig& cfg) {
  const std::string canon = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace uavcov
