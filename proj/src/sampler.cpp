#include "uavcov/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace uavcov {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t out = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return out;
}

double Rng::uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

double Rng::exponential() { return -std::log(uniform()); }

double Rng::gamma_int(int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += exponential();
  return s;
}

Rng make_stream(std::uint64_t seed, std::uint64_t drop, Stream purpose) {
  std::uint64_t x = seed;
  std::uint64_t k = splitmix64(x);
  x = k ^ (drop * 0xd1342543de82ef95ULL);
  k = splitmix64(x);
  x = k ^ (static_cast<std::uint64_t>(purpose) * 0xa0761d6478bd642fULL);
  return Rng(splitmix64(x));
}

double auto_disk_radius(double lambda, double target_count) {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
  return std::sqrt(target_count / (std::numbers::pi * lambda));
}

MarkDrawer::MarkDrawer(const ScenarioSpec& scenario) : scenario_(scenario) { validate(scenario); }

Mark MarkDrawer::draw(double r2, Rng& rng) const {
  const double r = std::sqrt(r2);
  if (scenario_.is_apil()) {
    double theta = 0.0;
    const auto& a = scenario_.angle();
    if (const auto* d = std::get_if<DegenerateAngle>(&a)) {
      theta = d->theta_bar;
    } else {
      const auto& g = std::get<GammaTanAngle>(a);
      std::gamma_distribution<double> gd(g.shape, 1.0);
      theta = std::atan(gd(rng) / g.rate());
    }
    theta = std::min(theta, kMaxSampledAngle);
    return {theta, r * std::tan(theta)};
  }
  const auto& alt = scenario_.altitude();
  double h = 0.0;
  if (const auto* d = std::get_if<DegenerateAltitude>(&alt)) {
    h = d->h_bar;
  } else if (const auto* u = std::get_if<UniformAltitude>(&alt)) {
    h = u->h_bar - u->half_width + 2.0 * u->half_width * rng.uniform();
  } else if (const auto* e = std::get_if<ExponentialAltitude>(&alt)) {
    h = rng.exponential() / e->rate;
  } else {
    h = std::get<ProportionalAltitude>(alt).h0 * r;
  }
  return {std::min(std::atan2(h, r), kMaxSampledAngle), h};
}

NetworkDrop sample_drop(const NetworkConfig& cfg, const ScenarioSpec& scenario, double disk_radius,
                        std::uint64_t seed, std::uint64_t drop_index) {
  if (!(disk_radius > 0.0) || !std::isfinite(disk_radius)) throw ConfigError("disk radius must be positive and finite");
  cfg.validate();
  const MarkDrawer marks(scenario);
  NetworkDrop drop;
  drop.disk_radius_m = disk_radius;
  drop.seed = seed;
  drop.index = drop_index;

  Rng count_rng = make_stream(seed, drop_index, Stream::Count);
  std::poisson_distribution<long> pois(cfg.lambda * std::numbers::pi * disk_radius * disk_radius);
  const long n = pois(count_rng);

  Rng proj = make_stream(seed, drop_index, Stream::Projection);
  Rng mark = make_stream(seed, drop_index, Stream::Mark);
  Rng los = make_stream(seed, drop_index, Stream::Los);
  Rng fade = make_stream(seed, drop_index, Stream::Fading);
  Rng serve = make_stream(seed, drop_index, Stream::Serving);
  const double r2max = disk_radius * disk_radius;
  drop.uavs.resize(static_cast<std::size_t>(n));
  for (auto& u : drop.uavs) {
    const double r2 = r2max * proj.uniform();
    const double phi = 2.0 * std::numbers::pi * proj.uniform();
    const double r = std::sqrt(r2);
    u.x = r * std::cos(phi);
    u.y = r * std::sin(phi);
    const Mark m = marks.draw(r2, mark);
    u.theta = m.theta;
    u.h = m.h;
    u.los = los.uniform() < los_probability_unchecked(u.theta, cfg.c1, cfg.c2);
    u.gain_interf = fade.exponential();
    u.gain_serving = cfg.n_antennas.is_infinite() ? 1.0 : serve.gamma_int(cfg.n_antennas.value());
  }
  return drop;
}

std::vector<EffectiveDistance> effective_distances(const NetworkDrop& drop, double alpha, double ell) {
  if (!(ell >= 0.0 && ell <= 1.0)) throw ConfigError("ell must lie in [0, 1]");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  const double nlos_scale = ell > 0.0 ? std::pow(ell, -1.0 / alpha) : std::numeric_limits<double>::infinity();
  std::vector<EffectiveDistance> out;
  out.reserve(drop.uavs.size());
  for (std::size_t i = 0; i < drop.uavs.size(); ++i) {
    const auto& u = drop.uavs[i];
    const double d = std::sqrt(u.distance_sq());
    out.push_back({u.los ? d : d * nlos_scale, i});
  }
  std::sort(out.begin(), out.end(), [](const EffectiveDistance& a, const EffectiveDistance& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  });
  return out;
}

void write_drop_csv_header(std::ostream& os) { os << "drop_id,x,y,h,theta,los\n"; }

void write_drop_csv(std::ostream& os, const NetworkDrop& drop) {
  const auto old = os.precision(17);
  for (const auto& u : drop.uavs)
    os << drop.index << ',' << u.x << ',' << u.y << ',' << u.h << ',' << u.theta << ',' << (u.los ? 1 : 0) << '\n';
  os.precision(old);
}

}  // namespace uavcov
