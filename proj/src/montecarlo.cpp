#include "uavcov/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <numbers>
#include <random>
#include <thread>

namespace uavcov {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr long kBlock = 256;

// Per-drop common random numbers: squared projection radius, LoS uniform, interferer fading.
struct DropBase {
  std::vector<double> r2;
  std::vector<double> los_u;
  std::vector<double> fade;
  std::vector<double> r2pow;  // r2^(-alpha/2), filled on demand
  bool have_r2pow = false;
  // LoS iff the elevation exceeds los_theta (rho is increasing), i.e. h > los_h for APDL.
  std::vector<double> los_theta;
  std::vector<double> los_h;
  bool have_los = false;

  [[nodiscard]] std::size_t size() const { return r2.size(); }
};

void generate_base(const NetworkConfig& cfg, double radius, std::uint64_t seed, std::uint64_t d, bool fading,
                   DropBase& b) {
  Rng count_rng = make_stream(seed, d, Stream::Count);
  std::poisson_distribution<long> pois(cfg.lambda * kPi * radius * radius);
  const auto n = static_cast<std::size_t>(pois(count_rng));
  Rng proj = make_stream(seed, d, Stream::Projection);
  Rng los = make_stream(seed, d, Stream::Los);
  b.r2.resize(n);
  b.los_u.resize(n);
  const double r2max = radius * radius;
  for (std::size_t i = 0; i < n; ++i) {
    b.r2[i] = r2max * proj.uniform();
    (void)proj();  // azimuth, unused by isotropic quantities
    b.los_u[i] = los.uniform();
  }
  b.fade.resize(fading ? n : 0);
  if (fading) {
    Rng fade = make_stream(seed, d, Stream::Fading);
    for (std::size_t i = 0; i < n; ++i) b.fade[i] = fade.exponential();
  }
  b.have_r2pow = false;
  b.have_los = false;
}

void fill_los_thresholds(const NetworkConfig& cfg, DropBase& b) {
  if (b.have_los) return;
  const std::size_t n = b.size();
  b.los_theta.resize(n);
  b.los_h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // rho(theta) = u  <=>  theta = ln(c2 u / (1 - u)) / c1
    const double u = b.los_u[i];
    const double t = std::log(cfg.c2 * u / (1.0 - u)) / cfg.c1;
    b.los_theta[i] = t;
    if (t < 0.0)
      b.los_h[i] = -std::numeric_limits<double>::infinity();
    else if (t >= kMaxSampledAngle)
      b.los_h[i] = std::numeric_limits<double>::infinity();
    else
      b.los_h[i] = std::sqrt(b.r2[i]) * std::tan(t);
  }
  b.have_los = true;
}

// g_i = L_i |U_i|^-alpha for one scenario on a common drop.
class GainModel {
 public:
  GainModel(const NetworkConfig& cfg, const ScenarioSpec& sc, std::optional<double> keep)
      : cfg_(cfg), drawer_(sc), sc_(sc) {
    if (keep) keep2_ = *keep * *keep;
    if (sc.is_apil())
      if (const auto* d = std::get_if<DegenerateAngle>(&sc.angle())) {
        fixed_ = true;
        const double t = std::min(d->theta_bar, kMaxSampledAngle);
        fixed_rho_ = los_probability_unchecked(t, cfg.c1, cfg.c2);
        fixed_cos_ = std::pow(std::cos(t), cfg.alpha);
      }
    if (!sc.is_apil())
      if (const auto* d = std::get_if<DegenerateAltitude>(&sc.altitude())) fixed_h_ = d->h_bar;
  }

  void gains(DropBase& b, std::uint64_t seed, std::uint64_t d, std::vector<double>& g) const {
    raw_gains(b, seed, d, g);
    if (keep2_)
      for (std::size_t i = 0; i < g.size(); ++i)
        if (b.r2[i] > *keep2_) g[i] = 0.0;
  }

 private:
  void raw_gains(DropBase& b, std::uint64_t seed, std::uint64_t d, std::vector<double>& g) const {
    const std::size_t n = b.size();
    g.resize(n);
    const double half = 0.5 * cfg_.alpha;
    if (fixed_) {
      if (!b.have_r2pow) {
        b.r2pow.resize(n);
        for (std::size_t i = 0; i < n; ++i) b.r2pow[i] = std::pow(b.r2[i], -half);
        b.have_r2pow = true;
      }
      const double los = fixed_cos_;
      const double nlos = fixed_cos_ * cfg_.ell;
      for (std::size_t i = 0; i < n; ++i) g[i] = (b.los_u[i] < fixed_rho_ ? los : nlos) * b.r2pow[i];
      return;
    }
    fill_los_thresholds(cfg_, b);
    if (fixed_h_) {
      const double h = *fixed_h_;
      const double h2 = h * h;
      for (std::size_t i = 0; i < n; ++i)
        g[i] = (h > b.los_h[i] ? 1.0 : cfg_.ell) * std::exp(-half * std::log(b.r2[i] + h2));
      return;
    }
    Rng mark = make_stream(seed, d, Stream::Mark);
    const bool apdl = !sc_.is_apil();
    for (std::size_t i = 0; i < n; ++i) {
      const Mark m = drawer_.draw(b.r2[i], mark);
      const bool los = apdl ? m.h > b.los_h[i] : m.theta > b.los_theta[i];
      g[i] = (los ? 1.0 : cfg_.ell) * std::pow(b.r2[i] + m.h * m.h, -half);
    }
  }

  NetworkConfig cfg_;
  MarkDrawer drawer_;
  ScenarioSpec sc_;
  bool fixed_ = false;
  double fixed_rho_ = 0.0;
  double fixed_cos_ = 0.0;
  std::optional<double> fixed_h_;
  std::optional<double> keep2_;
};

struct Moments {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

// Runs kernel(d, out) over all drops in fixed blocks; block partial sums are combined in block
// order, so the result does not depend on the thread count. `collect` (optional) receives
// output 0 of every drop.
template <class MakeKernel>
Moments run_drops(long n_drops, std::size_t n_out, int threads, MakeKernel&& make_kernel,
                  std::vector<double>* collect = nullptr) {
  const long n_blocks = (n_drops + kBlock - 1) / kBlock;
  std::vector<double> block_sum(static_cast<std::size_t>(n_blocks) * n_out);
  std::vector<double> block_sq(block_sum.size());
  if (collect) collect->assign(static_cast<std::size_t>(n_drops), 0.0);
  std::atomic<long> next{0};
  auto worker = [&] {
    auto kernel = make_kernel();
    std::vector<double> buf(static_cast<std::size_t>(kBlock) * n_out);
    std::vector<double> col(kBlock);
    for (long blk = next++; blk < n_blocks; blk = next++) {
      const long first = blk * kBlock;
      const long count = std::min(kBlock, n_drops - first);
      for (long k = 0; k < count; ++k) kernel(static_cast<std::uint64_t>(first + k), &buf[k * n_out]);
      for (std::size_t j = 0; j < n_out; ++j) {
        for (long k = 0; k < count; ++k) col[k] = buf[k * n_out + j];
        const std::span<const double> c(col.data(), count);
        block_sum[blk * n_out + j] = pairwise_sum(c);
        for (long k = 0; k < count; ++k) col[k] *= col[k];
        block_sq[blk * n_out + j] = pairwise_sum(c);
      }
      if (collect)
        for (long k = 0; k < count; ++k) (*collect)[first + k] = buf[k * n_out];
    }
  };
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = static_cast<int>(std::min<long>(nt, n_blocks));
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  Moments m;
  m.sum.resize(n_out);
  m.sum_sq.resize(n_out);
  std::vector<double> col(n_blocks);
  for (std::size_t j = 0; j < n_out; ++j) {
    for (long b = 0; b < n_blocks; ++b) col[b] = block_sum[b * n_out + j];
    m.sum[j] = pairwise_sum(col);
    for (long b = 0; b < n_blocks; ++b) col[b] = block_sq[b * n_out + j];
    m.sum_sq[j] = pairwise_sum(col);
  }
  return m;
}

McEstimate make_estimate(double sum, double sum_sq, long n, double level) {
  McEstimate e;
  e.n_effective = n;
  e.mean = sum / static_cast<double>(n);
  const double var = n > 1 ? std::max(0.0, (sum_sq - sum * e.mean) / static_cast<double>(n - 1)) : 0.0;
  e.std_error = std::sqrt(var / static_cast<double>(n));
  const double z = normal_quantile_two_sided(level);
  e.ci_low = e.mean - z * e.std_error;
  e.ci_high = e.mean + z * e.std_error;
  return e;
}

std::vector<McEstimate> finish(const Moments& m, long n, double level) {
  std::vector<McEstimate> out;
  for (std::size_t j = 0; j < m.sum.size(); ++j) out.push_back(make_estimate(m.sum[j], m.sum_sq[j], n, level));
  return out;
}

double serving_gain(const std::vector<double>& cum, AntennaCount n) {
  return n.is_infinite() ? 1.0 : cum[static_cast<std::size_t>(n.value())];
}

int max_finite(std::span<const McVariant> variants) {
  int m = 0;
  for (const auto& v : variants)
    if (!v.n_antennas.is_infinite()) m = std::max(m, v.n_antennas.value());
  return m;
}

void check_inputs(const NetworkConfig& cfg, std::span<const McVariant> variants, std::span<const double> betas,
                  const McSpec& spec) {
  cfg.validate();
  spec.validate();
  if (variants.empty()) throw ConfigError("no Monte Carlo variants given");
  for (const auto& v : variants) validate(v.scenario);
  for (double b : betas)
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("beta must be positive and finite");
}

}  // namespace

void McSpec::validate() const {
  if (n_drops < 100) throw ConfigError("n_drops must be at least 100");
  if (disk_radius && !(*disk_radius > 0.0 && std::isfinite(*disk_radius)))
    throw ConfigError("disk radius must be positive and finite");
  if (!(target_count > 0.0)) throw ConfigError("target count must be > 0");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("ci_level must lie in (0, 1)");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (keep_radius && !(*keep_radius > 0.0)) throw ConfigError("keep radius must be > 0");
}

double McSpec::radius(double lambda) const {
  return disk_radius ? *disk_radius : auto_disk_radius(lambda, target_count);
}

double McSpec::effective_radius(double lambda) const {
  return keep_radius ? std::min(*keep_radius, radius(lambda)) : radius(lambda);
}

double tail_mean_interference(const NetworkConfig& cfg, const ScenarioSpec& scenario, double radius) {
  const double a = cfg.alpha;
  auto l_mean = [&](double theta) {
    const double rho = los_probability_unchecked(theta, cfg.c1, cfg.c2);
    return rho + cfg.ell * (1.0 - rho);
  };
  const double radial = 2.0 * kPi * cfg.lambda * std::pow(radius, 2.0 - a) / (a - 2.0);
  if (scenario.is_apil()) {
    const double c = expect_over_angle(
        [&](double t) { return l_mean(t) * std::pow(std::cos(t), a); }, scenario.angle());
    return radial * c;
  }
  const auto& alt = scenario.altitude();
  if (const auto* p = std::get_if<ProportionalAltitude>(&alt)) {
    const double t = std::atan(p->h0);
    return radial * l_mean(t) * std::pow(std::cos(t), a);
  }
  QuadratureSpec q;
  q.rel_tol = 1e-8;
  return expect_over_altitude(
      [&](double h) {
        auto f = [&](double r) {
          return 2.0 * kPi * cfg.lambda * r * l_mean(std::atan2(h, r)) * std::pow(r * r + h * h, -0.5 * a);
        };
        auto res = integrate_power_tail(f, radius, a - 1.0, q);
        require_converged(res, "tail interference");
        return res.value;
      },
      alt);
}

std::vector<McEstimate> estimate_p_cov_sweep(const NetworkConfig& cfg, std::span<const McVariant> variants,
                                             std::span<const double> betas, const McSpec& spec) {
  check_inputs(cfg, variants, betas, spec);
  if (betas.empty()) throw ConfigError("no thresholds given");
  const double radius = spec.radius(cfg.lambda);
  std::vector<GainModel> models;
  std::vector<double> tails;
  for (const auto& v : variants) {
    models.emplace_back(cfg, v.scenario, spec.keep_radius);
    tails.push_back(spec.tail_correction ? tail_mean_interference(cfg, v.scenario, spec.effective_radius(cfg.lambda)) : 0.0);
  }
  const int nmax = max_finite(variants);
  const std::size_t nb = betas.size();
  auto make = [&] {
    return [&, base = DropBase{}, g = std::vector<double>{}, cum = std::vector<double>{}](std::uint64_t d,
                                                                                           double* out) mutable {
      generate_base(cfg, radius, spec.seed, d, true, base);
      Rng serve = make_stream(spec.seed, d, Stream::Serving);
      cum.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
      for (int k = 1; k <= nmax; ++k) cum[k] = cum[k - 1] + serve.exponential();
      for (std::size_t v = 0; v < models.size(); ++v) {
        double* o = out + v * nb;
        std::fill(o, o + nb, 0.0);
        if (base.size() == 0) continue;
        models[v].gains(base, spec.seed, d, g);
        std::size_t best = 0;
        double total = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (g[i] > g[best]) best = i;
          total += g[i] * base.fade[i];
        }
        if (!(g[best] > 0.0)) continue;
        const double interference = std::max(0.0, total - g[best] * base.fade[best]) + tails[v];
        const double signal = serving_gain(cum, variants[v].n_antennas) * g[best] * cfg.power_mw;
        const double denom = cfg.power_mw * interference + cfg.noise_mw;
        for (std::size_t b = 0; b < nb; ++b) o[b] = signal >= betas[b] * denom ? 1.0 : 0.0;
      }
    };
  };
  return finish(run_drops(spec.n_drops, variants.size() * nb, spec.threads, make), spec.n_drops, spec.ci_level);
}

McEstimate estimate_p_cov(const NetworkConfig& cfg, const ScenarioSpec& scenario, const McSpec& spec) {
  const McVariant v{scenario, cfg.n_antennas};
  const double b = cfg.beta;
  return estimate_p_cov_sweep(cfg, std::span(&v, 1), std::span(&b, 1), spec).front();
}

std::vector<McEstimate> estimate_p_cf_sweep(const NetworkConfig& cfg, std::span<const McVariant> variants,
                                            std::span<const double> betas, const McSpec& spec) {
  check_inputs(cfg, variants, betas, spec);
  if (betas.empty()) throw ConfigError("no thresholds given");
  const double radius = spec.radius(cfg.lambda);
  std::vector<GainModel> models;
  std::vector<double> tails;
  for (const auto& v : variants) {
    models.emplace_back(cfg, v.scenario, spec.keep_radius);
    const double mean_gain = v.n_antennas.is_infinite() ? 1.0 : v.n_antennas.value();
    tails.push_back(spec.tail_correction ? mean_gain * tail_mean_interference(cfg, v.scenario, spec.effective_radius(cfg.lambda)) : 0.0);
  }
  const int nmax = max_finite(variants);
  const std::size_t nv = variants.size();
  const std::size_t nb = betas.size();
  auto make = [&] {
    return [&, base = DropBase{}, g = std::vector<std::vector<double>>(nv), sums = std::vector<double>(nv),
            cum = std::vector<double>{}](std::uint64_t d, double* out) mutable {
      generate_base(cfg, radius, spec.seed, d, false, base);
      for (std::size_t v = 0; v < nv; ++v) models[v].gains(base, spec.seed, d, g[v]);
      std::fill(sums.begin(), sums.end(), 0.0);
      Rng fade = make_stream(spec.seed, d, Stream::Fading);
      cum.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
      for (std::size_t i = 0; i < base.size(); ++i) {
        for (int k = 1; k <= nmax; ++k) cum[k] = cum[k - 1] + fade.exponential();
        for (std::size_t v = 0; v < nv; ++v) sums[v] += serving_gain(cum, variants[v].n_antennas) * g[v][i];
      }
      for (std::size_t v = 0; v < nv; ++v) {
        const double s = cfg.power_mw * (sums[v] + tails[v]);
        for (std::size_t b = 0; b < nb; ++b) out[v * nb + b] = s >= betas[b] * cfg.noise_mw ? 1.0 : 0.0;
      }
    };
  };
  return finish(run_drops(spec.n_drops, nv * nb, spec.threads, make), spec.n_drops, spec.ci_level);
}

McEstimate estimate_p_cf(const NetworkConfig& cfg, const ScenarioSpec& scenario, const McSpec& spec) {
  const McVariant v{scenario, cfg.n_antennas};
  const double b = cfg.beta;
  return estimate_p_cf_sweep(cfg, std::span(&v, 1), std::span(&b, 1), spec).front();
}

namespace {

double draw_weight(const WeightModel& w, Rng& rng) {
  if (std::holds_alternative<UnitWeight>(w)) return 1.0;
  if (const auto* e = std::get_if<ExpWeight>(&w)) return e->power * rng.exponential();
  const auto& g = std::get<GammaWeight>(w);
  return g.power * rng.gamma_int(g.n);
}

}  // namespace

std::vector<McEstimate> estimate_shot_laplace_sweep(std::span<const double> s, int k, const NetworkConfig& cfg,
                                                    const ScenarioSpec& scenario, const WeightModel& w,
                                                    const McSpec& spec) {
  cfg.validate();
  spec.validate();
  validate(scenario);
  validate(w);
  if (k < 0) throw ConfigError("K must be >= 0");
  if (s.empty()) throw ConfigError("no transform arguments given");
  for (double x : s)
    if (!(x >= 0.0) || !std::isfinite(x)) throw ConfigError("transform argument must be >= 0");
  const double radius = spec.radius(cfg.lambda);
  const GainModel model(cfg, scenario, spec.keep_radius);
  const double tail =
      spec.tail_correction ? weight_moment(w, 1.0) * tail_mean_interference(cfg, scenario, spec.effective_radius(cfg.lambda)) : 0.0;
  auto make = [&] {
    return [&, base = DropBase{}, g = std::vector<double>{}, idx = std::vector<std::size_t>{}](
               std::uint64_t d, double* out) mutable {
      generate_base(cfg, radius, spec.seed, d, false, base);
      model.gains(base, spec.seed, d, g);
      Rng fade = make_stream(spec.seed, d, Stream::Fading);
      for (auto& x : g) x *= draw_weight(w, fade);
      const std::size_t n = g.size();
      const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), n);
      if (kk > 0) {
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::nth_element(idx.begin(), idx.begin() + (kk - 1), idx.end(),
                         [&](std::size_t a, std::size_t b) { return base.r2[a] < base.r2[b]; });
        for (std::size_t i = 0; i < kk; ++i) g[idx[i]] = 0.0;
      }
      double t = tail;
      for (double x : g) t += x;
      for (std::size_t j = 0; j < s.size(); ++j) out[j] = std::exp(-s[j] * t);
    };
  };
  return finish(run_drops(spec.n_drops, s.size(), spec.threads, make), spec.n_drops, spec.ci_level);
}

McEstimate estimate_shot_laplace(double s, int k, const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                 const WeightModel& w, const McSpec& spec) {
  return estimate_shot_laplace_sweep(std::span(&s, 1), k, cfg, scenario, w, spec).front();
}

std::vector<double> sample_rstar(const NetworkConfig& cfg, const ScenarioSpec& scenario, const WeightModel& w,
                                 const McSpec& spec) {
  cfg.validate();
  spec.validate();
  validate(w);
  const double radius = spec.radius(cfg.lambda);
  const GainModel model(cfg, scenario, spec.keep_radius);
  auto make = [&] {
    return [&, base = DropBase{}, g = std::vector<double>{}](std::uint64_t d, double* out) mutable {
      generate_base(cfg, radius, spec.seed, d, false, base);
      model.gains(base, spec.seed, d, g);
      Rng fade = make_stream(spec.seed, d, Stream::Fading);
      double best = 0.0;
      for (double x : g) best = std::max(best, x * draw_weight(w, fade));
      out[0] = best;
    };
  };
  std::vector<double> out;
  run_drops(spec.n_drops, 1, spec.threads, make, &out);
  return out;
}

std::vector<CcdfPoint> estimate_distance_ccdf(const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                              const WeightModel& w, const McSpec& spec,
                                              std::span<const double> grid) {
  std::vector<double> r = sample_rstar(cfg, scenario, w, spec);
  std::sort(r.begin(), r.end());
  std::vector<double> pts(grid.begin(), grid.end());
  if (pts.empty()) {
    auto pos = std::find_if(r.begin(), r.end(), [](double x) { return x > 0.0; });
    if (pos == r.end()) return {};
    const double lo = std::log(*pos);
    const double hi = std::log(r.back());
    for (int i = 0; i < 40; ++i) pts.push_back(std::exp(lo + (hi - lo) * i / 39.0));
  }
  const double z = normal_quantile_two_sided(spec.ci_level);
  const double n = static_cast<double>(r.size());
  std::vector<CcdfPoint> out;
  for (double x : pts) {
    const double above = static_cast<double>(r.end() - std::upper_bound(r.begin(), r.end(), x));
    const double p = above / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    out.push_back({x, p, std::max(0.0, p - z * se), std::min(1.0, p + z * se)});
  }
  return out;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ConfigError("empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double level) {
  if (n == 0 || !(level > 0.0 && level < 1.0)) throw ConfigError("bad KS arguments");
  return std::sqrt(-0.5 * std::log(level / 2.0)) / std::sqrt(static_cast<double>(n));
}

double normal_quantile_two_sided(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
  // erf(z / sqrt 2) = level
  double lo = 0.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erf(mid / std::numbers::sqrt2) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

}  // namespace uavcov
