#include "uavcov/coverage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "uavcov/errors.hpp"

namespace uavcov {

namespace {

constexpr double kPi = std::numbers::pi;
using Vec = Eigen::VectorXcd;

double clamp_unit(double raw, std::string& diag) {
  if (!std::isfinite(raw)) throw NumericalError("coverage evaluated to a non-finite value");
  if (raw < 0.0 || raw > 1.0) {
    std::ostringstream os;
    os << "raw=" << raw << " clamped;";
    diag += os.str();
    if (raw < -1e-6 || raw > 1.0 + 1e-6)
      throw NumericalError("coverage left [0,1] by more than 1e-6: " + std::to_string(raw));
  }
  return std::clamp(raw, 0.0, 1.0);
}

void require_finite_n(const NetworkConfig& cfg) {
  if (cfg.n_antennas.is_infinite())
    throw ConfigError("this coverage formula needs a finite antenna count; use the massive-array limit");
}

class ApilGeometry final : public ServingGeometry {
 public:
  ApilGeometry(const NetworkConfig& cfg, const AngleDistribution& angle, const QuadratureSpec& quad)
      : cfg_(cfg), quad_(quad), c_(kPi * cfg.lambda * omega(angle, cfg, quad)) {}

  Vec laplace_z(const Vec& u) const override {
    const Vec ig = I_G(u, 2.0 / cfg_.alpha, quad_);
    if (cfg_.noise_mw == 0.0) return (1.0 + ig.array()).inverse().matrix();
    const double np = cfg_.noise_mw / cfg_.power_mw;
    const double half = 0.5 * cfg_.alpha;
    // x = c D ~ Exp(1); e^-60 bounds the neglected tail
    auto f = [&](double x) -> Vec {
      const double noise = np * std::pow(x / c_, half);
      return (-(x * (1.0 + ig.array())) - u.array() * noise).exp().matrix();
    };
    auto r = integrate(f, 0.0, 60.0, quad_);
    require_converged(r, "serving-distance expectation");
    return r.value;
  }

  Vec mean_interference_exponent(const Vec& u) const override { return I_G(u, 2.0 / cfg_.alpha, quad_); }

  double mean_distance_power(double a) const override { return std::tgamma(1.0 + a) / std::pow(c_, a); }

  double distance_cdf(double d) const override { return d <= 0.0 ? 0.0 : -std::expm1(-c_ * d); }

 private:
  NetworkConfig cfg_;
  QuadratureSpec quad_;
  double c_;
};

class ApdlGeometry final : public ServingGeometry {
 public:
  ApdlGeometry(const NetworkConfig& cfg, const AltitudeDistribution& alt, const QuadratureSpec& quad)
      : cfg_(cfg), alt_(alt), quad_(quad), pl_(kPi * cfg.lambda) {
    const double lp = std::pow(cfg.ell, 2.0 / cfg.alpha);
    const double rho0 = los_probability_unchecked(0.0, cfg.c1, cfg.c2);
    slope_inf_ = rho0 * (1.0 - lp) + lp;
    if (!std::holds_alternative<ProportionalAltitude>(alt)) {
      const auto [lo, hi] = altitude_support(alt);
      for (double h : {lo, hi}) {
        if (!std::isfinite(h) || h <= 0.0) continue;
        breaks_.push_back(h * h);
        if (lp > 0.0) breaks_.push_back(h * h / lp);
      }
      std::sort(breaks_.begin(), breaks_.end());
    } else {
      slope_inf_ = Omega_los_derivative(1.0, alt, cfg, quad);
    }
    const double last = breaks_.empty() ? 0.0 : breaks_.back();
    knee_ = 1.01 * last + 50.0 / (pl_ * slope_inf_);
  }

  double M(double y) const { return Omega_los(y, alt_, cfg_, quad_); }
  double Mp(double y) const { return Omega_los_derivative(y, alt_, cfg_, quad_); }

  // E_D[h(D)] against f(y) = pi lambda M'(y) exp(-pi lambda M(y)).
  template <class H>
  auto expect(H&& h) const {
    using V = std::decay_t<decltype(h(1.0))>;
    auto f = [&](double d) -> V {
      const double dens = pl_ * Mp(d) * std::exp(-pl_ * M(d));
      if (dens == 0.0) return V(h(d) * 0.0);
      return V(h(d) * dens);
    };
    auto head = integrate(f, 0.0, knee_, quad_, breaks_);
    auto tail = integrate_to_infinity(f, knee_, 1.0 / (pl_ * slope_inf_), quad_);
    require_converged(head, "serving-distance expectation");
    require_converged(tail, "serving-distance expectation tail");
    V out = head.value;
    out += tail.value;
    return out;
  }

  // E(u, d) = pi lambda d int_1^inf M'(d w) u / (w^(alpha/2) + u) dw
  Vec exponent(const Vec& u, double d) const {
    const double half = 0.5 * cfg_.alpha;
    auto g = [&](double w) -> Vec {
      const double mp = Mp(d * w);
      return (mp * u.array() / (std::pow(w, half) + u.array())).matrix();
    };
    std::vector<double> cuts;
    double top = 1.0;
    for (double b : breaks_)
      if (b / d > 1.0) {
        cuts.push_back(b / d);
        top = std::max(top, b / d);
      }
    const double umax = u.cwiseAbs().maxCoeff();
    const double knee = 1.5 * top + 8.0 * std::pow(umax, 1.0 / half) + 1.0;
    auto head = integrate(g, 1.0, knee, quad_, cuts);
    auto tail = integrate_power_tail(g, knee, half, quad_);
    require_converged(head, "interference exponent");
    require_converged(tail, "interference exponent tail");
    return (pl_ * d) * (head.value + tail.value);
  }

  Vec laplace_z(const Vec& u) const override {
    const double np = cfg_.noise_mw / cfg_.power_mw;
    const double half = 0.5 * cfg_.alpha;
    return expect([&](double d) -> Vec {
      if (d <= 0.0) return Vec::Ones(u.size());
      const Vec e = exponent(u, d);
      return (-e.array() - u.array() * (np * std::pow(d, half))).exp().matrix();
    });
  }

  Vec mean_interference_exponent(const Vec& u) const override {
    return expect([&](double d) -> Vec {
      if (d <= 0.0) return Vec::Zero(u.size());
      return exponent(u, d);
    });
  }

  double mean_distance_power(double a) const override {
    return expect([&](double d) { return std::pow(d, a); });
  }

  double distance_cdf(double d) const override { return d <= 0.0 ? 0.0 : -std::expm1(-pl_ * M(d)); }

 private:
  NetworkConfig cfg_;
  AltitudeDistribution alt_;
  QuadratureSpec quad_;
  double pl_;
  double slope_inf_ = 1.0;
  double knee_ = 0.0;
  std::vector<double> breaks_;
};

CoverageResult finite_n_coverage(const NetworkConfig& cfg, const ServingGeometry& geo, const CoverageOptions& opt,
                                 ScenarioKind kind) {
  const int m = cfg.n_antennas.value() - 1;
  auto g = [&](const Vec& t) -> Vec {
    const Vec u = t.cwiseInverse();
    return (t.array().pow(static_cast<double>(m)) * geo.laplace_z(u).array()).matrix();
  };
  const double d = high_order_derivative_batch(g, m, 1.0 / cfg.beta, opt.derivative);
  CoverageResult r;
  r.method = CoverageMethod::AnalyticExact;
  r.scenario = kind;
  r.value = clamp_unit(d / std::exp(std::lgamma(m + 1.0)), r.diagnostics);
  r.ci_low = r.ci_high = r.value;
  return r;
}

CoverageResult bound_coverage(const NetworkConfig& cfg, const ServingGeometry& geo, const CoverageOptions& opt,
                              ScenarioKind kind) {
  require_finite_n(cfg);
  const int m = cfg.n_antennas.value() - 1;
  const double noise = cfg.noise_mw == 0.0
                           ? 0.0
                           : cfg.noise_mw / cfg.power_mw * geo.mean_distance_power(0.5 * cfg.alpha);
  auto g = [&](const Vec& t) -> Vec {
    const Vec u = t.cwiseInverse();
    const Vec e = geo.mean_interference_exponent(u);
    return (t.array().pow(static_cast<double>(m)) * (-e.array() - u.array() * noise).exp()).matrix();
  };
  const double d = high_order_derivative_batch(g, m, 1.0 / cfg.beta, opt.derivative);
  CoverageResult r;
  r.method = CoverageMethod::AnalyticLowerBound;
  r.scenario = kind;
  r.value = clamp_unit(d / std::exp(std::lgamma(m + 1.0)), r.diagnostics);
  r.ci_low = r.ci_high = r.value;
  return r;
}

CoverageResult massive_coverage(const NetworkConfig& cfg, const ServingGeometry& geo, const CoverageOptions& opt,
                                ScenarioKind kind) {
  // The transform of Z has no continuation into Re s < 0 once noise is present, so the
  // Bromwich-line Euler method is used.
  InversionSpec spec = opt.inversion;
  spec.method = InversionMethod::Euler;
  spec.cross_check = false;
  InversionDiagnostics diag;
  const double raw = invert_laplace_batch(
      [&](const Vec& s) -> Vec { return (geo.laplace_z(s).array() / s.array()).matrix(); }, 1.0 / cfg.beta, spec,
      &diag);
  CoverageResult r;
  r.method = CoverageMethod::AnalyticExact;
  r.scenario = kind;
  r.value = clamp_unit(raw, r.diagnostics);
  r.ci_low = r.ci_high = r.value;
  return r;
}

CoverageResult noiseless_cellfree(ScenarioKind kind) {
  CoverageResult r;
  r.value = r.ci_low = r.ci_high = 1.0;
  r.method = CoverageMethod::ClosedForm;
  r.scenario = kind;
  r.cellfree = true;
  r.diagnostics = "noiseless receiver";
  return r;
}

}  // namespace

std::string to_string(CoverageMethod m) {
  switch (m) {
    case CoverageMethod::AnalyticExact: return "analytic";
    case CoverageMethod::AnalyticLowerBound: return "bound";
    case CoverageMethod::ClosedForm: return "closed_form";
    case CoverageMethod::MonteCarlo: return "mc";
  }
  return "unknown";
}

std::unique_ptr<ServingGeometry> make_serving_geometry(const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                                       const QuadratureSpec& quad) {
  cfg.validate();
  validate(scenario);
  if (scenario.is_apil()) return std::make_unique<ApilGeometry>(cfg, scenario.angle(), quad);
  return std::make_unique<ApdlGeometry>(cfg, scenario.altitude(), quad);
}

CoverageResult p_cov_apil(const NetworkConfig& cfg, const AngleDistribution& angle, const CoverageOptions& opt) {
  require_finite_n(cfg);
  const auto geo = make_serving_geometry(cfg, ScenarioSpec::apil(angle), opt.quad);
  return finite_n_coverage(cfg, *geo, opt, ScenarioKind::Apil);
}

CoverageResult p_cov_apdl(const NetworkConfig& cfg, const AltitudeDistribution& alt, const CoverageOptions& opt) {
  require_finite_n(cfg);
  const auto geo = make_serving_geometry(cfg, ScenarioSpec::apdl(alt), opt.quad);
  return finite_n_coverage(cfg, *geo, opt, ScenarioKind::Apdl);
}

CoverageResult p_cov_apil_lower_bound(const NetworkConfig& cfg, const AngleDistribution& angle,
                                      const CoverageOptions& opt) {
  const auto geo = make_serving_geometry(cfg, ScenarioSpec::apil(angle), opt.quad);
  return bound_coverage(cfg, *geo, opt, ScenarioKind::Apil);
}

CoverageResult p_cov_apdl_lower_bound(const NetworkConfig& cfg, const AltitudeDistribution& alt,
                                      const CoverageOptions& opt) {
  const auto geo = make_serving_geometry(cfg, ScenarioSpec::apdl(alt), opt.quad);
  return bound_coverage(cfg, *geo, opt, ScenarioKind::Apdl);
}

CoverageResult p_cov_apil_massive(const NetworkConfig& cfg, const AngleDistribution& angle,
                                  const CoverageOptions& opt) {
  const auto geo = make_serving_geometry(cfg, ScenarioSpec::apil(angle), opt.quad);
  return massive_coverage(cfg, *geo, opt, ScenarioKind::Apil);
}

CoverageResult p_cov_apdl_massive(const NetworkConfig& cfg, const AltitudeDistribution& alt,
                                  const CoverageOptions& opt) {
  const auto geo = make_serving_geometry(cfg, ScenarioSpec::apdl(alt), opt.quad);
  return massive_coverage(cfg, *geo, opt, ScenarioKind::Apdl);
}

double p_cov_interference_limited(double beta, double alpha, const QuadratureSpec& quad) {
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(alpha > 2.0)) throw ConfigError("alpha must exceed 2");
  return 1.0 / (1.0 + I_G(beta, 2.0 / alpha, quad));
}

CoverageResult p_cf_apil(const NetworkConfig& cfg, const AngleDistribution& angle, const CoverageOptions& opt) {
  cfg.validate();
  validate(angle);
  if (cfg.noise_mw == 0.0) return noiseless_cellfree(ScenarioKind::Apil);
  const double v = 2.0 / cfg.alpha;
  const double c = shot_exponent_apil(cfg, angle, gain_weight(cfg.n_antennas), opt.quad);
  const double x = cfg.beta * cfg.noise_mw / cfg.power_mw;
  // exp(-c s^v) grows without bound along the Talbot contour once v > 1/2.
  InversionSpec spec = opt.inversion;
  spec.method = v <= 0.5 ? InversionMethod::Talbot : InversionMethod::Euler;
  InversionDiagnostics diag;
  const double raw = tail_via_inversion_batch(
      [&](const Vec& s) -> Vec { return (-c * s.array().pow(v)).exp().matrix(); }, x, spec, &diag);
  CoverageResult r;
  r.value = r.ci_low = r.ci_high = raw;
  r.method = CoverageMethod::AnalyticExact;
  r.scenario = ScenarioKind::Apil;
  r.cellfree = true;
  if (diag.clamped) r.diagnostics = "raw=" + std::to_string(diag.raw) + " clamped;";
  return r;
}

CoverageResult p_cf_apdl(const NetworkConfig& cfg, const AltitudeDistribution& alt, const CoverageOptions& opt) {
  cfg.validate();
  validate(alt);
  if (cfg.noise_mw == 0.0) return noiseless_cellfree(ScenarioKind::Apdl);
  const WeightModel w = gain_weight(cfg.n_antennas);
  const double x = cfg.beta * cfg.noise_mw / cfg.power_mw;
  InversionSpec spec = opt.inversion;
  spec.method = InversionMethod::Euler;
  InversionDiagnostics diag;
  const double raw = tail_via_inversion_batch(
      [&](const Vec& s) -> Vec {
        Vec out(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) out[i] = laplace_T0_apdl(s[i], cfg, alt, w, opt.quad);
        return out;
      },
      x, spec, &diag);
  CoverageResult r;
  r.value = r.ci_low = r.ci_high = raw;
  r.method = CoverageMethod::AnalyticExact;
  r.scenario = ScenarioKind::Apdl;
  r.cellfree = true;
  if (diag.clamped) r.diagnostics = "raw=" + std::to_string(diag.raw) + " clamped;";
  return r;
}

CoverageResult p_cf_apil_closed_form(const NetworkConfig& cfg, const AngleDistribution& angle,
                                     const QuadratureSpec& quad) {
  cfg.validate();
  if (cfg.alpha != 4.0) throw ConfigError("the error-function form needs alpha = 4");
  if (cfg.noise_mw == 0.0) return noiseless_cellfree(ScenarioKind::Apil);
  // pi^(3/2) lambda omega E[sqrt G] / 2 * sqrt(P / (beta sigma0))
  const double root_moment = weight_moment(gain_weight(cfg.n_antennas), 0.5);
  const double arg = std::pow(kPi, 1.5) * cfg.lambda * omega(angle, cfg, quad) * root_moment / 2.0 *
                     std::sqrt(cfg.power_mw / (cfg.beta * cfg.noise_mw));
  CoverageResult r;
  r.value = r.ci_low = r.ci_high = std::erf(arg);
  r.method = CoverageMethod::ClosedForm;
  r.scenario = ScenarioKind::Apil;
  r.cellfree = true;
  return r;
}

CoverageResult p_cf_apdl_closed_form(const NetworkConfig& cfg, const AltitudeDistribution& alt,
                                     const QuadratureSpec& quad) {
  cfg.validate();
  const auto* p = std::get_if<ProportionalAltitude>(&alt);
  if (!p) throw ConfigError("the error-function form needs altitude proportional to projection distance");
  if (cfg.alpha != 4.0 || cfg.ell != 1.0) throw ConfigError("the error-function form needs alpha = 4 and ell = 1");
  if (cfg.noise_mw == 0.0) return noiseless_cellfree(ScenarioKind::Apdl);
  const double y = std::atan(p->h0);
  auto j = [&](double z) { return Jg(std::pow(z, -2.0), y, cfg, cfg.n_antennas); };
  auto head = integrate(j, 0.0, 1.0, quad);
  auto tail = integrate_power_tail(j, 1.0, 2.0, quad);
  require_converged(head, "J_G integral");
  require_converged(tail, "J_G integral tail");
  const double k = head.value + tail.value;
  CoverageResult r;
  r.value = r.ci_low = r.ci_high =
      std::erf(kPi * cfg.lambda / 2.0 * std::sqrt(cfg.power_mw / (cfg.beta * cfg.noise_mw)) * k);
  r.method = CoverageMethod::ClosedForm;
  r.scenario = ScenarioKind::Apdl;
  r.cellfree = true;
  return r;
}

CoverageResult coverage(const NetworkConfig& cfg, const ScenarioSpec& scenario, const CoverageOptions& opt) {
  if (scenario.is_apil()) {
    if (cfg.n_antennas.is_infinite()) return p_cov_apil_massive(cfg, scenario.angle(), opt);
    return p_cov_apil(cfg, scenario.angle(), opt);
  }
  if (cfg.n_antennas.is_infinite()) return p_cov_apdl_massive(cfg, scenario.altitude(), opt);
  return p_cov_apdl(cfg, scenario.altitude(), opt);
}

CoverageResult coverage_lower_bound(const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                    const CoverageOptions& opt) {
  if (scenario.is_apil()) return p_cov_apil_lower_bound(cfg, scenario.angle(), opt);
  return p_cov_apdl_lower_bound(cfg, scenario.altitude(), opt);
}

CoverageResult coverage_cellfree(const NetworkConfig& cfg, const ScenarioSpec& scenario, const CoverageOptions& opt) {
  if (scenario.is_apil()) return p_cf_apil(cfg, scenario.angle(), opt);
  return p_cf_apdl(cfg, scenario.altitude(), opt);
}

}  // namespace uavcov
