#include "uavcov/analytic.hpp"

#include <array>
#include <sstream>

namespace uavcov {

namespace {

constexpr double kPi = std::numbers::pi;

double ell_prime(const NetworkConfig& cfg) { return std::pow(cfg.ell, 2.0 / cfg.alpha); }

// Typical magnitude of W, used to place quadrature knees.
double weight_scale(const WeightModel& w) {
  if (const auto* e = std::get_if<ExpWeight>(&w)) return e->power;
  if (const auto* g = std::get_if<GammaWeight>(&w)) return g->power * g->n;
  return 1.0;
}

void check_v(double v) {
  if (!(v > 0.0 && v < 1.0)) throw ConfigError("shape exponent v must lie in (0, 1)");
}

double rho_at(double theta, const NetworkConfig& cfg) {
  return los_probability_unchecked(theta, cfg.c1, cfg.c2);
}

}  // namespace

void validate(const WeightModel& w) {
  if (const auto* e = std::get_if<ExpWeight>(&w)) {
    if (!(e->power > 0.0) || !std::isfinite(e->power)) throw ConfigError("weight power must be > 0");
  } else if (const auto* g = std::get_if<GammaWeight>(&w)) {
    if (!(g->power > 0.0) || !std::isfinite(g->power)) throw ConfigError("weight power must be > 0");
    if (g->n < 1) throw ConfigError("Gamma weight shape must be >= 1");
  }
}

std::string describe(const WeightModel& w) {
  std::ostringstream os;
  if (std::holds_alternative<UnitWeight>(w))
    os << "unit";
  else if (const auto* e = std::get_if<ExpWeight>(&w))
    os << "exp(power=" << e->power << ")";
  else {
    const auto& g = std::get<GammaWeight>(w);
    os << "gamma(power=" << g.power << ",n=" << g.n << ")";
  }
  return os.str();
}

double weight_moment(const WeightModel& w, double a) {
  validate(w);
  if (std::holds_alternative<UnitWeight>(w)) return 1.0;
  if (const auto* e = std::get_if<ExpWeight>(&w)) return std::pow(e->power, a) * std::tgamma(1.0 + a);
  const auto& g = std::get<GammaWeight>(w);
  return std::pow(g.power, a) * std::exp(std::lgamma(g.n + a) - std::lgamma(g.n));
}

double weight_ccdf(const WeightModel& w, double x) {
  if (x < 0.0) return 1.0;
  if (std::holds_alternative<UnitWeight>(w)) return x < 1.0 ? 1.0 : 0.0;
  if (const auto* e = std::get_if<ExpWeight>(&w)) return std::exp(-x / e->power);
  const auto& g = std::get<GammaWeight>(w);
  const double y = x / g.power;
  // Poisson tail sum for integer shape
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < g.n; ++k) {
    term *= y / k;
    sum += term;
  }
  return std::exp(-y) * sum;
}

WeightModel gain_weight(AntennaCount n) {
  if (n.is_infinite()) return UnitWeight{};
  return GammaWeight{1.0, n.value()};
}

double omega(const AngleDistribution& angle, const NetworkConfig& cfg, const QuadratureSpec& spec) {
  const double lp = ell_prime(cfg);
  return expect_over_angle(
      [&](double t) {
        const double c = std::cos(t);
        return c * c * (rho_at(t, cfg) * (1.0 - lp) + lp);
      },
      angle, spec);
}

double mean_cos2(const AngleDistribution& angle, const QuadratureSpec& spec) {
  return expect_over_angle(
      [](double t) {
        const double c = std::cos(t);
        return c * c;
      },
      angle, spec);
}

double mean_los(const AngleDistribution& angle, const NetworkConfig& cfg, const QuadratureSpec& spec) {
  return expect_over_angle([&](double t) { return rho_at(t, cfg); }, angle, spec);
}

double Omega_los(double y, const AltitudeDistribution& alt, const NetworkConfig& cfg,
                 const QuadratureSpec& spec) {
  if (!(y >= 0.0)) throw ConfigError("Omega_los needs y >= 0");
  const double lp = ell_prime(cfg);
  if (const auto* p = std::get_if<ProportionalAltitude>(&alt))
    return omega(DegenerateAngle{std::atan(p->h0)}, cfg, spec) * y;
  auto at_h = [&](double h) {
    const double h2 = h * h;
    const double a = std::max(y * lp - h2, 0.0);
    const double b = std::max(y - h2, 0.0);
    if (!(b > a)) return a;
    // z = w^2 removes the square-root behaviour of the angle near z = 0
    auto r = integrate([&](double w) { return 2.0 * w * rho_at(std::atan2(h, w), cfg); },
                       std::sqrt(a), std::sqrt(b), spec.scaled(b));
    require_converged(r, "Omega_los");
    return a + r.value;
  };
  const std::array<double, 2> kinks{std::sqrt(y * lp), std::sqrt(y)};
  return expect_over_altitude(at_h, alt, spec.scaled(y), kinks);
}

double Omega_los_derivative(double y, const AltitudeDistribution& alt, const NetworkConfig& cfg,
                            const QuadratureSpec& spec) {
  if (!(y >= 0.0)) throw ConfigError("Omega_los_derivative needs y >= 0");
  const double lp = ell_prime(cfg);
  if (const auto* p = std::get_if<ProportionalAltitude>(&alt))
    return omega(DegenerateAngle{std::atan(p->h0)}, cfg, spec);
  auto at_h = [&](double h) {
    const double h2 = h * h;
    double out = 0.0;
    if (y > h2) out += rho_at(std::atan2(h, std::sqrt(y - h2)), cfg);
    if (y * lp > h2) out += lp * (1.0 - rho_at(std::atan2(h, std::sqrt(y * lp - h2)), cfg));
    return out;
  };
  const std::array<double, 2> kinks{std::sqrt(y * lp), std::sqrt(y)};
  return expect_over_altitude(at_h, alt, spec, kinks);
}

double Omega_general(double r, const AltitudeDistribution& alt, const WeightModel& w,
                     const NetworkConfig& cfg, const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw ConfigError("Omega needs r > 0");
  validate(w);
  const double a = cfg.alpha;
  const double h0 = std::holds_alternative<ProportionalAltitude>(alt)
                        ? std::get<ProportionalAltitude>(alt).h0
                        : -1.0;
  auto integrand = [&](double z, double h) {
    const double q = z + h * h;
    const double theta = std::atan2(h, std::sqrt(z));
    const double rho = rho_at(theta, cfg);
    const double x = r * std::pow(q, 0.5 * a);
    double out = rho * weight_ccdf(w, x);
    if (cfg.ell > 0.0) out += (1.0 - rho) * weight_ccdf(w, x / cfg.ell);
    return out;
  };
  // Largest q with a non-negligible CCDF; the unit weight has a hard edge there.
  double x_max = 1.0;
  if (!std::holds_alternative<UnitWeight>(w)) {
    const double n = std::holds_alternative<GammaWeight>(w) ? std::get<GammaWeight>(w).n : 1.0;
    x_max = (n + 60.0 + 12.0 * std::sqrt(n)) * (weight_scale(w) / n);
  }
  const double q_max = std::pow(x_max / r, 2.0 / a);
  const double q_nlos = cfg.ell > 0.0 ? q_max * std::pow(cfg.ell, 2.0 / a) : 0.0;
  auto over_z = [&](double h) {
    const double scale = h0 >= 0.0 ? 1.0 + h0 * h0 : 1.0;
    const double hz = h0 >= 0.0 ? 0.0 : h * h;
    const double z_max = q_max / scale - hz;
    if (!(z_max > 0.0)) return 0.0;
    const std::array<double, 1> cut{q_nlos / scale - hz};
    auto res = integrate(
        [&](double z) { return integrand(z, h0 >= 0.0 ? h0 * std::sqrt(z) : h); }, 0.0, z_max,
        spec.scaled(q_max), std::holds_alternative<UnitWeight>(w) ? std::span<const double>(cut)
                                                                  : std::span<const double>());
    require_converged(res, "Omega");
    return res.value;
  };
  if (h0 >= 0.0) return over_z(0.0);
  const std::array<double, 2> kinks{std::sqrt(q_nlos), std::sqrt(q_max)};
  return expect_over_altitude(over_z, alt, spec.scaled(q_max), kinks);
}

double cdf_rstar_apil(double r, const NetworkConfig& cfg, const AngleDistribution& angle,
                      const WeightModel& w, const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw ConfigError("R* CDF needs r > 0");
  const double v = 2.0 / cfg.alpha;
  return std::exp(-kPi * cfg.lambda * weight_moment(w, v) * omega(angle, cfg, spec) * std::pow(r, -v));
}

double cdf_rstar_apdl(double r, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                      const WeightModel& w, const QuadratureSpec& spec) {
  if (!(r > 0.0)) throw ConfigError("R* CDF needs r > 0");
  return std::exp(-kPi * cfg.lambda * Omega_general(r, alt, w, cfg, spec));
}

double shot_exponent_apil(const NetworkConfig& cfg, const AngleDistribution& angle,
                          const WeightModel& w, const QuadratureSpec& spec) {
  const double v = 2.0 / cfg.alpha;
  return kPi * cfg.lambda * weight_moment(w, v) * std::tgamma(1.0 - v) * omega(angle, cfg, spec);
}

double laplace_T0_apil(double s, const NetworkConfig& cfg, const AngleDistribution& angle,
                       const WeightModel& w, const QuadratureSpec& spec) {
  if (!(s >= 0.0)) throw ConfigError("Laplace argument must be >= 0");
  if (s == 0.0) return 1.0;
  return std::exp(-shot_exponent_apil(cfg, angle, w, spec) * std::pow(s, 2.0 / cfg.alpha));
}

cplx laplace_T0_apil(cplx s, const NetworkConfig& cfg, const AngleDistribution& angle,
                     const WeightModel& w, const QuadratureSpec& spec) {
  if (s == cplx(0.0)) return 1.0;
  return std::exp(-shot_exponent_apil(cfg, angle, w, spec) * std::pow(s, 2.0 / cfg.alpha));
}

namespace {

template <class T>
T apdl_T0_exponent(T s, double z_lo, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                   const WeightModel& w, const QuadratureSpec& spec) {
  const double a = cfg.alpha;
  auto g = [&](double z, double h) {
    const double q = z + h * h;
    const double theta = std::atan2(h, std::sqrt(z));
    const double rho = rho_at(theta, cfg);
    const double path = std::pow(q, -0.5 * a);
    T out = rho * weight_laplace_complement(w, T(s * path));
    if (cfg.ell > 0.0) out += (1.0 - rho) * weight_laplace_complement(w, T(s * (cfg.ell * path)));
    return out;
  };
  const double q_scale = std::pow(std::abs(s) * weight_scale(w), 2.0 / a);
  return kPi * cfg.lambda * detail::apdl_z_integral(g, alt, z_lo, q_scale, 0.5 * a, spec.scaled(q_scale));
}

}  // namespace

double laplace_T0_apdl(double s, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                       const WeightModel& w, const QuadratureSpec& spec) {
  if (!(s >= 0.0)) throw ConfigError("Laplace argument must be >= 0");
  validate(w);
  if (s == 0.0) return 1.0;
  return std::exp(-apdl_T0_exponent(s, 0.0, cfg, alt, w, spec));
}

cplx laplace_T0_apdl(cplx s, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                     const WeightModel& w, const QuadratureSpec& spec) {
  validate(w);
  if (s == cplx(0.0)) return 1.0;
  return std::exp(-apdl_T0_exponent(s, 0.0, cfg, alt, w, spec));
}

double I_W(double u, double v, const WeightModel& w, const QuadratureSpec& spec) {
  check_v(v);
  validate(w);
  if (!(u >= 0.0) || !std::isfinite(u)) throw ConfigError("I_W needs finite u >= 0");
  if (u == 0.0) return 0.0;
  auto f = [&](double x) { return weight_laplace_complement(w, std::pow(x, -1.0 / v)); };
  const double cut = std::pow(u, -v);
  const double uv = std::pow(u, v);
  if (cut <= std::pow(weight_scale(w), v)) {
    auto head = integrate(f, 0.0, cut, spec.scaled(cut));
    require_converged(head, "I_W");
    return uv * (std::tgamma(1.0 - v) * weight_moment(w, v) - head.value);
  }
  auto tail = integrate_power_tail(f, cut, 1.0 / v, spec.scaled(cut * f(cut)));
  require_converged(tail, "I_W tail");
  return uv * tail.value;
}

double I_G(double u, double v, const QuadratureSpec& spec) {
  check_v(v);
  if (!(u >= 0.0) || !std::isfinite(u)) throw ConfigError("I_G needs finite u >= 0");
  if (u == 0.0) return 0.0;
  const double a = 1.0 / v;
  auto f = [&](double r) { return 1.0 / (1.0 + std::pow(r, a)); };
  const double cut = std::pow(u, -v);
  const double uv = std::pow(u, v);
  if (u >= 1.0) {
    auto head = integrate(f, 0.0, cut, spec.scaled(cut));
    require_converged(head, "I_G");
    return uv * (kPi * v / std::sin(kPi * v) - head.value);
  }
  auto tail = integrate_power_tail(f, cut, a, spec.scaled(cut * f(cut)));
  require_converged(tail, "I_G tail");
  return uv * tail.value;
}

Eigen::VectorXcd I_G(const Eigen::VectorXcd& u, double v, const QuadratureSpec& spec) {
  check_v(v);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u[i].imag() == 0.0 && u[i].real() <= -1.0)
      throw NumericalError("I_G evaluated on its branch cut");
  const double a = 1.0 / v;
  const double p = a / (a - 1.0);
  auto f = [&](double w) -> Eigen::VectorXcd {
    const double wp = std::pow(w, p);
    return (1.0 + u.array() * wp).inverse().matrix();
  };
  auto r = integrate(f, 0.0, 1.0, spec);
  require_converged(r, "complex I_G");
  return (u.array() * r.value.array() / (a - 1.0)).matrix();
}

cplx I_G(cplx u, double v, const QuadratureSpec& spec) {
  Eigen::VectorXcd x(1);
  x[0] = u;
  return I_G(x, v, spec)[0];
}

double J_W(double x, const AngleDistribution& y, const WeightModel& w, const NetworkConfig& cfg,
           const QuadratureSpec& spec) {
  validate(w);
  if (!(x >= 0.0)) throw ConfigError("J_W needs x >= 0");
  return expect_over_angle([&](double t) { return J_W(x, t, w, cfg); }, y, spec);
}

double Jg(double x, double y, const NetworkConfig& cfg, AntennaCount n) {
  if (!(x >= 0.0)) throw ConfigError("J_G needs x >= 0");
  if (!(y >= 0.0 && y <= kPi / 2)) throw ConfigError("J_G angle must lie in [0, pi/2]");
  return J_W(x, y, gain_weight(n), cfg);
}

double Jg(double x, const AngleDistribution& y, const NetworkConfig& cfg, AntennaCount n,
          const QuadratureSpec& spec) {
  return J_W(x, y, gain_weight(n), cfg, spec);
}

double laplace_TK_apil_general(const std::function<double(double, double)>& s_of, int k,
                               const NetworkConfig& cfg, const AngleDistribution& angle,
                               const WeightModel& w, const QuadratureSpec& spec) {
  if (k < 1) throw ConfigError("truncation order K must be >= 1");
  validate(w);
  const double v = 2.0 / cfg.alpha;
  const double pl = kPi * cfg.lambda;
  // x = pi lambda D_K ~ Gamma(K, 1)
  auto f = [&](double x) {
    if (x <= 0.0) return 1.0;
    const double d = x / pl;
    const double mean_i = expect_over_angle(
        [&](double t) {
          const double s = s_of(t, d);
          const double base = s * std::pow(std::cos(t), cfg.alpha) * std::pow(d, -0.5 * cfg.alpha);
          const double rho = rho_at(t, cfg);
          double out = rho * I_W(base, v, w, spec);
          if (cfg.ell > 0.0) out += (1.0 - rho) * I_W(base * cfg.ell, v, w, spec);
          return out;
        },
        angle, spec);
    return std::exp(-x * mean_i);
  };
  return expect_gamma(f, k, spec);
}

double laplace_TK_apil(double s, int k, const NetworkConfig& cfg, const AngleDistribution& angle,
                       const WeightModel& w, const QuadratureSpec& spec) {
  if (!(s >= 0.0)) throw ConfigError("Laplace argument must be >= 0");
  if (s == 0.0) return 1.0;
  return laplace_TK_apil_general([s](double, double) { return s; }, k, cfg, angle, w, spec);
}

double laplace_TK_apdl(double s, int k, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                       const WeightModel& w, const QuadratureSpec& spec) {
  if (!(s >= 0.0)) throw ConfigError("Laplace argument must be >= 0");
  if (k < 1) throw ConfigError("truncation order K must be >= 1");
  validate(w);
  if (s == 0.0) return 1.0;
  const double pl = kPi * cfg.lambda;
  auto f = [&](double x) { return std::exp(-apdl_T0_exponent(s, x / pl, cfg, alt, w, spec)); };
  return expect_gamma(f, k, spec);
}

double laplace_TK_conditioned_closed(double zeta, int k, const NetworkConfig& cfg,
                                     const AngleDistribution& angle, const WeightModel& w,
                                     const QuadratureSpec& spec) {
  if (k < 1) throw ConfigError("truncation order K must be >= 1");
  const double v = 2.0 / cfg.alpha;
  const double er = mean_los(angle, cfg, spec);
  const double inner = 1.0 + er * I_W(zeta, v, w, spec) + (1.0 - er) * I_W(zeta * cfg.ell, v, w, spec);
  return std::pow(inner, -k);
}

double laplace_TK_conditioned_direct(double zeta, int k, const NetworkConfig& cfg,
                                     const AngleDistribution& angle, const WeightModel& w,
                                     const QuadratureSpec& spec) {
  const double a = cfg.alpha;
  return laplace_TK_apil_general(
      [&](double t, double d) { return zeta * std::pow(std::cos(t), -a) * std::pow(d, 0.5 * a); }, k,
      cfg, angle, w, spec);
}

}  // namespace uavcov
