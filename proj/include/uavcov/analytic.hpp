#pragma once

#include <complex>
#include <functional>
#include <variant>

#include "uavcov/complex_math.hpp"
#include "uavcov/model.hpp"
#include "uavcov/quadrature.hpp"

namespace uavcov {

using cplx = std::complex<double>;

// Weighting variable W attached to each point of the shot process.
struct UnitWeight {};
// W = power * G with G ~ Exp(1).
struct ExpWeight {
  double power = 1.0;
};
// W = power * G with G ~ Gamma(n, 1).
struct GammaWeight {
  double power = 1.0;
  int n = 1;
};
using WeightModel = std::variant<UnitWeight, ExpWeight, GammaWeight>;

void validate(const WeightModel& w);
std::string describe(const WeightModel& w);

// E[W^a] from closed forms.
double weight_moment(const WeightModel& w, double a);
// P[W > x].
double weight_ccdf(const WeightModel& w, double x);

// 1 - E[exp(-x W)], accurate for small |x|; real or complex x with Re x >= 0.
template <class T>
T weight_laplace_complement(const WeightModel& w, T x) {
  using cmath::expm1;
  using cmath::log1p;
  if (std::holds_alternative<UnitWeight>(w)) return -expm1(-x);
  if (const auto* e = std::get_if<ExpWeight>(&w)) {
    const T px = e->power * x;
    return px / (1.0 + px);
  }
  const auto& g = std::get<GammaWeight>(w);
  return -expm1(-static_cast<double>(g.n) * log1p(g.power * x));
}

// Gamma(N,1) gain, or the unit gain used for the N -> infinity limits.
WeightModel gain_weight(AntennaCount n);

// E{cos^2(Theta) [rho(Theta)(1 - l^(2/a)) + l^(2/a)]}
double omega(const AngleDistribution& angle, const NetworkConfig& cfg, const QuadratureSpec& spec = {});
// E[cos^2 Theta] and E[rho(Theta)]
double mean_cos2(const AngleDistribution& angle, const QuadratureSpec& spec = {});
double mean_los(const AngleDistribution& angle, const NetworkConfig& cfg, const QuadratureSpec& spec = {});

// Unit-weight reduction: y -> Omega(y^(-alpha/2)), the mean number of points of the
// attenuation-scaled process within squared distance y.
double Omega_los(double y, const AltitudeDistribution& alt, const NetworkConfig& cfg,
                 const QuadratureSpec& spec = {});
// d/dy of Omega_los, from the hinge limits under the integral sign.
double Omega_los_derivative(double y, const AltitudeDistribution& alt, const NetworkConfig& cfg,
                            const QuadratureSpec& spec = {});
// Omega(r) for a general weight, r > 0; integrates the weight CCDF over z.
double Omega_general(double r, const AltitudeDistribution& alt, const WeightModel& w,
                     const NetworkConfig& cfg, const QuadratureSpec& spec = {});

// CDF of R* = max W_i L_i |U_i|^-alpha.
double cdf_rstar_apil(double r, const NetworkConfig& cfg, const AngleDistribution& angle,
                      const WeightModel& w, const QuadratureSpec& spec = {});
double cdf_rstar_apdl(double r, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                      const WeightModel& w, const QuadratureSpec& spec = {});

// Laplace transform of the complete shot signal T0 = sum W_i L_i |U_i|^-alpha.
// APIL: log L(s) = -c s^(2/alpha) with c = pi lambda E[W^v] Gamma(1-v) omega.
double shot_exponent_apil(const NetworkConfig& cfg, const AngleDistribution& angle,
                          const WeightModel& w, const QuadratureSpec& spec = {});
double laplace_T0_apil(double s, const NetworkConfig& cfg, const AngleDistribution& angle,
                       const WeightModel& w, const QuadratureSpec& spec = {});
cplx laplace_T0_apil(cplx s, const NetworkConfig& cfg, const AngleDistribution& angle,
                     const WeightModel& w, const QuadratureSpec& spec = {});
// APDL: exp(-pi lambda int_0^inf E_H[J_W(s z^-alpha/2, atan(H/sqrt z))] dz).
double laplace_T0_apdl(double s, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                       const WeightModel& w, const QuadratureSpec& spec = {});
cplx laplace_T0_apdl(cplx s, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                     const WeightModel& w, const QuadratureSpec& spec = {});

// I_W(u, v) = int_1^inf [1 - L_W(u z^(-1/v))] dz, u > 0, 0 < v < 1.
double I_W(double u, double v, const WeightModel& w, const QuadratureSpec& spec = {});
// I_G(u, v) = int_1^inf u / (y^(1/v) + u) dy through pi v / sin(pi v).
double I_G(double u, double v, const QuadratureSpec& spec = {});
// Complex-argument I_G for u off the cut (-inf, -1].
cplx I_G(cplx u, double v, const QuadratureSpec& spec = {});
// Same quantity for a batch of arguments (one vector-valued quadrature).
Eigen::VectorXcd I_G(const Eigen::VectorXcd& u, double v, const QuadratureSpec& spec = {});

// J_W(x, Y) for a fixed angle Y.
template <class T>
T J_W(T x, double y, const WeightModel& w, const NetworkConfig& cfg) {
  const double rho = los_probability_unchecked(y, cfg.c1, cfg.c2);
  const double ca = std::pow(std::cos(y), cfg.alpha);
  return rho * weight_laplace_complement(w, T(x * ca)) +
         (1.0 - rho) * weight_laplace_complement(w, T(x * (cfg.ell * ca)));
}
double J_W(double x, const AngleDistribution& y, const WeightModel& w, const NetworkConfig& cfg,
           const QuadratureSpec& spec = {});

// J_G with G ~ Gamma(N, 1) for finite N and the unit gain for N = infinity.
double Jg(double x, double y, const NetworkConfig& cfg, AntennaCount n);
double Jg(double x, const AngleDistribution& y, const NetworkConfig& cfg, AntennaCount n,
          const QuadratureSpec& spec = {});

// Laplace transform of T_K (all points but the K nearest projections), K >= 1.
double laplace_TK_apil(double s, int k, const NetworkConfig& cfg, const AngleDistribution& angle,
                       const WeightModel& w, const QuadratureSpec& spec = {});
double laplace_TK_apdl(double s, int k, const NetworkConfig& cfg, const AltitudeDistribution& alt,
                       const WeightModel& w, const QuadratureSpec& spec = {});
// APIL T_K transform with s allowed to depend on (Theta, D_K), D_K the squared K-th nearest
// projection distance; evaluated by Gamma quadrature over D_K.
double laplace_TK_apil_general(const std::function<double(double theta, double d)>& s_of, int k,
                               const NetworkConfig& cfg, const AngleDistribution& angle,
                               const WeightModel& w, const QuadratureSpec& spec = {});
// Conditioned transform at s = zeta sec^alpha(Theta) D_K^(alpha/2):
// [1 + E[rho] I_W(zeta) + (1 - E[rho]) I_W(zeta l)]^-K.
double laplace_TK_conditioned_closed(double zeta, int k, const NetworkConfig& cfg,
                                     const AngleDistribution& angle, const WeightModel& w,
                                     const QuadratureSpec& spec = {});
double laplace_TK_conditioned_direct(double zeta, int k, const NetworkConfig& cfg,
                                     const AngleDistribution& angle, const WeightModel& w,
                                     const QuadratureSpec& spec = {});

namespace detail {

// int_{z_lo}^inf E_H[g(z, H)] dz, with g(z, H) depending on z mostly through q = z + H^2 and
// decaying like q^-decay. q_scale marks where the decay sets in. ProportionalAltitude is
// handled by substituting H = h0 sqrt(z).
template <class G>
auto apdl_z_integral(G&& g, const AltitudeDistribution& alt, double z_lo, double q_scale,
                     double decay, const QuadratureSpec& spec) {
  auto inner = [&](auto&& fz, double h2) {
    const double knee = std::max(2.0 * z_lo, z_lo + 8.0 * std::max(q_scale - h2, 0.0) + q_scale);
    auto head = integrate(fz, z_lo, knee, spec);
    auto tail = integrate_power_tail(fz, knee, decay, spec);
    require_converged(head, "z integral");
    require_converged(tail, "z integral tail");
    auto out = head.value;
    out += tail.value;
    return out;
  };
  using V = std::decay_t<decltype(g(1.0, 0.0))>;
  if (const auto* p = std::get_if<ProportionalAltitude>(&alt)) {
    const double h0 = p->h0;
    return V(inner([&](double z) { return V(g(z, h0 * std::sqrt(z))); }, 0.0));
  }
  return expect_over_altitude(
      [&](double h) { return V(inner([&](double z) { return V(g(z, h)); }, h * h)); }, alt, spec);
}

}  // namespace detail

}  // namespace uavcov
