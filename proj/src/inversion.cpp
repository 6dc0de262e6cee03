#include "uavcov/inversion.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <vector>

#include "uavcov/errors.hpp"

namespace uavcov {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

int euler_m(const InversionSpec& spec) { return spec.nodes / 2; }

// Fixed Talbot contour of Abate and Valko.
struct TalbotRule {
  Eigen::VectorXcd nodes, weights;
  double scale;
};

TalbotRule talbot_rule(double t, int m) {
  TalbotRule rule;
  const double r = 2.0 * m / (5.0 * t);
  rule.nodes.resize(m);
  rule.weights.resize(m);
  rule.nodes[0] = r;
  rule.weights[0] = 0.5 * std::exp(r * t);
  for (int k = 1; k < m; ++k) {
    const double th = k * kPi / m;
    const double cot = std::cos(th) / std::sin(th);
    const cplx s = r * th * cplx(cot, 1.0);
    const double sigma = th + (th * cot - 1.0) * cot;
    rule.nodes[k] = s;
    rule.weights[k] = std::exp(t * s) * cplx(1.0, sigma);
  }
  rule.scale = r / m;
  return rule;
}

// Euler summation of Abate and Whitt.
struct EulerRule {
  Eigen::VectorXcd nodes;
  Eigen::VectorXd weights;
  double scale;
};

EulerRule euler_rule(double t, int m) {
  EulerRule rule;
  const int n = 2 * m + 1;
  std::vector<double> xi(n, 1.0);
  xi[0] = 0.5;
  xi[2 * m] = std::pow(2.0, -m);
  double binom = 1.0;  // C(m, j)
  for (int j = 1; j < m; ++j) {
    binom *= static_cast<double>(m - j + 1) / j;
    xi[2 * m - j] = xi[2 * m - j + 1] + std::pow(2.0, -m) * binom;
  }
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double a = m * std::log(10.0) / 3.0;
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = cplx(a, kPi * k) / t;
    rule.weights[k] = (k % 2 == 0 ? 1.0 : -1.0) * xi[k];
  }
  rule.scale = std::pow(10.0, m / 3.0) / t;
  return rule;
}

double apply(const LaplaceBatchFn& F, double t, InversionMethod method, const InversionSpec& spec) {
  if (method == InversionMethod::Talbot) {
    const auto rule = talbot_rule(t, spec.nodes);
    const Eigen::VectorXcd f = F(rule.nodes);
    if (f.size() != rule.nodes.size()) throw NumericalError("transform returned a wrong-size batch");
    double sum = 0.0;
    for (Eigen::Index k = 0; k < f.size(); ++k) sum += (rule.weights[k] * f[k]).real();
    return rule.scale * sum;
  }
  const auto rule = euler_rule(t, euler_m(spec));
  const Eigen::VectorXcd f = F(rule.nodes);
  if (f.size() != rule.nodes.size()) throw NumericalError("transform returned a wrong-size batch");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < f.size(); ++k) sum += rule.weights[k] * f[k].real();
  return rule.scale * sum;
}

LaplaceBatchFn batched(const LaplaceFn& F) {
  return [&F](const Eigen::VectorXcd& s) {
    Eigen::VectorXcd out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) out[i] = F(s[i]);
    return out;
  };
}

double clamp_probability(double raw, const InversionSpec& spec, InversionDiagnostics* diag) {
  const double band = 10.0 * spec.target_rel_err;
  double out = raw;
  bool clamped = false;
  if (raw < 0.0 || raw > 1.0) {
    clamped = true;
    out = raw < 0.0 ? 0.0 : 1.0;
    if (raw < -band || raw > 1.0 + band)
      std::cerr << "warning: inverted probability " << raw << " clamped to " << out << "\n";
  }
  if (diag) {
    diag->raw = raw;
    diag->clamped = clamped;
  }
  return out;
}

}  // namespace

std::string to_string(InversionMethod m) { return m == InversionMethod::Talbot ? "talbot" : "euler"; }

InversionMethod parse_inversion_method(const std::string& s) {
  if (s == "talbot") return InversionMethod::Talbot;
  if (s == "euler") return InversionMethod::Euler;
  throw ConfigError("inversion method must be 'talbot' or 'euler'");
}

void InversionSpec::validate() const {
  if (nodes < 8) throw ConfigError("inversion needs at least 8 nodes");
  if (!(target_rel_err > 0.0)) throw ConfigError("inversion target error must be > 0");
}

Eigen::VectorXcd inversion_nodes(double t, const InversionSpec& spec) {
  if (spec.method == InversionMethod::Talbot) return talbot_rule(t, spec.nodes).nodes;
  return euler_rule(t, euler_m(spec)).nodes;
}

double invert_laplace_batch(const LaplaceBatchFn& F, double t, const InversionSpec& spec,
                            InversionDiagnostics* diag) {
  spec.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("inversion point must be positive and finite");
  const double value = apply(F, t, spec.method, spec);
  if (!std::isfinite(value)) throw NumericalError("Laplace inversion produced a non-finite value");
  if (spec.cross_check) {
    const InversionMethod other =
        spec.method == InversionMethod::Talbot ? InversionMethod::Euler : InversionMethod::Talbot;
    const double check = apply(F, t, other, spec);
    const double diff = std::abs(check - value);
    if (diag) diag->cross_difference = diff;
    const double allowed = 100.0 * spec.target_rel_err * std::max(std::abs(value), std::abs(check));
    if (!(diff <= allowed))
      throw NumericalError("Talbot and Euler inversions disagree: " + std::to_string(value) + " vs " +
                           std::to_string(check));
  }
  if (diag) diag->raw = value;
  return value;
}

double invert_laplace(const LaplaceFn& F, double t, const InversionSpec& spec) {
  return invert_laplace_batch(batched(F), t, spec);
}

double ccdf_via_inversion_batch(const LaplaceBatchFn& F, double z, const InversionSpec& spec,
                                InversionDiagnostics* diag) {
  if (!(z > 0.0)) throw ConfigError("CCDF argument must be > 0");
  auto over_s = [&F](const Eigen::VectorXcd& s) -> Eigen::VectorXcd {
    return (F(s).array() / s.array()).matrix();
  };
  const double raw = invert_laplace_batch(over_s, 1.0 / z, spec, diag);
  return clamp_probability(raw, spec, diag);
}

double ccdf_via_inversion(const LaplaceFn& F, double z, const InversionSpec& spec,
                          InversionDiagnostics* diag) {
  return ccdf_via_inversion_batch(batched(F), z, spec, diag);
}

double tail_via_inversion_batch(const LaplaceBatchFn& F, double x, const InversionSpec& spec,
                                InversionDiagnostics* diag) {
  if (!(x > 0.0)) throw ConfigError("tail argument must be > 0");
  auto over_s = [&F](const Eigen::VectorXcd& s) -> Eigen::VectorXcd {
    return ((1.0 - F(s).array()) / s.array()).matrix();
  };
  const double raw = invert_laplace_batch(over_s, x, spec, diag);
  return clamp_probability(raw, spec, diag);
}

double high_order_derivative_batch(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& g,
                                   int m, double t0, const DerivativeSpec& spec) {
  if (m < 0) throw ConfigError("derivative order must be >= 0");
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw ConfigError("derivative point must be positive");
  if (m == 0) {
    Eigen::VectorXcd x(1);
    x[0] = t0;
    return g(x)[0].real();
  }
  const int n = std::max(spec.min_nodes, 4 * m);
  const double r1 = spec.radius_fraction * t0;
  const double r2 = 0.5 * r1;
  Eigen::VectorXcd nodes(2 * n);
  std::vector<cplx> phase(n);
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * kPi * k / n;
    phase[k] = std::polar(1.0, phi);
    nodes[k] = t0 + r1 * phase[k];
    nodes[n + k] = t0 + r2 * phase[k];
  }
  const Eigen::VectorXcd vals = g(nodes);
  if (vals.size() != nodes.size()) throw NumericalError("derivative integrand returned a wrong-size batch");
  const double fact = std::exp(std::lgamma(m + 1.0));
  auto estimate = [&](int offset, double r, double& scale) {
    cplx sum = 0.0;
    double peak = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx v = vals[offset + k];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalError("derivative integrand not finite on the contour");
      sum += v * std::pow(std::conj(phase[k]), m);
      peak = std::max(peak, std::abs(v));
    }
    const double f = fact / (n * std::pow(r, m));
    scale = f * n * peak;
    return (sum * f).real();
  };
  double s1 = 0.0, s2 = 0.0;
  const double d1 = estimate(0, r1, s1);
  const double d2 = estimate(n, r2, s2);
  const double allowed = spec.rel_tol * std::max(std::abs(d1), std::abs(d2)) + 1e-13 * s2;
  if (!(std::abs(d1 - d2) <= allowed))
    throw NumericalError("contour derivative unstable: radius r gives " + std::to_string(d1) +
                         ", r/2 gives " + std::to_string(d2));
  return d1;
}

double high_order_derivative(const std::function<cplx(cplx)>& g, int m, double t0, const DerivativeSpec& spec) {
  return high_order_derivative_batch(
      [&g](const Eigen::VectorXcd& t) {
        Eigen::VectorXcd out(t.size());
        for (Eigen::Index i = 0; i < t.size(); ++i) out[i] = g(t[i]);
        return out;
      },
      m, t0, spec);
}

}  // namespace uavcov
