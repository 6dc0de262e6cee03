#include "uavcov/quadrature.hpp"

#include <Eigen/Eigenvalues>

namespace uavcov {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw ConfigError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw ConfigError("quadrature needs at least one subdivision");
}

GammaGaussRule::GammaGaussRule(double shape, int nodes) : shape_(shape) {
  if (!(shape > 0.0) || nodes < 2) throw ConfigError("Gamma rule needs shape > 0 and >= 2 nodes");
  const double beta = shape - 1.0;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int i = 0; i < nodes; ++i) {
    jacobi(i, i) = 2.0 * i + beta + 1.0;
    if (i > 0) {
      const double off = std::sqrt(i * (i + beta));
      jacobi(i, i - 1) = off;
      jacobi(i - 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  nodes_.resize(nodes);
  weights_.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    nodes_[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    weights_[i] = v0 * v0;
  }
}

namespace {

double apply(const GammaGaussRule& rule, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes().size(); ++i) sum += rule.weights()[i] * f(rule.nodes()[i]);
  return sum;
}

}  // namespace

double expect_gamma(const std::function<double(double)>& f, double shape,
                    const QuadratureSpec& spec) {
  const GammaGaussRule fine(shape, 64);
  const GammaGaussRule coarse(shape, 40);
  const double a = apply(fine, f);
  const double b = apply(coarse, f);
  if (std::abs(a - b) <= std::max(spec.abs_tol, spec.rel_tol * std::abs(a))) return a;

  const double log_norm = std::lgamma(shape);
  auto weighted = [&](double x) {
    if (x <= 0.0) return 0.0;
    return f(x) * std::exp((shape - 1.0) * std::log(x) - x - log_norm);
  };
  const double mode = std::max(shape - 1.0, 0.0);
  const double knee = mode + 4.0 * std::sqrt(shape) + 1.0;
  // x^(shape-1) is singular at the origin for shape < 1; substitute x = w^(1/shape).
  QuadResult<double> head;
  if (shape < 1.0) {
    auto sub = [&](double w) {
      const double x = std::pow(w, 1.0 / shape);
      return f(x) * std::exp(-x - log_norm) / shape;
    };
    head = integrate(sub, 0.0, std::pow(knee, shape), spec);
  } else {
    const double bps[] = {mode};
    head = integrate(weighted, 0.0, knee, spec, bps);
  }
  auto tail = integrate_to_infinity(weighted, knee, std::sqrt(shape) + 1.0, spec);
  require_converged(head, "Gamma expectation");
  require_converged(tail, "Gamma expectation tail");
  return head.value + tail.value;
}

}  // namespace uavcov
