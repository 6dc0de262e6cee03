#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Core>

#include "uavcov/quadrature.hpp"

using namespace uavcov;

TEST_CASE("adaptive quadrature on smooth and kinked integrands") {
  QuadratureSpec spec;
  auto r = integrate([](double x) { return std::exp(-x); }, 0.0, 3.0, spec);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-13));
  const double kink = 0.3;
  auto k = integrate([&](double x) { return std::abs(x - kink); }, 0.0, 1.0, spec, std::span<const double>(&kink, 1));
  CHECK(k.value == doctest::Approx(0.5 * (kink * kink + (1 - kink) * (1 - kink))).epsilon(1e-13));
  auto s = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("complex and vector integrands") {
  QuadratureSpec spec;
  auto c = integrate([](double x) { return std::exp(std::complex<double>(0, x)); }, 0.0, std::numbers::pi, spec);
  CHECK(c.value.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(c.value.real()) < 1e-12);
  CHECK(c.value.imag() == doctest::Approx(2.0).epsilon(1e-12));
  auto v = integrate(
      [](double x) {
        Eigen::VectorXd out(2);
        out << x, x * x;
        return out;
      },
      0.0, 1.0, spec);
  CHECK(v.value(0) == doctest::Approx(0.5));
  CHECK(v.value(1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("semi-infinite maps") {
  QuadratureSpec spec;
  auto e = integrate_to_infinity([](double x) { return std::exp(-x / 5.0); }, 1.0, 5.0, spec);
  CHECK(e.value == doctest::Approx(5.0 * std::exp(-0.2)).epsilon(1e-11));
  auto p = integrate_power_tail([](double x) { return std::pow(x, -2.5); }, 2.0, 2.5, spec);
  CHECK(p.value == doctest::Approx(std::pow(2.0, -1.5) / 1.5).epsilon(1e-11));
}

TEST_CASE("non-convergence is reported") {
  QuadratureSpec spec;
  spec.max_subdivisions = 3;
  auto r = integrate([](double x) { return std::sin(1.0 / (x + 1e-4)); }, 0.0, 1.0, spec);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(require_converged(r, "probe"), NumericalError);
}

TEST_CASE("Gamma Gauss rule integrates moments") {
  for (double shape : {0.5, 1.0, 4.0, 7.3}) {
    GammaGaussRule rule(shape, 32);
    double w = 0, m1 = 0, m3 = 0;
    for (std::size_t i = 0; i < rule.nodes().size(); ++i) {
      w += rule.weights()[i];
      m1 += rule.weights()[i] * rule.nodes()[i];
      m3 += rule.weights()[i] * std::pow(rule.nodes()[i], 3);
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m1 == doctest::Approx(shape).epsilon(1e-11));
    CHECK(m3 == doctest::Approx(shape * (shape + 1) * (shape + 2)).epsilon(1e-10));
  }
  QuadratureSpec spec;
  // E[sqrt(X)] = Gamma(a + 1/2) / Gamma(a)
  const double a = 3.0;
  CHECK(expect_gamma([](double x) { return std::sqrt(x); }, a, spec) ==
        doctest::Approx(std::tgamma(a + 0.5) / std::tgamma(a)).epsilon(1e-9));
}
