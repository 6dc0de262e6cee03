#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Core>

namespace uavcov {

enum class InversionMethod { Talbot, Euler };

std::string to_string(InversionMethod m);
InversionMethod parse_inversion_method(const std::string& s);

struct InversionSpec {
  InversionMethod method = InversionMethod::Talbot;
  // Talbot: number of contour nodes. Euler: total terms, 2 * (nodes / 2) + 1.
  int nodes = 32;
  double target_rel_err = 1e-8;
  // Recompute with the other method and fail when the two disagree by more than 100x target.
  bool cross_check = false;
  void validate() const;
};

using LaplaceFn = std::function<std::complex<double>(std::complex<double>)>;
// Evaluates the transform at every entry of a node vector in one call.
using LaplaceBatchFn = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

struct InversionDiagnostics {
  double raw = 0.0;              // value before clamping
  double cross_difference = 0.0; // |Talbot - Euler| when cross-checked
  bool clamped = false;
};

// f(t) from F(s) = int_0^inf e^(-st) f(t) dt, t > 0.
double invert_laplace(const LaplaceFn& F, double t, const InversionSpec& spec = {});
double invert_laplace_batch(const LaplaceBatchFn& F, double t, const InversionSpec& spec = {},
                            InversionDiagnostics* diag = nullptr);

// Nodes s_k at which a method samples F for time t (for callers that cache transforms).
Eigen::VectorXcd inversion_nodes(double t, const InversionSpec& spec);

// CCDF of Z at z given F = Laplace transform of 1/Z: inverse of F(s)/s at 1/z, clamped to [0, 1].
double ccdf_via_inversion(const LaplaceFn& F, double z, const InversionSpec& spec = {},
                          InversionDiagnostics* diag = nullptr);
double ccdf_via_inversion_batch(const LaplaceBatchFn& F, double z, const InversionSpec& spec = {},
                                InversionDiagnostics* diag = nullptr);
// P[X > x] from F = Laplace transform of X, through (1 - F(s)) / s; avoids 1 - CDF cancellation.
double tail_via_inversion_batch(const LaplaceBatchFn& F, double x, const InversionSpec& spec = {},
                                InversionDiagnostics* diag = nullptr);

struct DerivativeSpec {
  double rel_tol = 1e-7;  // allowed disagreement between radii r and r/2
  double radius_fraction = 0.5;
  int min_nodes = 64;
};

// m-th derivative at real t0 > 0 of a function analytic in a disk around t0 that is real on
// the real axis, by the Cauchy integral on a circle. Throws NumericalError when the radii
// r and r/2 disagree.
double high_order_derivative(const std::function<std::complex<double>(std::complex<double>)>& g,
                             int m, double t0, const DerivativeSpec& spec = {});
// Same, with all contour nodes (both radii) passed to g in one vector.
double high_order_derivative_batch(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& g,
                                   int m, double t0, const DerivativeSpec& spec = {});

}  // namespace uavcov
