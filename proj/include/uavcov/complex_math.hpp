#pragma once

#include <cmath>
#include <complex>

namespace uavcov::cmath {

using cplx = std::complex<double>;

inline double expm1(double x) { return std::expm1(x); }
inline double log1p(double x) { return std::log1p(x); }

// exp(z) - 1 without cancellation for small |z|.
inline cplx expm1(cplx z) {
  const double a = z.real(), b = z.imag();
  const double s = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

// log(1 + z); Kahan's correction keeps full relative accuracy near zero.
inline cplx log1p(cplx z) {
  const cplx u = 1.0 + z;
  if (u == cplx(1.0, 0.0)) return z;
  const cplx d = u - 1.0;
  return std::log(u) * (z / d);
}

}  // namespace uavcov::cmath
