#pragma once

// Slow extended-precision Bessel evaluator used only as a test oracle.
// Plain ascending series in 50-digit decimal arithmetic; shares no code with
// the library's fast path.

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>

namespace oracle {

using Real = boost::multiprecision::cpp_dec_float_50;

inline Real pi() { return boost::math::constants::pi<Real>(); }

inline bool is_integer(const Real& nu) { return nu == boost::multiprecision::floor(nu); }

// 1/Gamma(z), zero at the poles.
inline Real rgamma(const Real& z) {
  if (z <= 0 && is_integer(z)) return Real(0);
  return 1 / boost::math::tgamma(z);
}

// J_nu(x) for any real nu (negative non-integer orders included), x > 0.
inline Real besselj(const Real& nu, const Real& x) {
  if (nu < 0 && is_integer(nu)) {
    const long n = static_cast<long>(-nu);
    return (n % 2 == 0 ? 1 : -1) * besselj(-nu, x);
  }
  const Real half = x / 2;
  const Real q = -half * half;
  Real sum = 0;
  Real term = rgamma(nu + 1);  // (-x^2/4)^k / (k! Gamma(nu + k + 1))
  const Real tol = Real("1e-48");
  for (int k = 0; k < 5000; ++k) {
    sum += term;
    if (k > half && abs(term) <= tol * abs(sum)) break;
    term *= q / ((k + 1) * (nu + k + 1));
  }
  return sum * pow(half, nu);
}

inline Real digamma_int(long m) {  // psi(m + 1)
  Real s = -boost::math::constants::euler<Real>();
  for (long k = 1; k <= m; ++k) s += Real(1) / k;
  return s;
}

inline Real bessely_integer(long n, const Real& x) {
  const Real half = x / 2;
  Real finite = 0;
  for (long k = 0; k < n; ++k) {
    finite += boost::math::tgamma(Real(n - k)) / boost::math::tgamma(Real(k + 1)) *
              pow(half, Real(2 * k - n));
  }
  Real tail = 0;
  const Real q = -half * half;
  Real pw = 1 / boost::math::tgamma(Real(n + 1));  // (-x^2/4)^k / (k! (n+k)!)
  Real psi_k = digamma_int(0);
  Real psi_nk = digamma_int(n);
  const Real tol = Real("1e-48");
  for (long k = 0; k < 5000; ++k) {
    const Real term = (psi_k + psi_nk) * pw;
    tail += term;
    if (k > half && abs(term) <= tol * abs(tail)) break;
    pw *= q / ((k + 1) * (n + k + 1));
    psi_k += Real(1) / (k + 1);
    psi_nk += Real(1) / (n + k + 1);
  }
  tail *= pow(half, Real(n));
  return 2 / pi() * besselj(Real(n), x) * log(half) - finite / pi() - tail / pi();
}

inline Real bessely(const Real& nu, const Real& x) {
  if (is_integer(nu)) {
    const long n = static_cast<long>(abs(nu));
    const Real y = bessely_integer(n, x);
    return (nu < 0 && n % 2 == 1) ? Real(-y) : y;
  }
  const Real s = sin(nu * pi());
  const Real c = cos(nu * pi());
  return (besselj(nu, x) * c - besselj(-nu, x)) / s;
}

inline Real besselj_prime(const Real& nu, const Real& x) {
  return (besselj(nu - 1, x) - besselj(nu + 1, x)) / 2;
}

inline Real bessely_prime(const Real& nu, const Real& x) {
  return (bessely(nu - 1, x) - bessely(nu + 1, x)) / 2;
}

inline double to_double(const Real& v) { return v.convert_to<double>(); }

}  // namespace oracle
