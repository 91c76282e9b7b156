#pragma once

// Real-order Bessel functions of the first and second kind, the normalized
// Bessel function used for radial Helmholtz profiles, and bracketed zero
// finding. All functions are pure and reentrant.

#include <functional>
#include <optional>

namespace hotspots::specfun {

/// Largest order covered by the accuracy contract.
inline constexpr double kMaxOrder = 200.0;
/// Largest argument covered by the accuracy contract.
inline constexpr double kMaxArgument = 500.0;
/// Smallest argument accepted by bessel_y.
inline constexpr double kMinArgumentY = 0.5;

/// A Bessel-type function value together with its derivative in the argument.
struct BesselEval {
  double order = 0.0;
  double argument = 0.0;
  double value = 0.0;
  double derivative = 0.0;
};

/// Gamma function for x > 0. Overflows to +inf above x ~ 171.6.
double gamma(double x);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// J_nu(x) and J_nu'(x), 0 <= nu <= 200, 0 <= x <= 500.
BesselEval bessel_j(double nu, double x);

/// Y_nu(x) and Y_nu'(x), 0 <= nu <= 200, 0.5 <= x <= 500.
///
/// Throws UnsupportedRangeError when Y_nu(x) is not representable as a
/// finite double (large orders at small arguments).
BesselEval bessel_y(double nu, double x);

/// Normalized Bessel function
///
///     Lambda_nu(x) = Gamma(nu + 1) (2 / x)^nu J_nu(x),   Lambda_nu(0) = 1,
///
/// with derivative Lambda_nu'(x) = -x / (2 (nu + 1)) Lambda_{nu+1}(x).
/// r^{-nu} J_nu(r s) is proportional to Lambda_nu(r s), so radial Helmholtz
/// profiles can be written without the overflowing r^{1-d/2} factors.
BesselEval normalized_bessel(double nu, double x);

/// Closed sign-change interval [lo, hi] refined to absolute width tol.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-12;
};

using ScalarFunction = std::function<double(double)>;

/// Bisection on a bracket whose endpoints have opposite signs (or a zero).
double bisect(const ScalarFunction& f, const Bracket& bracket);

/// Smallest root of f past scan_start.
///
/// Steps x = scan_start + i * scan_step until a sign change, bisects the step
/// to width tol and, when a derivative is supplied, applies one Newton polish
/// step that is kept only if it stays inside the bracket and reduces |f|.
/// Throws SearchExhaustedError after 10^6 steps without a sign change.
double find_first_zero(const ScalarFunction& f, double scan_start, double scan_step, double tol,
                       const std::optional<ScalarFunction>& derivative = std::nullopt);

/// Default scan step for zeros of order-nu Bessel functions.
double default_zero_scan_step(double nu);

}  // namespace hotspots::specfun
