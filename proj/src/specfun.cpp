#include "hotspots/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "hotspots/errors.hpp"

namespace hotspots::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-30;
constexpr int kMaxIterations = 100000;
// Downward recurrences are rescaled once they exceed this magnitude.
constexpr double kRescaleThreshold = 1e250;

std::string format_args(const char* what, double nu, double x) {
  std::ostringstream os;
  os.precision(17);
  os << what << "(nu=" << nu << ", x=" << x << ")";
  return os.str();
}

void check_envelope(const char* what, double nu, double x, double x_min) {
  if (std::isnan(nu) || std::isnan(x)) {
    throw DomainError(format_args(what, nu, x) + ": NaN argument");
  }
  if (!(nu >= 0.0 && nu <= kMaxOrder)) {
    throw UnsupportedRangeError(format_args(what, nu, x) + ": order outside [0, 200]");
  }
  if (!(x >= x_min && x <= kMaxArgument)) {
    std::ostringstream os;
    os << format_args(what, nu, x) << ": argument outside [" << x_min << ", " << kMaxArgument
       << "]";
    throw UnsupportedRangeError(os.str());
  }
}

// Ascending series S_nu(x) = sum_k (-x^2/4)^k / (k! (nu+1)_k), so that
// J_nu(x) = (x/2)^nu / Gamma(nu+1) * S_nu(x). Also returns the companion sum
// sum_k (nu + 2k) t_k used for the derivative.
struct SeriesSums {
  double plain = 0.0;
  double weighted = 0.0;
};

SeriesSums ascending_series(double nu, double x) {
  const double q = -0.25 * x * x;
  double term = 1.0;
  SeriesSums s{1.0, nu};
  for (int k = 1; k < kMaxIterations; ++k) {
    term *= q / (static_cast<double>(k) * (nu + k));
    s.plain += term;
    s.weighted += (nu + 2.0 * k) * term;
    const bool plain_done = std::abs(term) <= kEps * std::abs(s.plain);
    const bool weighted_done = std::abs(term) * (nu + 2.0 * k) <= kEps * std::abs(s.weighted);
    if (term == 0.0 || (plain_done && weighted_done)) break;
  }
  return s;
}

// Where the ascending series is free of cancellation: successive term ratios
// stay below one half from the first term on.
bool series_is_stable(double nu, double x, double factor) {
  return 0.25 * x * x <= factor * (nu + 1.0);
}

// Gamma1(mu) = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) and
// Gamma2(mu) = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2 for |mu| <= 1/2.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  // Taylor coefficients of 1/Gamma(z) = sum c_k z^k (even k >= 2).
  static constexpr double kEven[] = {0.57721566490153286061,  -0.042002635034095235529,
                                     -0.042197734555544336748, 0.0072189432466630995424,
                                     -0.00021524167411495097282, -0.000020134854780788238656,
                                     1.1330272319816958824e-6, 6.1160951044814158179e-9};
  TemmeGammas g{};
  g.gampl = 1.0 / std::tgamma(1.0 + mu);
  g.gammi = 1.0 / std::tgamma(1.0 - mu);
  g.gam2 = 0.5 * (g.gammi + g.gampl);
  if (std::abs(mu) < 0.1) {
    double sum = 0.0;
    double pw = 1.0;
    for (double c : kEven) {
      sum += c * pw;
      pw *= mu * mu;
    }
    g.gam1 = -sum;
  } else {
    g.gam1 = (g.gammi - g.gampl) / (2.0 * mu);
  }
  return g;
}

struct BesselJY {
  double j, jp, y, yp;
};

// Steed's method with Temme's series for small arguments: continued fraction
// for J'/J at order nu, downward recurrence to |mu| <= 1/2, Y_mu from Temme's
// series (x < 2) or the complex continued fraction (x >= 2), the Wronskian to
// normalize J, and upward recurrence for Y.
BesselJY steed_temme(double nu, double x) {
  const int nl = (x < 2.0) ? static_cast<int>(nu + 0.5)
                           : std::max(0, static_cast<int>(nu - x + 1.5));
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;

  // CF1 (modified Lentz) for f_nu = J_nu' / J_nu.
  int isign = 1;
  double h = nu * xi;
  if (h < kTiny) h = kTiny;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int it = 1;
  for (; it <= kMaxIterations; ++it) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (it > kMaxIterations) {
    throw ConvergenceError(format_args("bessel continued fraction", nu, x));
  }

  double rjl = isign * kTiny;
  double rjpl = h * rjl;
  double rjl1 = rjl;
  double rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
    if (std::abs(rjl) > kRescaleThreshold) {
      const double s = 1.0 / kRescaleThreshold;
      rjl *= s;
      rjpl *= s;
      rjl1 *= s;
      rjp1 *= s;
    }
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double rjmu = 0.0;
  double rymu = 0.0;
  double rymup = 0.0;
  double ry1 = 0.0;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fct = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    double dd = -std::log(x2);
    double e = mu * dd;
    const double fct2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = 2.0 / kPi * fct * (g.gam1 * std::cosh(e) + g.gam2 * fct2 * dd);
    e = std::exp(e);
    double p = e / (g.gampl * kPi);
    double q = 1.0 / (e * kPi * g.gammi);
    const double pimu2 = 0.5 * pimu;
    const double fct3 = (std::abs(pimu2) < kEps) ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = kPi * pimu2 * fct3 * fct3;
    double cc = 1.0;
    dd = -x2 * x2;
    double sum = ff + r * q;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIterations; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      cc *= dd / i;
      p /= (i - mu);
      q /= (i + mu);
      const double del = cc * (ff + r * q);
      sum += del;
      const double del1 = cc * p - i * del;
      sum1 += del1;
      if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
    }
    if (i > kMaxIterations) {
      throw ConvergenceError(format_args("bessel Temme series", nu, x));
    }
    rymu = -sum;
    ry1 = -sum1 * xi2;
    rymup = mu * xi * rymu - ry1;
    rjmu = w / (rymup - f * rymu);
  } else {
    // CF2 (Steed) for p + iq = (J' + iY') / (J + iY) at order mu.
    double a = 0.25 - mu2;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fc = a * xi / (p * p + q * q);
    double cr = br + q * fc;
    double ci = bi + p * fc;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    int i = 2;
    for (; i <= kMaxIterations; ++i) {
      a += 2 * (i - 1);
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
      fc = a / (cr * cr + ci * ci);
      cr = br + cr * fc;
      ci = bi - ci * fc;
      if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
      den = dr * dr + di * di;
      dr /= den;
      di /= -den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      temp = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = temp;
      if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
    }
    if (i > kMaxIterations) {
      throw ConvergenceError(format_args("bessel CF2", nu, x));
    }
    const double gam = (p - f) / q;
    rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = mu * xi * rymu - rymup;
  }

  const double scale = rjmu / rjl;
  BesselJY out{};
  out.j = rjl1 * scale;
  out.jp = rjp1 * scale;
  for (int i = 1; i <= nl; ++i) {
    const double rytemp = (mu + i) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
  }
  out.y = rymu;
  out.yp = nu * xi * rymu - ry1;
  return out;
}

}  // namespace

double gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    std::ostringstream os;
    os << "gamma(" << x << "): argument must be positive and finite";
    throw DomainError(os.str());
  }
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) {
    std::ostringstream os;
    os << "gamma(" << x << ") overflows double; use log_gamma";
    throw UnsupportedRangeError(os.str());
  }
  return g;
}

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    std::ostringstream os;
    os << "log_gamma(" << x << "): argument must be positive and finite";
    throw DomainError(os.str());
  }
  return std::lgamma(x);
}

BesselEval bessel_j(double nu, double x) {
  check_envelope("bessel_j", nu, x, 0.0);
  BesselEval out{nu, x, 0.0, 0.0};
  if (x == 0.0) {
    out.value = (nu == 0.0) ? 1.0 : 0.0;
    if (nu == 1.0) {
      out.derivative = 0.5;
    } else if (nu > 0.0 && nu < 1.0) {
      out.derivative = std::numeric_limits<double>::infinity();
    }
    return out;
  }
  if (series_is_stable(nu, x, 0.5)) {
    const SeriesSums s = ascending_series(nu, x);
    const double log_half_x = std::log(0.5 * x);
    const double log_gnu = std::lgamma(nu + 1.0);
    out.value = std::exp(nu * log_half_x - log_gnu) * s.plain;
    // d/dx (x/2)^{nu+2k} = (nu+2k)/x (x/2)^{nu+2k}
    out.derivative = std::exp(nu * log_half_x - log_gnu) * s.weighted / x;
    return out;
  }
  const BesselJY jy = steed_temme(nu, x);
  out.value = jy.j;
  out.derivative = jy.jp;
  return out;
}

BesselEval bessel_y(double nu, double x) {
  check_envelope("bessel_y", nu, x, kMinArgumentY);
  const BesselJY jy = steed_temme(nu, x);
  if (!std::isfinite(jy.y) || !std::isfinite(jy.yp)) {
    throw UnsupportedRangeError(format_args("bessel_y", nu, x) + ": value overflows double");
  }
  return BesselEval{nu, x, jy.y, jy.yp};
}

BesselEval normalized_bessel(double nu, double x) {
  check_envelope("normalized_bessel", nu, x, 0.0);
  BesselEval out{nu, x, 1.0, 0.0};
  if (x == 0.0) return out;
  if (series_is_stable(nu, x, 1.0)) {
    out.value = ascending_series(nu, x).plain;
    out.derivative = -x / (2.0 * (nu + 1.0)) * ascending_series(nu + 1.0, x).plain;
    return out;
  }
  const BesselJY jy = steed_temme(nu, x);
  const double log_scale = std::lgamma(nu + 1.0) + nu * std::log(2.0 / x);
  auto scaled = [log_scale](double v) {
    if (v == 0.0) return 0.0;
    return std::copysign(std::exp(log_scale + std::log(std::abs(v))), v);
  };
  out.value = scaled(jy.j);
  // Lambda' = scale * (J' - nu/x J)
  out.derivative = scaled(jy.jp - nu / x * jy.j);
  return out;
}

double bisect(const ScalarFunction& f, const Bracket& bracket) {
  if (!(bracket.lo < bracket.hi) || !(bracket.tol > 0.0)) {
    throw BracketError("bisect: need lo < hi and tol > 0");
  }
  double lo = bracket.lo;
  double hi = bracket.hi;
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    std::ostringstream os;
    os.precision(17);
    os << "bisect: no sign change on [" << lo << ", " << hi << "]";
    throw BracketError(os.str());
  }
  while (hi - lo > bracket.tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double find_first_zero(const ScalarFunction& f, double scan_start, double scan_step, double tol,
                       const std::optional<ScalarFunction>& derivative) {
  if (!(scan_start > 0.0) || !(scan_step > 0.0) || !(tol > 0.0)) {
    throw DomainError("find_first_zero: scan_start, scan_step and tol must be positive");
  }
  constexpr long kMaxSteps = 1000000;
  double a = scan_start;
  double fa = f(a);
  if (fa == 0.0) return a;
  for (long i = 1; i <= kMaxSteps; ++i) {
    const double b = scan_start + static_cast<double>(i) * scan_step;
    const double fb = f(b);
    if (fb == 0.0) return b;
    if (std::signbit(fa) != std::signbit(fb)) {
      double root = bisect(f, Bracket{a, b, tol});
      if (derivative) {
        const double fr = f(root);
        const double dfr = (*derivative)(root);
        if (dfr != 0.0 && std::isfinite(dfr)) {
          const double polished = root - fr / dfr;
          if (polished >= a && polished <= b && std::abs(f(polished)) <= std::abs(fr)) {
            root = polished;
          }
        }
      }
      return root;
    }
    a = b;
    fa = fb;
  }
  std::ostringstream os;
  os << "find_first_zero: no sign change within " << kMaxSteps << " steps of " << scan_step
     << " from " << scan_start;
  throw SearchExhaustedError(os.str());
}

double default_zero_scan_step(double nu) { return 0.05 * std::max(1.0, std::cbrt(nu)); }

}  // namespace hotspots::specfun
