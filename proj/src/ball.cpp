#include "hotspots/ball.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "hotspots/errors.hpp"
#include "hotspots/specfun.hpp"

namespace hotspots::ball {

namespace {

constexpr double kZeroTol = 1e-13;

void check_dim(int d) {
  if (d < kMinDim || d > kMaxDim) {
    std::ostringstream os;
    os << "dimension " << d << " outside supported range [" << kMinDim << ", " << kMaxDim << "]";
    throw UnsupportedRangeError(os.str());
  }
}

BallSpectrum compute_spectrum(int d) {
  const double nu0 = 0.5 * d - 1.0;
  const double nu1 = 0.5 * d;

  auto lam0 = [nu0](double x) { return specfun::normalized_bessel(nu0, x).value; };
  auto dlam0 = [nu0](double x) { return specfun::normalized_bessel(nu0, x).derivative; };
  const double j_root =
      specfun::find_first_zero(lam0, std::max(1e-3, 0.5 * nu0),
                               specfun::default_zero_scan_step(nu0), kZeroTol, dlam0);

  // r^{1-d/2} J_{d/2}(r) is proportional to r Lambda_{d/2}(r); its derivative
  // Lambda + r Lambda' vanishes at the first Neumann radius. The second
  // derivative follows from r Lambda'' + (2 nu + 1) Lambda' + r Lambda = 0.
  auto neumann = [nu1](double x) {
    const auto l = specfun::normalized_bessel(nu1, x);
    return l.value + x * l.derivative;
  };
  auto dneumann = [nu1](double x) {
    const auto l = specfun::normalized_bessel(nu1, x);
    return (1.0 - 2.0 * nu1) * l.derivative - x * l.value;
  };
  const double p_root = specfun::find_first_zero(
      neumann, 1e-3, specfun::default_zero_scan_step(nu1), kZeroTol, dneumann);

  BallSpectrum s{d, j_root * j_root, p_root * p_root, j_root, p_root};
  if (!(s.mu1 < s.lambda1)) {
    throw ConvergenceError("ball_spectrum: Neumann eigenvalue not below Dirichlet eigenvalue");
  }
  return s;
}

}  // namespace

const BallSpectrum& ball_spectrum(int d) {
  check_dim(d);
  static std::shared_mutex mutex;
  static std::map<int, std::unique_ptr<const BallSpectrum>> memo;
  {
    std::shared_lock lock(mutex);
    if (auto it = memo.find(d); it != memo.end()) return *it->second;
  }
  auto computed = std::make_unique<const BallSpectrum>(compute_spectrum(d));
  std::unique_lock lock(mutex);
  auto [it, inserted] = memo.try_emplace(d, std::move(computed));
  return *it->second;
}

EtaProfile::EtaProfile(int d)
    : spectrum_(ball_spectrum(d)),
      order_(0.5 * d - 1.0),
      boundary_value_(specfun::normalized_bessel(order_, spectrum_.p_root).value) {}

double EtaProfile::operator()(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << "eta: radius " << r << " outside [0, 1]";
    throw DomainError(os.str());
  }
  if (r == 1.0) return 1.0;
  return extended(r);
}

double EtaProfile::extended(double r) const {
  if (!(r >= 0.0)) throw DomainError("eta: negative radius");
  return specfun::normalized_bessel(order_, r * spectrum_.p_root).value / boundary_value_;
}

double EtaProfile::derivative(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("eta: radius outside [0, 1]");
  return spectrum_.p_root * specfun::normalized_bessel(order_, r * spectrum_.p_root).derivative /
         boundary_value_;
}

double EtaProfile::inverse(double level) const {
  const double top = s_d();
  if (!(level >= 1.0 && level <= top * (1.0 + 1e-14))) {
    std::ostringstream os;
    os.precision(12);
    os << "eta inverse: level " << level << " outside [1, " << top << "]";
    throw DomainError(os.str());
  }
  if (level >= top) return 0.0;
  if (level == 1.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((*this)(mid) > level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double eta(int d, double r) { return EtaProfile(d)(r); }

double hotspots_constant(int d) { return EtaProfile(d).s_d(); }

double landscape_v(int d, double mu, double r) {
  const BallSpectrum& s = ball_spectrum(d);
  if (!(mu > 0.0 && mu < s.lambda1)) {
    std::ostringstream os;
    os.precision(12);
    os << "landscape_v: mu=" << mu << " outside (0, lambda_d=" << s.lambda1 << ")";
    throw DomainError(os.str());
  }
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("landscape_v: radius outside [0, 1]");
  const double nu = 0.5 * d - 1.0;
  const double k = std::sqrt(mu);
  return specfun::normalized_bessel(nu, r * k).value / specfun::normalized_bessel(nu, k).value;
}

double eta_infinity(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("eta_infinity: radius outside [0, 1]");
  return std::exp(0.5 * (1.0 - r * r));
}

VolumeCurve volume_curve(int d, int n_samples) {
  if (n_samples < 2) throw DomainError("volume_curve: need at least 2 samples");
  const EtaProfile profile(d);
  VolumeCurve curve{d, {}};
  curve.points.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double fraction = 1.0 - static_cast<double>(i) / (n_samples - 1);
    const double radius = std::pow(fraction, 1.0 / d);
    curve.points.push_back({profile(radius), fraction});
  }
  return curve;
}

double volume_fraction(int d, double level) {
  const EtaProfile profile(d);
  return std::pow(profile.inverse(level), d);
}

std::vector<AsymptoticRow> asymptotic_report(const std::vector<int>& dims, double level) {
  const double sqrt_e = std::exp(0.5);
  std::vector<AsymptoticRow> rows;
  rows.reserve(dims.size());
  for (int d : dims) {
    const EtaProfile profile(d);
    AsymptoticRow row;
    row.dim = d;
    row.s_d = profile.s_d();
    row.gap = row.s_d - sqrt_e;
    constexpr int kGrid = 2000;
    for (int i = 0; i < kGrid; ++i) {
      const double r = static_cast<double>(i) / (kGrid - 1);
      row.profile_sup = std::max(row.profile_sup, std::abs(profile(r) - eta_infinity(r)));
    }
    row.level = level;
    row.volume = std::pow(profile.inverse(level), d);
    row.decay_rate = -std::log(row.volume) / d;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hotspots::ball
