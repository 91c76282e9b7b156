#include "hotspots/effective.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "hotspots/ball.hpp"
#include "hotspots/errors.hpp"
#include "hotspots/specfun.hpp"

namespace hotspots::effective {

namespace {

constexpr double kScanFloor = 1e-8;
constexpr double kJumpTolerance = 1e-8;
constexpr double kTaylorLimit = 1.0;  // use the series about R while sqrt(h) delta <= this

RadialValue taylor_outer(const EffectiveParams& p, double h, double r) {
  const double R = p.outer_radius();
  const double t = r - R;
  if (t == 0.0) return {1.0, 0.0};
  const double d = p.dim;
  const double L = p.angular_eigenvalue();
  const double R2 = R * R;

  // r^2 g'' + (d-1) r g' + (h r^2 - L) g = 0 expanded in t = r - R.
  double a_m2 = 0.0;  // a_{m-2}
  double a_m1 = 0.0;  // a_{m-1}
  double a_m = 1.0;   // a_m
  double a_p1 = 0.0;  // a_{m+1}
  double value = 1.0;
  double deriv = 0.0;
  double abs_sum = 1.0;
  double tm = 1.0;  // t^m
  int quiet = 0;
  for (int m = 0; m < 5000; ++m) {
    const double num = (m + 1.0) * (2.0 * R * m + (d - 1.0) * R) * a_p1 +
                       (m * (m - 1.0) + (d - 1.0) * m + h * R2 - L) * a_m + 2.0 * h * R * a_m1 +
                       h * a_m2;
    const double a_p2 = -num / (R2 * (m + 2.0) * (m + 1.0));
    // add terms m+1 (first pass also covers a_1 = 0) and advance
    const double term_v = a_p1 * tm * t;
    const double term_d = (m + 1.0) * a_p1 * tm;
    value += term_v;
    deriv += term_d;
    abs_sum += std::abs(term_v);
    tm *= t;
    a_m2 = a_m1;
    a_m1 = a_m;
    a_m = a_p1;
    a_p1 = a_p2;
    if (m > 4 && std::abs(term_v) <= 1e-18 * abs_sum && std::abs(term_d * t) <= 1e-18 * abs_sum) {
      if (++quiet >= 3) return {value, deriv};
    } else {
      quiet = 0;
    }
  }
  throw ConvergenceError("outer Taylor series did not converge");
}

RadialValue bessel_outer(const EffectiveParams& p, double h, double r) {
  const double R = p.outer_radius();
  const OuterBasis at_r = outer_basis(p, h, r);
  const OuterBasis at_R = outer_basis(p, h, R);
  const double wronskian = 2.0 * std::pow(R, 1.0 - p.dim) / std::numbers::pi;
  return {(at_R.v.derivative * at_r.u.value - at_R.u.derivative * at_r.v.value) / wronskian,
          (at_R.v.derivative * at_r.u.derivative - at_R.u.derivative * at_r.v.derivative) /
              wronskian};
}

struct Matching {
  RadialValue w;
  RadialValue g;
};

Matching matching(const EffectiveParams& p, double h) {
  return {inner_profile(p, h, 1.0), outer_neumann_solution(p, h, 1.0)};
}

double default_h_max(const EffectiveParams& p) {
  return 4.0 * (ball::ball_spectrum(p.dim).lambda1 + p.angular_eigenvalue());
}

// Reconstructs (A, B) from the better-conditioned matching row and scores the
// other rows. Returns nullopt for spurious roots.
std::optional<EffectiveEigenpair> build_pair(const EffectiveParams& p, double h, int index) {
  const Matching m = matching(p, h);
  const double a = p.alpha();
  const double w = m.w.value, dw = m.w.derivative;
  const double g = m.g.value, dg = m.g.derivative;

  // rows: flux continuity (dw, -dg), jump (dw + a w, -a g)
  const double n1 = std::hypot(dw, dg);
  const double n2 = std::hypot(dw + a * w, a * g);
  double A, B;
  if (n1 >= n2) {
    A = dg;
    B = dw;
  } else {
    A = a * g;
    B = dw + a * w;
  }
  if (A == 0.0 && B == 0.0) return std::nullopt;

  auto rel = [](double residual, double scale) {
    return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual);
  };
  const double flux = rel(A * dw - B * dg, std::max(std::abs(A * dw), std::abs(B * dg)));
  const double jump = rel(A * dw - a * (B * g - A * w),
                          std::max({std::abs(A * dw), std::abs(a * B * g), std::abs(a * A * w)}));
  const double worst = std::max(flux, jump);
  if (!(worst <= kJumpTolerance)) return std::nullopt;

  if (A < 0.0 || (A == 0.0 && B > 0.0)) {
    A = -A;
    B = -B;
  }
  const double scale = std::max(std::abs(A * w), std::abs(B * g));
  if (scale > 0.0) {
    A /= scale;
    B /= scale;
  }

  EffectiveEigenpair pair;
  pair.params = p;
  pair.index = index;
  pair.h = h;
  pair.inner_coeff = A;
  pair.outer_coeff = B;
  pair.traces = {A * inner_profile(p, h, 0.0).value, A * w, B * g, B};
  const double sc = secular_scale(p, h);
  pair.secular_residual = sc > 0.0 ? std::abs(secular(p, h)) / sc : 0.0;
  pair.jump_residual = worst;
  try {
    const OuterBasis at_R = outer_basis(p, h, p.outer_radius());
    const double wronskian = 2.0 * std::pow(p.outer_radius(), 1.0 - p.dim) / std::numbers::pi;
    pair.outer_coeffs = std::array<double, 2>{B * at_R.v.derivative / wronskian,
                                              -B * at_R.u.derivative / wronskian};
  } catch (const UnsupportedRangeError&) {
    pair.outer_coeffs.reset();
  }
  return pair;
}

EffectiveEigenpair constant_pair(const EffectiveParams& p) {
  EffectiveEigenpair pair;
  pair.params = p;
  pair.index = 0;
  pair.h = 0.0;
  pair.inner_coeff = 1.0;
  pair.outer_coeff = 1.0;
  pair.traces = {1.0, 1.0, 1.0, 1.0};
  return pair;
}

}  // namespace

void validate(const EffectiveParams& p) {
  std::ostringstream os;
  if (p.dim < ball::kMinDim || p.dim > ball::kMaxDim) {
    os << "dim=" << p.dim << " outside [" << ball::kMinDim << ", " << ball::kMaxDim << "]";
  } else if (p.ell < 0) {
    os << "ell=" << p.ell << " must be >= 0";
  } else if (p.order() > specfun::kMaxOrder) {
    os << "Bessel order " << p.order() << " exceeds " << specfun::kMaxOrder;
  } else if (!(std::isfinite(p.beta) && p.beta > 0.0)) {
    os << "beta=" << p.beta << " must be > 0";
  } else if (!(p.delta > 0.0 && p.delta < 1.0)) {
    os << "delta=" << p.delta << " must lie in (0, 1)";
  } else {
    return;
  }
  throw DomainError(os.str());
}

RadialValue inner_profile(const EffectiveParams& p, double h, double r) {
  if (!(h >= 0.0)) throw DomainError("inner_profile: h must be >= 0");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("inner_profile: r outside [0, 1]");
  const double s = std::sqrt(h);
  const auto lam = specfun::normalized_bessel(p.order(), r * s);
  const int l = p.ell;
  const double rl = l == 0 ? 1.0 : std::pow(r, l);
  double deriv = rl * s * lam.derivative;
  if (l > 0) deriv += l * (l == 1 ? 1.0 : std::pow(r, l - 1)) * lam.value;
  return {rl * lam.value, deriv};
}

OuterBasis outer_basis(const EffectiveParams& p, double h, double r) {
  if (!(h > 0.0)) throw DomainError("outer_basis: h must be > 0");
  if (!(r > 0.0)) throw DomainError("outer_basis: r must be > 0");
  const double s = std::sqrt(h);
  const double nu = p.order();
  const double e = 1.0 - 0.5 * p.dim;
  const double re = std::pow(r, e);
  const double re1 = e * std::pow(r, e - 1.0);
  const auto j = specfun::bessel_j(nu, r * s);
  const auto y = specfun::bessel_y(nu, r * s);
  return {{re * j.value, re1 * j.value + re * s * j.derivative},
          {re * y.value, re1 * y.value + re * s * y.derivative}};
}

RadialValue outer_neumann_solution(const EffectiveParams& p, double h, double r,
                                   OuterMethod method) {
  if (!(h >= 0.0)) throw DomainError("outer_neumann_solution: h must be >= 0");
  if (!(r >= 1.0 && r <= p.outer_radius())) {
    throw DomainError("outer_neumann_solution: r outside [1, 1 + delta]");
  }
  if (method == OuterMethod::kAuto) {
    method = std::sqrt(h) * p.delta <= kTaylorLimit ? OuterMethod::kTaylor : OuterMethod::kBessel;
  }
  return method == OuterMethod::kTaylor ? taylor_outer(p, h, r) : bessel_outer(p, h, r);
}

double secular(const EffectiveParams& p, double h) {
  const Matching m = matching(p, h);
  return m.w.derivative * m.g.derivative -
         p.alpha() * (m.w.derivative * m.g.value - m.w.value * m.g.derivative);
}

double secular_scale(const EffectiveParams& p, double h) {
  const Matching m = matching(p, h);
  return std::abs(m.w.derivative * m.g.derivative) +
         p.alpha() * (std::abs(m.w.derivative * m.g.value) + std::abs(m.w.value * m.g.derivative));
}

double EffectiveEigenpair::evaluate(double r, Side side) const {
  if (h == 0.0) return inner_coeff;
  if (side == Side::kInner) return inner_coeff * inner_profile(params, h, r).value;
  return outer_coeff * outer_neumann_solution(params, h, r).value;
}

double EffectiveEigenpair::derivative(double r, Side side) const {
  if (h == 0.0) return 0.0;
  if (side == Side::kInner) return inner_coeff * inner_profile(params, h, r).derivative;
  return outer_coeff * outer_neumann_solution(params, h, r).derivative;
}

std::vector<EffectiveEigenpair> eigenvalues(const EffectiveParams& p, int k_max,
                                            const ScanOptions& scan) {
  validate(p);
  if (k_max < 0) throw DomainError("eigenvalues: k_max must be >= 0");
  if (scan.n_points < 2) throw DomainError("eigenvalues: need at least 2 scan points");
  const double h_max = scan.h_max > 0.0 ? scan.h_max : default_h_max(p);
  if (!(h_max > kScanFloor)) throw DomainError("eigenvalues: h_max too small");
  const double dedup = 1e-7 * h_max;

  std::vector<EffectiveEigenpair> out;
  const auto wanted = static_cast<std::size_t>(k_max) + 1;
  if (p.ell == 0) out.push_back(constant_pair(p));

  auto f = [&p](double h) { return secular(p, h); };
  auto accept = [&](double root) {
    if (!out.empty() && out.back().h > 0.0 && root - out.back().h < dedup) return;
    if (auto pair = build_pair(p, root, static_cast<int>(out.size()))) out.push_back(*pair);
  };

  double h_prev = kScanFloor;
  double f_prev = f(h_prev);
  if (f_prev == 0.0) accept(h_prev);
  const double step = (h_max - kScanFloor) / (scan.n_points - 1);
  for (int i = 1; i < scan.n_points && out.size() < wanted; ++i) {
    const double h = kScanFloor + step * i;
    const double fh = f(h);
    if (fh == 0.0) {
      accept(h);
    } else if (f_prev != 0.0 && std::signbit(fh) != std::signbit(f_prev)) {
      const double root = specfun::bisect(f, {h_prev, h, 1e-15 * std::max(1.0, h)});
      accept(root);
    }
    h_prev = h;
    f_prev = fh;
  }
  if (out.size() < wanted) {
    std::ostringstream os;
    os << "eigenvalues: found " << out.size() << " of " << wanted << " eigenvalues below h_max="
       << h_max << " (d=" << p.dim << ", ell=" << p.ell << ", beta=" << p.beta
       << ", delta=" << p.delta << ")";
    throw SearchExhaustedError(os.str());
  }
  return out;
}

RatioResult effective_ratio(int d, double beta, double delta) {
  const EffectiveParams radial_params{d, 0, beta, delta};
  const EffectiveParams angular_params{d, 1, beta, delta};
  const auto radial = eigenvalues(radial_params, 1);
  const auto angular = eigenvalues(angular_params, 0);
  const EffectiveEigenpair& psi = radial[1];

  RatioResult res;
  res.h_radial = psi.h;
  res.h_angular = angular[0].h;
  res.traces = psi.traces;
  res.radial = res.h_radial < res.h_angular;
  if (!res.radial) {
    res.ratio = 1.0;
    return res;
  }
  const double boundary = std::max({psi.traces.inner, psi.traces.outer, psi.traces.rim});
  if (!(boundary > 0.0)) {
    std::ostringstream os;
    os << "effective_ratio: boundary maximum " << boundary << " <= 0 (d=" << d
       << ", beta=" << beta << ", delta=" << delta << ")";
    throw DegenerateNormalizationError(os.str());
  }
  // Lambda_nu decreases on [0, j_{nu,1}], so the inner profile peaks at the
  // origin whenever h is below the Dirichlet eigenvalue.
  if (psi.h < ball::ball_spectrum(d).lambda1) {
    res.interior_max = psi.traces.origin;
    res.interior_max_at_origin = true;
  } else {
    constexpr int kGrid = 2000;
    res.interior_max = psi.traces.origin;
    res.interior_max_at_origin = true;
    for (int i = 1; i < kGrid; ++i) {
      const double v = psi.evaluate(static_cast<double>(i) / (kGrid - 1), Side::kInner);
      if (v > res.interior_max) {
        res.interior_max = v;
        res.interior_max_at_origin = false;
      }
    }
  }
  res.ratio = res.interior_max / boundary;
  return res;
}

double radiality_boundary(int d, double delta, std::optional<BetaBracket> bracket) {
  const BetaBracket b = bracket.value_or(BetaBracket{1e-3, 4.0 * ball::ball_spectrum(d).mu1});
  if (!(b.lo > 0.0 && b.lo < b.hi)) throw DomainError("radiality_boundary: need 0 < lo < hi");
  auto gap = [d, delta](double beta) {
    const double h_rad = eigenvalues({d, 0, beta, delta}, 1)[1].h;
    const double h_ang = eigenvalues({d, 1, beta, delta}, 0)[0].h;
    return h_rad - h_ang;
  };
  double lo = b.lo, hi = b.hi;
  double g_lo = gap(lo);
  const double g_hi = gap(hi);
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if (std::signbit(g_lo) == std::signbit(g_hi)) {
    std::ostringstream os;
    os << "radiality_boundary: no crossing in beta bracket [" << lo << ", " << hi
       << "] for d=" << d << ", delta=" << delta;
    throw BracketError(os.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = gap(mid);
    if (std::abs(g_mid) <= 1e-8 || hi - lo <= 1e-13 * hi) return mid;
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<LimitRow> delta_limit_diagnostics(int d, double beta,
                                              const std::vector<double>& deltas) {
  std::vector<LimitRow> rows;
  rows.reserve(deltas.size());
  for (double delta : deltas) {
    const auto pair = eigenvalues({d, 0, beta, delta}, 1)[1];
    const RatioResult ratio = effective_ratio(d, beta, delta);
    LimitRow row;
    row.delta = delta;
    row.h = pair.h;
    row.error = std::abs(pair.h - beta);
    row.traces = pair.traces;
    row.ratio = ratio.ratio;
    row.radial = ratio.radial;
    row.rate = delta * pair.traces.outer / pair.traces.inner;
    rows.push_back(row);
  }
  return rows;
}

RatioMap ratio_map(int d, const std::vector<double>& betas, const std::vector<double>& deltas,
                   unsigned threads) {
  RatioMap map;
  map.dim = d;
  map.betas = betas;
  map.deltas = deltas;
  map.nodes.resize(betas.size() * deltas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    for (std::size_t j = 0; j < deltas.size(); ++j) {
      map.nodes[i * deltas.size() + j] = {betas[i], deltas[j], 1.0, false};
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, map.nodes.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < map.nodes.size(); k = next++) {
      try {
        RatioNode& node = map.nodes[k];
        const RatioResult r = effective_ratio(d, node.beta, node.delta);
        node.ratio = r.ratio;
        node.radial = r.radial;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return map;
}

double profile_distance_to_eta(int d, double beta, double delta, int n_points) {
  if (n_points < 2) throw DomainError("profile_distance_to_eta: need at least 2 points");
  const auto psi = eigenvalues({d, 0, beta, delta}, 1)[1];
  const ball::EtaProfile eta(d);
  double sup = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double r = static_cast<double>(i) / (n_points - 1);
    sup = std::max(sup, std::abs(psi.evaluate(r, Side::kInner) / psi.traces.inner - eta(r)));
  }
  return sup;
}

}  // namespace hotspots::effective
