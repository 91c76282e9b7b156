#pragma once

// Radial effective problems H_{l,beta,delta} on [0, 1 + delta] with measure
// r^{d-1} dr:
//
//   -(r^{d-1} f')' + l (l + d - 2) r^{d-3} f = h r^{d-1} f   on (0,1) and (1, 1+delta)
//   f'(1-) = beta delta (f(1+) - f(1-)),  f'(1-) = f'(1+),  f'(1+delta) = 0,
//
// solved by matching an inner Bessel profile to an outer Neumann solution.

#include <array>
#include <optional>
#include <vector>

namespace hotspots::effective {

struct EffectiveParams {
  int dim = 3;
  int ell = 0;
  double beta = 1.0;
  double delta = 0.1;

  double alpha() const { return beta * delta; }
  /// Bessel order d/2 + l - 1.
  double order() const { return 0.5 * dim + ell - 1.0; }
  double angular_eigenvalue() const { return static_cast<double>(ell) * (ell + dim - 2); }
  double outer_radius() const { return 1.0 + delta; }
};

/// Throws DomainError unless 2 <= d <= 200, l >= 0, beta > 0 and 0 < delta < 1.
void validate(const EffectiveParams& p);

struct RadialValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// w(r) = r^l Lambda_nu(r sqrt(h)), nu = d/2 + l - 1. Proportional to
/// r^{1-d/2} J_nu(r sqrt(h)) and normalized so that w(r) ~ r^l at the origin.
/// Valid for r in [0, 1], h >= 0.
RadialValue inner_profile(const EffectiveParams& p, double h, double r);

/// u = r^{1-d/2} J_nu(r s), v = r^{1-d/2} Y_nu(r s), s = sqrt(h).
struct OuterBasis {
  RadialValue u;
  RadialValue v;
};
OuterBasis outer_basis(const EffectiveParams& p, double h, double r);

enum class OuterMethod { kAuto, kTaylor, kBessel };

/// Solution G of the radial ODE on [1, 1+delta] with G(1+delta) = 1 and
/// G'(1+delta) = 0. Equals (v'(R) u - u'(R) v) / W(R), W(R) = 2 R^{1-d} / pi.
/// kAuto uses a Taylor series about R when sqrt(h) delta <= 1 and the Bessel
/// cross product otherwise.
RadialValue outer_neumann_solution(const EffectiveParams& p, double h, double r,
                                   OuterMethod method = OuterMethod::kAuto);

/// F(h) = w'(1) G'(1) - beta delta (w'(1) G(1) - w(1) G'(1)); its zeros are the
/// eigenvalues of H_{l,beta,delta}.
double secular(const EffectiveParams& p, double h);

/// Sum of the magnitudes of the terms in F(h); the scale for residual checks.
double secular_scale(const EffectiveParams& p, double h);

struct Traces {
  double origin = 0.0;  ///< f(0)
  double inner = 0.0;   ///< f(1-)
  double outer = 0.0;   ///< f(1+)
  double rim = 0.0;     ///< f(1+delta)
};

enum class Side { kInner, kOuter };

/// f = A w on [0, 1] and f = B G on [1, 1+delta], with A > 0 and
/// max(|f(1-)|, |f(1+)|) = 1.
struct EffectiveEigenpair {
  EffectiveParams params;
  int index = 0;
  double h = 0.0;
  double inner_coeff = 0.0;  ///< A
  double outer_coeff = 0.0;  ///< B
  /// (a, b) with f = a u + b v on the outer annulus; absent when the Bessel
  /// basis is outside the supported envelope (small sqrt(h)).
  std::optional<std::array<double, 2>> outer_coeffs;
  Traces traces;
  double secular_residual = 0.0;  ///< |F(h)| / secular_scale(h)
  double jump_residual = 0.0;     ///< worst relative residual of the three matching conditions

  double evaluate(double r, Side side) const;
  double derivative(double r, Side side) const;
};

struct ScanOptions {
  double h_max = 0.0;  ///< 0 selects 4 (lambda_d + l (l + d - 2))
  int n_points = 4000;
};

/// The k_max + 1 smallest eigenvalues of H_{l,beta,delta}, ascending. For l = 0
/// the constant mode h = 0 is entry 0. Throws SearchExhaustedError when the
/// scan range holds fewer roots.
std::vector<EffectiveEigenpair> eigenvalues(const EffectiveParams& p, int k_max,
                                            const ScanOptions& scan = {});

struct RatioResult {
  double ratio = 1.0;
  bool radial = false;
  double h_radial = 0.0;   ///< h^{(1)}_{0,beta,delta}
  double h_angular = 0.0;  ///< h^{(0)}_{1,beta,delta}
  Traces traces;           ///< of the radial eigenfunction, positive at the origin
  double interior_max = 0.0;
  bool interior_max_at_origin = true;
};

/// Effective hot-spots ratio max_{[0,1]} psi / max(psi(1-), psi(1+), psi(1+delta))
/// when the first nontrivial eigenfunction is radial; ratio 1 otherwise.
RatioResult effective_ratio(int d, double beta, double delta);

struct BetaBracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// beta*(delta) where h^{(1)}_{0} = h^{(0)}_{1}. Default bracket [1e-3, 4 mu_d].
/// Throws BracketError when the bracket holds no crossing.
double radiality_boundary(int d, double delta, std::optional<BetaBracket> bracket = std::nullopt);

struct LimitRow {
  double delta = 0.0;
  double h = 0.0;
  double error = 0.0;  ///< |h - beta|
  Traces traces;
  double ratio = 1.0;
  bool radial = false;
  double rate = 0.0;  ///< delta psi(1+) / psi(1-)
};

std::vector<LimitRow> delta_limit_diagnostics(int d, double beta, const std::vector<double>& deltas);

struct RatioNode {
  double beta = 0.0;
  double delta = 0.0;
  double ratio = 1.0;
  bool radial = false;
};

struct RatioMap {
  int dim = 0;
  std::vector<double> betas;
  std::vector<double> deltas;
  std::vector<RatioNode> nodes;  ///< beta-major: nodes[i * deltas.size() + j]

  const RatioNode& at(std::size_t i_beta, std::size_t j_delta) const {
    return nodes[i_beta * deltas.size() + j_delta];
  }
};

/// Evaluated in parallel over nodes; the result does not depend on threads.
/// threads = 0 uses the hardware concurrency.
RatioMap ratio_map(int d, const std::vector<double>& betas, const std::vector<double>& deltas,
                   unsigned threads = 0);

/// sup over n points of [0, 1] of |psi(r) / psi(1-) - eta_d(r)| for the radial
/// eigenfunction h^{(1)}_{0,beta,delta}.
double profile_distance_to_eta(int d, double beta, double delta, int n_points = 1000);

}  // namespace hotspots::effective
