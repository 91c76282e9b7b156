#pragma once

// Spectra of the unit d-ball, the extremal radial profile eta_d, the sharp
// hot-spots constant S_d = eta_d(0), the level-set volume curve V_d, the
// landscape function v(mu, r) and the d -> infinity asymptotics.

#include <vector>

namespace hotspots::ball {

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 200;

/// First Dirichlet eigenvalue and first nontrivial Neumann eigenvalue of the
/// unit ball in R^d.
struct BallSpectrum {
  int dim = 0;
  double lambda1 = 0.0;  ///< j_root^2
  double mu1 = 0.0;      ///< p_root^2
  double j_root = 0.0;   ///< first zero of J_{d/2-1}
  double p_root = 0.0;   ///< first zero of d/dr [r^{1-d/2} J_{d/2}(r)]
};

/// Memoized and safe for concurrent callers. Throws UnsupportedRangeError
/// outside 2 <= d <= 200.
const BallSpectrum& ball_spectrum(int d);

/// eta_d(r) = Lambda_{d/2-1}(r p) / Lambda_{d/2-1}(p), p = sqrt(mu_d): the
/// radial solution of -Laplace eta = mu_d eta in the unit ball with eta = 1 on
/// the sphere. Lambda is specfun::normalized_bessel.
class EtaProfile {
 public:
  explicit EtaProfile(int d);

  int dim() const { return spectrum_.dim; }
  const BallSpectrum& spectrum() const { return spectrum_; }
  /// S_d = eta_d(0).
  double s_d() const { return 1.0 / boundary_value_; }

  /// eta_d(r) for r in [0, 1]; DomainError otherwise.
  double operator()(double r) const;
  double derivative(double r) const;
  /// Same formula for any r >= 0 (past r = 1 the profile drops below 1).
  double extended(double r) const;
  /// Radius with eta_d(r) = level, level in [1, S_d], by bisection to 1e-14.
  double inverse(double level) const;

 private:
  BallSpectrum spectrum_;
  double order_;
  double boundary_value_;
};

double eta(int d, double r);
double hotspots_constant(int d);

/// v(mu, r) = Lambda_{d/2-1}(r sqrt(mu)) / Lambda_{d/2-1}(sqrt(mu)) for
/// 0 < mu < lambda_d: the radial solution of -Laplace v = mu v with v = 1 on the
/// unit sphere.
double landscape_v(int d, double mu, double r);

/// e^{(1 - r^2) / 2}, the uniform limit of eta_d as d -> infinity.
double eta_infinity(double r);

struct VolumePoint {
  double level = 0.0;     ///< t in [1, S_d]
  double fraction = 0.0;  ///< V_d(t) in [0, 1]
};

struct VolumeCurve {
  int dim = 0;
  std::vector<VolumePoint> points;  ///< fraction descending from 1 to 0
};

/// Samples V_d parametrically: fraction alpha_i = 1 - i / (n - 1) and level
/// eta_d(alpha_i^{1/d}).
VolumeCurve volume_curve(int d, int n_samples);

/// Point query V_d(level) = (eta_d^{-1}(level))^d for level in [1, S_d].
double volume_fraction(int d, double level);

struct AsymptoticRow {
  int dim = 0;
  double s_d = 0.0;
  double gap = 0.0;            ///< S_d - sqrt(e)
  double profile_sup = 0.0;    ///< sup_{[0,1]} |eta_d - eta_inf| on 2000 points
  double level = 0.0;          ///< level at which V_d is reported
  double volume = 0.0;         ///< V_d(level)
  double decay_rate = 0.0;     ///< -log(V_d(level)) / d
};

std::vector<AsymptoticRow> asymptotic_report(const std::vector<int>& dims, double level = 1.1);

}  // namespace hotspots::ball
