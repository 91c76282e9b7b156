#pragma once

// Two-dimensional thick Neumann sieves: an annular neck band
// 1 - eps/2 <= r <= 1 + eps/2 inside the disk of radius 1 + delta, removed
// except for thin radial channels, discretized by finite volumes on a polar
// grid with a single cap cell at the origin.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace hotspots::sieve {

struct SieveSpec {
  double epsilon = 0.05;  ///< neck thickness; 0 means no neck (full disk)
  double delta = 0.2;     ///< annulus thickness
  double alpha = 1.0;     ///< connectivity beta * delta
  std::uint64_t seed = 0;
  int n_channels = 0;  ///< 0 derives the largest count with channels of >= 2 cells

  static SieveSpec from_beta(double beta, double delta, double epsilon, std::uint64_t seed = 0);
  double beta() const { return alpha / delta; }
  /// Angular fraction of the neck band left open: epsilon * alpha, so the
  /// channel conductance per unit area, fraction / epsilon, equals alpha.
  double open_fraction() const { return epsilon * alpha; }
  double outer_radius() const { return 1.0 + delta; }
};

/// Throws DomainError unless 0 <= epsilon <= delta < 1 and, for epsilon > 0,
/// alpha > 0, epsilon < alpha^{-1/2} and epsilon * alpha < 1.
void validate(const SieveSpec& spec);

struct AngularInterval {
  int first_column = 0;  ///< first grid column of the channel
  int columns = 0;       ///< width in grid columns (>= 2)
  double start = 0.0;    ///< radians
  double width = 0.0;    ///< radians
  double center() const { return start + 0.5 * width; }
};

struct SieveLayout {
  int n_theta = 0;
  std::vector<AngularInterval> channels;
  double open_fraction = 0.0;  ///< realized fraction of open columns
};

/// Jittered-equispaced channels snapped to an n_theta-column grid; each
/// channel gets its own slot of width 2 pi / n_channels. Deterministic in seed.
/// Throws ResolutionError (naming the minimum n_theta) when a channel would be
/// narrower than 2 columns or the realized fraction misses epsilon * alpha by
/// more than a relative epsilon.
SieveLayout generate_sieve(const SieveSpec& spec, int n_theta);

/// Minimum number of channels among windows of width 2 pi / 16 minus the
/// expected n / 16, and the maximum likewise; both within +-2 when equidistributed.
struct Equidistribution {
  double worst_deficit = 0.0;
  double worst_excess = 0.0;
  bool ok() const { return worst_deficit <= 2.0 && worst_excess <= 2.0; }
};
Equidistribution equidistribution(const SieveLayout& layout, int windows = 16, int probes = 256);

/// Polar finite-volume grid. Cell 0 is the cap [0, r_1]; ring cell (i, j),
/// i = 1..n_r-1, j = 0..n_theta-1, has index 1 + (i - 1) n_theta + j.
struct DiscreteDomain {
  int n_r = 0;
  int n_theta = 0;
  double outer_radius = 0.0;
  double epsilon = 0.0;
  std::vector<double> faces;    ///< n_r + 1 radial faces, faces[0] = 0
  std::vector<double> centers;  ///< n_r radial centers, centers[0] = 0 (cap)
  std::vector<char> active;     ///< per grid cell
  std::vector<char> boundary;   ///< per grid cell: active with an inactive or exterior neighbor
  std::vector<char> neck;       ///< per grid cell: inside the neck band
  std::vector<int> active_index;   ///< grid cell -> unknown, -1 if inactive
  std::vector<int> active_cells;   ///< unknown -> grid cell
  std::vector<AngularInterval> channels;

  int cell(int ring, int column) const { return ring == 0 ? 0 : 1 + (ring - 1) * n_theta + column; }
  int ring_of(int cell) const { return cell == 0 ? 0 : 1 + (cell - 1) / n_theta; }
  int column_of(int cell) const { return cell == 0 ? 0 : (cell - 1) % n_theta; }
  int grid_cells() const { return 1 + (n_r - 1) * n_theta; }
  int unknowns() const { return static_cast<int>(active_cells.size()); }
  double dtheta() const;
  double radius(int cell) const { return centers[ring_of(cell)]; }
  double theta(int cell) const { return cell == 0 ? 0.0 : (column_of(cell) + 0.5) * dtheta(); }
  double mass(int cell) const;
  double total_area() const;
  double neck_area() const;
};

/// Thick sieve with open channels from generate_sieve(spec, n_theta). An
/// epsilon of 0 gives the full disk of radius 1 + delta. Throws
/// ConstructionError when the active cells are disconnected.
DiscreteDomain build_domain(const SieveSpec& spec, int n_r, int n_theta);

/// Same, with an explicit channel list (possibly empty).
DiscreteDomain build_domain(const SieveSpec& spec, int n_r, int n_theta,
                            const std::vector<AngularInterval>& channels);

/// Full disk of the given radius.
DiscreteDomain build_disk(double radius, int n_r, int n_theta);

template <class Scalar>
struct Operators {
  Eigen::SparseMatrix<Scalar> stiffness;        ///< L, symmetric, zero row sums
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mass;  ///< diagonal of M (cell areas)
};

/// Conductance of each face = face length / center distance.
template <class Scalar = double>
Operators<Scalar> assemble(const DiscreteDomain& domain);

template <class Scalar>
struct SpectralResult {
  std::vector<Scalar> eigenvalues;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;  ///< M-orthonormal columns
  std::vector<Scalar> residuals;  ///< ||L x - mu M x|| / ||M x||
  int iterations = 0;
};

struct EigenOptions {
  double shift = 0.1;        ///< sigma in (L + sigma M)^{-1}
  double tolerance = 1e-8;   ///< residual target
  int max_iterations = 1000;
  int block = 0;             ///< 0 selects max(2k, k + 4)
};

/// k smallest eigenpairs of L x = mu M x by block inverse subspace iteration
/// with Rayleigh-Ritz, from a fixed deterministic start. Throws
/// ConvergenceError when the residuals stagnate above tolerance.
template <class Scalar>
SpectralResult<Scalar> smallest_eigenpairs(const Eigen::SparseMatrix<Scalar>& stiffness,
                                           const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& mass,
                                           int k, const EigenOptions& options = {});

struct RatioReport {
  double ratio = 1.0;
  bool flipped = false;  ///< the opposite sign was needed for a positive boundary max
  double interior_max = 0.0;
  double boundary_max = 0.0;
};

/// max over active cells / max over boundary cells, with the eigenvector
/// signed positive at the cap cell.
RatioReport hotspots_ratio_discrete(const DiscreteDomain& domain, const Eigen::VectorXd& eigenvector);

struct ChainReport {
  double scale = 1.0;              ///< s with s^2 |Omega| = pi
  double pointwise_excess = 0.0;   ///< max over cells and signs of psi / max_boundary psi - eta_2(min(s|x|, 1))
  double distribution_excess = 0.0;  ///< max over levels t of |{psi >= t}| / |Omega| - V_2(t)
  bool pass = false;               ///< pointwise_excess <= 0.05
};

ChainReport chain_check(const DiscreteDomain& domain, const Eigen::VectorXd& eigenvector);

/// Angular average of the field on each ring (cap included), ring order.
std::vector<double> radial_trace(const DiscreteDomain& domain, const Eigen::VectorXd& field);

/// Share of the field's M-norm carried by its angular average; 1 for radial fields.
double radial_share(const DiscreteDomain& domain, const Eigen::VectorXd& field);

struct SieveRun {
  SieveSpec spec;
  int n_r = 0;
  int n_theta = 0;
  int channels = 0;
  double open_fraction = 0.0;
  std::vector<double> eigenvalues;  ///< smallest few discrete eigenvalues
  double mu1 = 0.0;                 ///< first nontrivial discrete eigenvalue
  double mu_radial = 0.0;           ///< lowest nontrivial discrete eigenvalue with a radial eigenvector; NaN if none computed
  double target_radial = 0.0;       ///< h^{(1)}_{0,beta,delta}
  double target_angular = 0.0;      ///< h^{(0)}_{1,beta,delta}
  double error = 0.0;               ///< |mu1 - h^{(1)}_{0,beta,delta}|
  double radial_error = 0.0;        ///< |mu_radial - h^{(1)}_{0,beta,delta}|
  RatioReport ratio;
  ChainReport chain;
  double profile_error = 0.0;  ///< sup_{r <= 1 - 2 eps} of radial trace vs effective profile, both scaled to 1 at 0
  double neck_mass_share = 0.0;
  Eigen::VectorXd eigenvector;  ///< first nontrivial, nonnegative at the cap cell
  DiscreteDomain domain;
};

SieveRun run_sieve(const SieveSpec& spec, int n_r, int n_theta, int n_eigen = 6);

struct GridSize {
  int n_r = 0;
  int n_theta = 0;
};

std::vector<SieveRun> convergence_study(double beta, double delta, const std::vector<double>& epsilons,
                                        const std::vector<GridSize>& grids, std::uint64_t seed = 0);

struct DiskControl {
  double radius = 0.0;
  int n_r = 0;
  int n_theta = 0;
  double mu_scaled = 0.0;  ///< first nontrivial discrete eigenvalue times radius^2
  double mu_exact = 0.0;   ///< mu_2
  double relative_error = 0.0;
  double multiplicity_gap = 0.0;  ///< relative gap between the two lowest nontrivial eigenvalues
  RatioReport ratio;
  ChainReport chain;
};

DiskControl full_disk_control(double radius, int n_r, int n_theta);

/// CSV with columns r,theta,x,y,value over active cells (cap at the origin).
void write_field_csv(std::ostream& os, const DiscreteDomain& domain, const Eigen::VectorXd& field);

}  // namespace hotspots::sieve
