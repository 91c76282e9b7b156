#include "hotspots/sieve.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <deque>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "hotspots/ball.hpp"
#include "hotspots/effective.hpp"
#include "hotspots/errors.hpp"

namespace hotspots::sieve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFaceSlack = 1e-12;

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

[[noreturn]] void resolution_error(const std::string& what, int n_theta, long minimum) {
  std::ostringstream os;
  os << what << " at n_theta=" << n_theta << "; need n_theta >= " << minimum;
  throw ResolutionError(os.str());
}

std::vector<double> radial_faces(double radius, double epsilon, int n_r) {
  std::vector<double> faces(n_r + 1);
  if (epsilon == 0.0) {
    for (int i = 0; i <= n_r; ++i) faces[i] = radius * i / n_r;
    return faces;
  }
  const double inner = 1.0 - 0.5 * epsilon;
  const double outer = 1.0 + 0.5 * epsilon;
  const double h = radius / n_r;
  const int band = std::max(2, static_cast<int>(std::lround(epsilon / h)));
  const int shell = std::max(1, static_cast<int>(std::lround((radius - outer) / h)));
  const int core = n_r - band - shell;
  if (core < 2) {
    std::ostringstream os;
    os << "n_r=" << n_r << " too small to resolve the neck band of width " << epsilon;
    throw ResolutionError(os.str());
  }
  int k = 0;
  for (int i = 0; i <= core; ++i) faces[k++] = inner * i / core;
  for (int i = 1; i <= band; ++i) faces[k++] = inner + epsilon * i / band;
  for (int i = 1; i <= shell; ++i) faces[k++] = outer + (radius - outer) * i / shell;
  faces[n_r] = radius;
  return faces;
}

DiscreteDomain make_domain(double radius, double epsilon, int n_r, int n_theta,
                           const std::vector<AngularInterval>& channels) {
  if (n_r < 4) throw DomainError("build_domain: n_r must be >= 4");
  if (n_theta < 8) throw DomainError("build_domain: n_theta must be >= 8");
  DiscreteDomain d;
  d.n_r = n_r;
  d.n_theta = n_theta;
  d.outer_radius = radius;
  d.epsilon = epsilon;
  d.channels = channels;
  d.faces = radial_faces(radius, epsilon, n_r);
  d.centers.assign(n_r, 0.0);
  for (int i = 1; i < n_r; ++i) d.centers[i] = 0.5 * (d.faces[i] + d.faces[i + 1]);

  std::vector<char> open(n_theta, 0);
  for (const auto& c : channels) {
    for (int j = 0; j < c.columns; ++j) open[(c.first_column + j) % n_theta] = 1;
  }

  const int cells = d.grid_cells();
  d.active.assign(cells, 1);
  d.neck.assign(cells, 0);
  d.boundary.assign(cells, 0);
  if (epsilon > 0.0) {
    const double lo = 1.0 - 0.5 * epsilon - kFaceSlack;
    const double hi = 1.0 + 0.5 * epsilon + kFaceSlack;
    for (int i = 1; i < n_r; ++i) {
      if (d.faces[i] < lo || d.faces[i + 1] > hi) continue;
      for (int j = 0; j < n_theta; ++j) {
        const int c = d.cell(i, j);
        d.neck[c] = 1;
        d.active[c] = open[j];
      }
    }
  }

  // boundary flags: outermost ring or an inactive neighbour
  for (int i = 1; i < n_r; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const int c = d.cell(i, j);
      if (!d.active[c]) continue;
      bool b = i == n_r - 1;
      b = b || !d.active[d.cell(i, (j + 1) % n_theta)];
      b = b || !d.active[d.cell(i, (j + n_theta - 1) % n_theta)];
      b = b || !d.active[d.cell(i - 1, j)];
      if (i + 1 < n_r) b = b || !d.active[d.cell(i + 1, j)];
      d.boundary[c] = b;
    }
  }
  for (int j = 0; j < n_theta; ++j) {
    if (!d.active[d.cell(1, j)]) d.boundary[0] = 1;
  }

  d.active_index.assign(cells, -1);
  for (int c = 0; c < cells; ++c) {
    if (d.active[c]) {
      d.active_index[c] = static_cast<int>(d.active_cells.size());
      d.active_cells.push_back(c);
    }
  }

  // connectivity by breadth-first search from the cap
  std::vector<char> seen(cells, 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  auto visit = [&](int c) {
    if (d.active[c] && !seen[c]) {
      seen[c] = 1;
      ++reached;
      queue.push_back(c);
    }
  };
  while (!queue.empty()) {
    const int c = queue.front();
    queue.pop_front();
    if (c == 0) {
      for (int j = 0; j < n_theta; ++j) visit(d.cell(1, j));
      continue;
    }
    const int i = d.ring_of(c), j = d.column_of(c);
    visit(d.cell(i, (j + 1) % n_theta));
    visit(d.cell(i, (j + n_theta - 1) % n_theta));
    visit(i == 1 ? 0 : d.cell(i - 1, j));
    if (i + 1 < n_r) visit(d.cell(i + 1, j));
  }
  if (reached != d.active_cells.size()) {
    std::ostringstream os;
    os << "build_domain: active cells are disconnected (" << reached << " of "
       << d.active_cells.size() << " reachable from the origin; " << channels.size()
       << " channels)";
    throw ConstructionError(os.str());
  }
  return d;
}

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Modified Gram-Schmidt in the M inner product, applied twice.
template <class Scalar>
void m_orthonormalize(Matrix<Scalar>& Y, const Vector<Scalar>& mass) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < Y.cols(); ++c) {
      for (Eigen::Index p = 0; p < c; ++p) {
        const Scalar proj = (Y.col(p).array() * mass.array() * Y.col(c).array()).sum();
        Y.col(c) -= proj * Y.col(p);
      }
      const Scalar norm = std::sqrt((Y.col(c).array().square() * mass.array()).sum());
      if (!(norm > Scalar(0))) throw ConvergenceError("subspace iteration: basis collapsed");
      Y.col(c) /= norm;
    }
  }
}

}  // namespace

SieveSpec SieveSpec::from_beta(double beta, double delta, double epsilon, std::uint64_t seed) {
  SieveSpec s;
  s.epsilon = epsilon;
  s.delta = delta;
  s.alpha = beta * delta;
  s.seed = seed;
  return s;
}

void validate(const SieveSpec& s) {
  std::ostringstream os;
  if (!(s.delta > 0.0 && s.delta < 1.0)) {
    os << "delta=" << s.delta << " must lie in (0, 1)";
  } else if (!(s.epsilon >= 0.0 && s.epsilon <= s.delta)) {
    os << "epsilon=" << s.epsilon << " must lie in [0, delta=" << s.delta << "]";
  } else if (s.epsilon > 0.0 && !(s.alpha > 0.0 && std::isfinite(s.alpha))) {
    os << "alpha=" << s.alpha << " must be > 0";
  } else if (s.epsilon > 0.0 && !(s.epsilon < 1.0 / std::sqrt(s.alpha))) {
    os << "epsilon=" << s.epsilon << " must be < alpha^{-1/2}=" << 1.0 / std::sqrt(s.alpha);
  } else if (s.epsilon > 0.0 && !(s.open_fraction() < 1.0)) {
    os << "open fraction epsilon*alpha=" << s.open_fraction() << " must be < 1";
  } else if (s.n_channels < 0) {
    os << "n_channels=" << s.n_channels << " must be >= 0";
  } else {
    return;
  }
  throw DomainError(os.str());
}

SieveLayout generate_sieve(const SieveSpec& spec, int n_theta) {
  validate(spec);
  if (!(spec.epsilon > 0.0)) throw DomainError("generate_sieve: epsilon must be > 0");
  if (n_theta < 8) throw DomainError("generate_sieve: n_theta must be >= 8");
  const double p = spec.open_fraction();
  const long open_cells = std::lround(p * n_theta);
  const long n = spec.n_channels > 0 ? spec.n_channels : open_cells / 2;
  if (n < 1 || open_cells < 2 * n) {
    resolution_error("channels narrower than 2 grid columns", n_theta,
                     static_cast<long>(std::ceil(2.0 * std::max<long>(n, 1) / p)));
  }
  if (std::abs(static_cast<double>(open_cells) / n_theta - p) > spec.epsilon * p) {
    resolution_error("open fraction not resolved to relative epsilon", n_theta,
                     static_cast<long>(std::ceil(0.5 / (spec.epsilon * p))));
  }

  SieveLayout layout;
  layout.n_theta = n_theta;
  layout.open_fraction = static_cast<double>(open_cells) / n_theta;
  const double dtheta = kTwoPi / n_theta;
  std::mt19937_64 rng(spec.seed);
  for (long i = 0; i < n; ++i) {
    const long slot_lo = i * n_theta / n;
    const long slot_hi = (i + 1) * n_theta / n;
    const long w = (i + 1) * open_cells / n - i * open_cells / n;
    if (w > slot_hi - slot_lo) {
      resolution_error("channel wider than its slot", n_theta, static_cast<long>(std::ceil(2.0 * n / p)));
    }
    const long room = slot_hi - slot_lo - w;
    const long offset = std::min(room, static_cast<long>(unit_uniform(rng) * (room + 1)));
    AngularInterval c;
    c.first_column = static_cast<int>(slot_lo + offset);
    c.columns = static_cast<int>(w);
    c.start = c.first_column * dtheta;
    c.width = c.columns * dtheta;
    layout.channels.push_back(c);
  }
  return layout;
}

Equidistribution equidistribution(const SieveLayout& layout, int windows, int probes) {
  Equidistribution e;
  const double n = static_cast<double>(layout.channels.size());
  const double width = kTwoPi / windows;
  const double expected = n / windows;
  e.worst_deficit = -1e300;
  e.worst_excess = -1e300;
  for (int q = 0; q < probes; ++q) {
    const double lo = kTwoPi * q / probes;
    int count = 0;
    for (const auto& c : layout.channels) {
      const double off = std::fmod(c.center() - lo + kTwoPi, kTwoPi);
      if (off < width) ++count;
    }
    e.worst_deficit = std::max(e.worst_deficit, expected - count);
    e.worst_excess = std::max(e.worst_excess, count - expected);
  }
  return e;
}

double DiscreteDomain::dtheta() const { return kTwoPi / n_theta; }

double DiscreteDomain::mass(int c) const {
  if (c == 0) return std::numbers::pi * faces[1] * faces[1];
  const int i = ring_of(c);
  return 0.5 * (faces[i + 1] * faces[i + 1] - faces[i] * faces[i]) * dtheta();
}

double DiscreteDomain::total_area() const {
  double a = 0.0;
  for (int c : active_cells) a += mass(c);
  return a;
}

double DiscreteDomain::neck_area() const {
  double a = 0.0;
  for (int c : active_cells) {
    if (neck[c]) a += mass(c);
  }
  return a;
}

DiscreteDomain build_domain(const SieveSpec& spec, int n_r, int n_theta) {
  validate(spec);
  if (spec.epsilon == 0.0) return make_domain(spec.outer_radius(), 0.0, n_r, n_theta, {});
  return make_domain(spec.outer_radius(), spec.epsilon, n_r, n_theta,
                     generate_sieve(spec, n_theta).channels);
}

DiscreteDomain build_domain(const SieveSpec& spec, int n_r, int n_theta,
                            const std::vector<AngularInterval>& channels) {
  validate(spec);
  return make_domain(spec.outer_radius(), spec.epsilon, n_r, n_theta, channels);
}

DiscreteDomain build_disk(double radius, int n_r, int n_theta) {
  if (!(radius > 0.0)) throw DomainError("build_disk: radius must be > 0");
  return make_domain(radius, 0.0, n_r, n_theta, {});
}

template <class Scalar>
Operators<Scalar> assemble(const DiscreteDomain& d) {
  const int n = d.unknowns();
  std::vector<Eigen::Triplet<Scalar>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  Vector<Scalar> diag = Vector<Scalar>::Zero(n);
  auto link = [&](int a, int b, double length, double distance) {
    const int ia = d.active_index[a], ib = d.active_index[b];
    if (ia < 0 || ib < 0) return;
    const Scalar c = static_cast<Scalar>(length) / static_cast<Scalar>(distance);
    trip.emplace_back(ia, ib, -c);
    trip.emplace_back(ib, ia, -c);
    diag[ia] += c;
    diag[ib] += c;
  };
  const double dt = d.dtheta();
  for (int j = 0; j < d.n_theta; ++j) link(0, d.cell(1, j), d.faces[1] * dt, d.centers[1]);
  for (int i = 1; i < d.n_r; ++i) {
    for (int j = 0; j < d.n_theta; ++j) {
      const int c = d.cell(i, j);
      link(c, d.cell(i, (j + 1) % d.n_theta), d.faces[i + 1] - d.faces[i], d.centers[i] * dt);
      if (i + 1 < d.n_r) {
        link(c, d.cell(i + 1, j), d.faces[i + 1] * dt, d.centers[i + 1] - d.centers[i]);
      }
    }
  }
  for (int i = 0; i < n; ++i) trip.emplace_back(i, i, diag[i]);
  Operators<Scalar> ops;
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(trip.begin(), trip.end());
  ops.stiffness.makeCompressed();
  ops.mass.resize(n);
  for (int i = 0; i < n; ++i) ops.mass[i] = static_cast<Scalar>(d.mass(d.active_cells[i]));
  return ops;
}

template <class Scalar>
SpectralResult<Scalar> smallest_eigenpairs(const Eigen::SparseMatrix<Scalar>& L,
                                           const Vector<Scalar>& mass, int k,
                                           const EigenOptions& opt) {
  const Eigen::Index n = L.rows();
  if (k < 1 || k > n) throw DomainError("smallest_eigenpairs: need 1 <= k <= n");
  if (mass.size() != n) throw DomainError("smallest_eigenpairs: mass size mismatch");
  const Eigen::Index m = std::min<Eigen::Index>(n, opt.block > 0 ? opt.block : std::max(2 * k, k + 4));

  Eigen::SparseMatrix<Scalar> K = L;
  for (Eigen::Index i = 0; i < n; ++i) K.coeffRef(i, i) += static_cast<Scalar>(opt.shift) * mass[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Scalar>> solver(K);
  if (solver.info() != Eigen::Success) throw ConvergenceError("smallest_eigenpairs: factorization failed");

  // Fixed start: the constant vector plus seeded noise.
  Matrix<Scalar> X(n, m);
  std::mt19937_64 rng(0x5eed);
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, c) = c == 0 ? Scalar(1) : static_cast<Scalar>(unit_uniform(rng) - 0.5);
    }
  }
  m_orthonormalize<Scalar>(X, mass);

  SpectralResult<Scalar> res;
  std::vector<Scalar> prev(k, Scalar(0));
  Scalar best = std::numeric_limits<Scalar>::infinity();
  int since_best = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    Matrix<Scalar> MX = X.array().colwise() * mass.array();
    Matrix<Scalar> Y = solver.solve(MX);
    if (solver.info() != Eigen::Success) throw ConvergenceError("smallest_eigenpairs: solve failed");
    m_orthonormalize<Scalar>(Y, mass);
    Matrix<Scalar> LY = L * Y;
    Matrix<Scalar> A = Y.transpose() * LY;
    A = (A + A.transpose()).eval() * Scalar(0.5);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> rr(A);
    X = Y * rr.eigenvectors();
    const Matrix<Scalar> LX = LY * rr.eigenvectors();

    res.eigenvalues.assign(k, Scalar(0));
    res.residuals.assign(k, Scalar(0));
    Scalar worst = 0;
    Scalar change = 0;
    for (int i = 0; i < k; ++i) {
      const Scalar mu = rr.eigenvalues()[i];
      const Vector<Scalar> mx = X.col(i).cwiseProduct(mass);
      const Scalar r = (LX.col(i) - mu * mx).norm() / mx.norm();
      res.eigenvalues[i] = mu;
      res.residuals[i] = r;
      worst = std::max(worst, r);
      change = std::max(change, std::abs(mu - prev[i]) / std::max(std::abs(mu), Scalar(1)));
      prev[i] = mu;
    }
    res.iterations = it;
    if (worst <= static_cast<Scalar>(opt.tolerance)) {
      res.eigenvectors = X.leftCols(k);
      return res;
    }
    if (worst < best * Scalar(0.999)) {
      best = worst;
      since_best = 0;
    } else if (++since_best > 50 && change <= Scalar(1e-14)) {
      break;  // stagnated above tolerance
    }
  }
  std::ostringstream os;
  os << "smallest_eigenpairs: no convergence after " << res.iterations << " iterations; residuals";
  for (const auto& r : res.residuals) os << ' ' << static_cast<double>(r);
  os << "; eigenvalues";
  for (const auto& e : res.eigenvalues) os << ' ' << static_cast<double>(e);
  throw ConvergenceError(os.str());
}

template Operators<double> assemble<double>(const DiscreteDomain&);
template Operators<long double> assemble<long double>(const DiscreteDomain&);
template SpectralResult<double> smallest_eigenpairs<double>(const Eigen::SparseMatrix<double>&,
                                                            const Vector<double>&, int,
                                                            const EigenOptions&);
template SpectralResult<long double> smallest_eigenpairs<long double>(
    const Eigen::SparseMatrix<long double>&, const Vector<long double>&, int, const EigenOptions&);

RatioReport hotspots_ratio_discrete(const DiscreteDomain& d, const Eigen::VectorXd& x) {
  const double sign0 = x[d.active_index[0]] < 0.0 ? -1.0 : 1.0;
  auto evaluate = [&](double sign) {
    RatioReport r;
    r.interior_max = -1e300;
    r.boundary_max = -1e300;
    for (int u = 0; u < d.unknowns(); ++u) {
      const double v = sign * x[u];
      r.interior_max = std::max(r.interior_max, v);
      if (d.boundary[d.active_cells[u]]) r.boundary_max = std::max(r.boundary_max, v);
    }
    return r;
  };
  RatioReport r = evaluate(sign0);
  if (!(r.boundary_max > 0.0)) {
    r = evaluate(-sign0);
    r.flipped = true;
  }
  r.ratio = r.interior_max / r.boundary_max;
  return r;
}

ChainReport chain_check(const DiscreteDomain& d, const Eigen::VectorXd& x) {
  ChainReport rep;
  const double area = d.total_area();
  rep.scale = std::sqrt(std::numbers::pi / area);
  const ball::EtaProfile eta(2);
  const double top = eta.s_d();
  rep.pointwise_excess = -1e300;
  rep.distribution_excess = -1e300;
  bool any = false;
  for (double sign : {1.0, -1.0}) {
    double bmax = -1e300;
    for (int u = 0; u < d.unknowns(); ++u) {
      if (d.boundary[d.active_cells[u]]) bmax = std::max(bmax, sign * x[u]);
    }
    if (!(bmax > 0.0)) continue;
    any = true;
    for (int u = 0; u < d.unknowns(); ++u) {
      const int c = d.active_cells[u];
      const double s = std::min(1.0, rep.scale * d.radius(c));
      rep.pointwise_excess = std::max(rep.pointwise_excess, sign * x[u] / bmax - eta(s));
    }
    constexpr int kLevels = 64;
    for (int l = 0; l < kLevels; ++l) {
      const double t = 1.0 + (top - 1.0) * l / (kLevels - 1);
      double above = 0.0;
      for (int u = 0; u < d.unknowns(); ++u) {
        if (sign * x[u] / bmax >= t) above += d.mass(d.active_cells[u]);
      }
      rep.distribution_excess =
          std::max(rep.distribution_excess, above / area - ball::volume_fraction(2, t));
    }
  }
  if (!any) throw DegenerateNormalizationError("chain_check: boundary maximum <= 0 for both signs");
  rep.pass = rep.pointwise_excess <= 0.05;
  return rep;
}

std::vector<double> radial_trace(const DiscreteDomain& d, const Eigen::VectorXd& x) {
  std::vector<double> sum(d.n_r, 0.0), weight(d.n_r, 0.0);
  for (int u = 0; u < d.unknowns(); ++u) {
    const int c = d.active_cells[u];
    const int i = d.ring_of(c);
    sum[i] += d.mass(c) * x[u];
    weight[i] += d.mass(c);
  }
  for (int i = 0; i < d.n_r; ++i) {
    sum[i] = weight[i] > 0.0 ? sum[i] / weight[i] : std::nan("");
  }
  return sum;
}

double radial_share(const DiscreteDomain& d, const Eigen::VectorXd& x) {
  const auto avg = radial_trace(d, x);
  double total = 0.0, radial = 0.0;
  for (int u = 0; u < d.unknowns(); ++u) {
    const int c = d.active_cells[u];
    total += d.mass(c) * x[u] * x[u];
    const double a = avg[d.ring_of(c)];
    radial += d.mass(c) * a * a;
  }
  return total > 0.0 ? std::sqrt(radial / total) : 0.0;
}

SieveRun run_sieve(const SieveSpec& spec, int n_r, int n_theta, int n_eigen) {
  validate(spec);
  if (!(spec.epsilon > 0.0)) throw DomainError("run_sieve: epsilon must be > 0");
  if (n_eigen < 2) throw DomainError("run_sieve: need at least 2 eigenpairs");
  SieveRun run;
  run.spec = spec;
  run.n_r = n_r;
  run.n_theta = n_theta;
  run.domain = build_domain(spec, n_r, n_theta);
  run.channels = static_cast<int>(run.domain.channels.size());
  int open_columns = 0;
  for (const auto& c : run.domain.channels) open_columns += c.columns;
  run.open_fraction = static_cast<double>(open_columns) / n_theta;

  const auto ops = assemble<double>(run.domain);
  const auto spectrum = smallest_eigenpairs<double>(ops.stiffness, ops.mass, n_eigen);
  run.eigenvalues = spectrum.eigenvalues;
  run.mu1 = spectrum.eigenvalues[1];
  run.eigenvector = spectrum.eigenvectors.col(1);
  if (run.eigenvector[run.domain.active_index[0]] < 0.0) run.eigenvector = -run.eigenvector;

  const double beta = spec.beta();
  const auto radial_pair = effective::eigenvalues({2, 0, beta, spec.delta}, 1)[1];
  run.target_radial = radial_pair.h;
  run.target_angular = effective::eigenvalues({2, 1, beta, spec.delta}, 0)[0].h;
  run.error = std::abs(run.mu1 - run.target_radial);

  for (int k = 1; k < n_eigen; ++k) {
    const Eigen::VectorXd v = spectrum.eigenvectors.col(k);
    if (radial_share(run.domain, v) > 0.9) {
      run.mu_radial = spectrum.eigenvalues[k];
      run.radial_error = std::abs(run.mu_radial - run.target_radial);
      const auto trace = radial_trace(run.domain, v);
      const double at0 = trace[0];
      const double eff0 = radial_pair.traces.origin;
      for (int i = 0; i < run.domain.n_r; ++i) {
        const double r = run.domain.centers[i];
        if (r > 1.0 - 2.0 * spec.epsilon) break;
        const double want = radial_pair.evaluate(r, effective::Side::kInner) / eff0;
        run.profile_error = std::max(run.profile_error, std::abs(trace[i] / at0 - want));
      }
      break;
    }
  }
  if (run.mu_radial == 0.0) {
    run.mu_radial = run.radial_error = run.profile_error = std::nan("");
  }

  run.ratio = hotspots_ratio_discrete(run.domain, run.eigenvector);
  run.chain = chain_check(run.domain, run.eigenvector);
  run.neck_mass_share = run.domain.neck_area() / run.domain.total_area();
  return run;
}

std::vector<SieveRun> convergence_study(double beta, double delta, const std::vector<double>& epsilons,
                                        const std::vector<GridSize>& grids, std::uint64_t seed) {
  if (epsilons.size() != grids.size()) {
    throw DomainError("convergence_study: epsilon and grid sequences differ in length");
  }
  std::vector<SieveRun> rows;
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    rows.push_back(run_sieve(SieveSpec::from_beta(beta, delta, epsilons[i], seed), grids[i].n_r,
                             grids[i].n_theta));
  }
  return rows;
}

DiskControl full_disk_control(double radius, int n_r, int n_theta) {
  DiskControl out;
  out.radius = radius;
  out.n_r = n_r;
  out.n_theta = n_theta;
  const DiscreteDomain disk = build_disk(radius, n_r, n_theta);
  const auto ops = assemble<double>(disk);
  const auto spectrum = smallest_eigenpairs<double>(ops.stiffness, ops.mass, 3);
  out.mu_scaled = spectrum.eigenvalues[1] * radius * radius;
  out.mu_exact = ball::ball_spectrum(2).mu1;
  out.relative_error = std::abs(out.mu_scaled - out.mu_exact) / out.mu_exact;
  out.multiplicity_gap =
      std::abs(spectrum.eigenvalues[2] - spectrum.eigenvalues[1]) / spectrum.eigenvalues[1];
  const Eigen::VectorXd v = spectrum.eigenvectors.col(1);
  out.ratio = hotspots_ratio_discrete(disk, v);
  out.chain = chain_check(disk, v);
  return out;
}

void write_field_csv(std::ostream& os, const DiscreteDomain& d, const Eigen::VectorXd& field) {
  if (field.size() != d.unknowns()) throw DomainError("write_field_csv: field size mismatch");
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << "r,theta,x,y,value\n" << std::setprecision(12);
  for (int u = 0; u < d.unknowns(); ++u) {
    const int c = d.active_cells[u];
    const double r = d.radius(c), t = d.theta(c);
    os << r << ',' << t << ',' << r * std::cos(t) << ',' << r * std::sin(t) << ',' << field[u] << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace hotspots::sieve
