#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hotspots/ball.hpp"
#include "hotspots/errors.hpp"
#include "hotspots/sieve.hpp"

namespace hs = hotspots::sieve;
namespace hb = hotspots::ball;

namespace {

constexpr double kPi = std::numbers::pi;

double mu2() { return hb::ball_spectrum(2).mu1; }

hs::SpectralResult<double> spectrum(const hs::DiscreteDomain& d, int k) {
  const auto ops = hs::assemble<double>(d);
  return hs::smallest_eigenpairs<double>(ops.stiffness, ops.mass, k);
}

}  // namespace

TEST(SieveSpec, Validation) {
  EXPECT_NO_THROW(hs::validate({0.05, 0.2, 1.0}));
  EXPECT_NO_THROW(hs::validate({0.2, 0.2, 1.0}));
  EXPECT_THROW(hs::validate({0.3, 0.2, 1.0}), hotspots::DomainError);
  EXPECT_THROW(hs::validate({0.05, 1.0, 1.0}), hotspots::DomainError);
  EXPECT_THROW(hs::validate({0.05, 0.2, -1.0}), hotspots::DomainError);
  EXPECT_THROW(hs::validate({0.5, 0.6, 4.0}), hotspots::DomainError);  // eps >= alpha^{-1/2}
  EXPECT_THROW(hs::validate({0.1, 0.2, 20.0}), hotspots::DomainError);  // eps alpha >= 1
  const auto s = hs::SieveSpec::from_beta(2.0, 0.2, 0.05, 7);
  EXPECT_DOUBLE_EQ(s.alpha, 0.4);
  EXPECT_DOUBLE_EQ(s.beta(), 2.0);
  EXPECT_EQ(s.seed, 7u);
}

TEST(GenerateSieve, OpenFractionWithinRelativeEpsilon) {
  const hs::SieveSpec s{0.1, 0.2, 4.0, 3};
  const auto layout = hs::generate_sieve(s, 1024);
  EXPECT_NEAR(layout.open_fraction, 0.4, 0.04);
  double sum = 0.0;
  for (const auto& c : layout.channels) {
    EXPECT_GE(c.columns, 2);
    sum += c.width;
  }
  EXPECT_NEAR(sum / (2.0 * kPi), layout.open_fraction, 1e-12);
}

TEST(GenerateSieve, DeterministicInSeed) {
  const hs::SieveSpec a{0.05, 0.2, 10.0, 11};
  const auto x = hs::generate_sieve(a, 2048);
  const auto y = hs::generate_sieve(a, 2048);
  ASSERT_EQ(x.channels.size(), y.channels.size());
  for (std::size_t i = 0; i < x.channels.size(); ++i) {
    EXPECT_EQ(x.channels[i].first_column, y.channels[i].first_column);
    EXPECT_EQ(x.channels[i].columns, y.channels[i].columns);
  }
  hs::SieveSpec b = a;
  b.seed = 12;
  const auto z = hs::generate_sieve(b, 2048);
  bool differs = false;
  for (std::size_t i = 0; i < x.channels.size(); ++i) {
    differs = differs || x.channels[i].first_column != z.channels[i].first_column;
  }
  EXPECT_TRUE(differs);
}

TEST(GenerateSieve, ChannelsDisjointAndInsideSlots) {
  const hs::SieveSpec s{0.05, 0.2, 10.0, 5};
  const int n_theta = 2048;
  const auto layout = hs::generate_sieve(s, n_theta);
  const long n = static_cast<long>(layout.channels.size());
  int last_end = -1;
  for (long i = 0; i < n; ++i) {
    const auto& c = layout.channels[i];
    EXPECT_GE(c.first_column, i * n_theta / n);
    EXPECT_LE(c.first_column + c.columns, (i + 1) * n_theta / n);
    EXPECT_GT(c.first_column, last_end);
    last_end = c.first_column + c.columns - 1;
  }
}

TEST(GenerateSieve, EquidistributedForManySeeds) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto layout = hs::generate_sieve({0.05, 0.2, 10.0, seed}, 2048);
    const auto e = hs::equidistribution(layout);
    EXPECT_TRUE(e.ok()) << "seed " << seed << " deficit " << e.worst_deficit << " excess "
                        << e.worst_excess;
  }
}

TEST(GenerateSieve, ResolutionErrorNamesMinimum) {
  try {
    hs::generate_sieve({0.05, 0.2, 1.0}, 32);
    FAIL() << "expected ResolutionError";
  } catch (const hotspots::ResolutionError& e) {
    EXPECT_NE(std::string(e.what()).find("n_theta >="), std::string::npos) << e.what();
  }
}

TEST(BuildDomain, ZeroEpsilonIsFullDisk) {
  const auto d = hs::build_domain({0.0, 0.2, 1.0}, 40, 64);
  EXPECT_EQ(d.unknowns(), d.grid_cells());
  EXPECT_NEAR(d.total_area(), kPi * 1.44, 1e-12);
  EXPECT_EQ(d.neck_area(), 0.0);
}

TEST(BuildDomain, NoChannelsDisconnects) {
  EXPECT_THROW(hs::build_domain({0.05, 0.2, 1.0}, 80, 256, {}), hotspots::ConstructionError);
}

TEST(BuildDomain, ActiveAreaMatchesMeshMeasure) {
  const hs::SieveSpec s{0.1, 0.2, 2.0, 1};
  const auto d = hs::build_domain(s, 80, 512);
  const double band = kPi * (std::pow(1.05, 2) - std::pow(0.95, 2));
  const double realized = hs::generate_sieve(s, 512).open_fraction;
  EXPECT_NEAR(d.total_area(), kPi * 1.44 - (1.0 - realized) * band, 1e-12);
  // nominal fraction: snapping to columns moves at most half a band column
  const double want = kPi * 1.44 - (1.0 - s.open_fraction()) * band;
  EXPECT_LE(std::abs(d.total_area() - want), 2.0 * band / 512);
}

TEST(BuildDomain, MaskIsGraphicalAndInsideBand) {
  const hs::SieveSpec s{0.05, 0.2, 2.0, 4};
  const auto d = hs::build_domain(s, 160, 1024);
  for (int j = 0; j < d.n_theta; ++j) {
    int transitions = 0;
    bool prev = true;
    for (int i = 1; i < d.n_r; ++i) {
      const int c = d.cell(i, j);
      const bool on = d.active[c];
      if (!on) {
        EXPECT_GE(d.faces[i], 1.0 - 0.025 - 1e-12);
        EXPECT_LE(d.faces[i + 1], 1.0 + 0.025 + 1e-12);
      }
      transitions += on != prev;
      prev = on;
    }
    EXPECT_TRUE(transitions == 0 || transitions == 2) << "column " << j;
  }
}

TEST(BuildDomain, NeckMassIsSmall) {
  for (double eps : {0.2, 0.1, 0.05}) {
    const auto s = hs::SieveSpec::from_beta(0.8 * mu2(), 0.2, eps, 1);
    const auto d = hs::build_domain(s, 160, 1024);
    EXPECT_LE(d.neck_area() / d.total_area(), eps) << eps;
  }
}

TEST(Assemble, SymmetricWithZeroRowSums) {
  const auto d = hs::build_domain({0.1, 0.2, 2.0, 1}, 40, 256);
  const auto ops = hs::assemble<double>(d);
  const Eigen::SparseMatrix<double> asym = ops.stiffness - Eigen::SparseMatrix<double>(ops.stiffness.transpose());
  EXPECT_EQ(asym.norm(), 0.0);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d.unknowns());
  EXPECT_LT((ops.stiffness * ones).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(ops.mass.sum(), d.total_area(), 1e-12);
  EXPECT_GT(ops.mass.minCoeff(), 0.0);
}

TEST(Eigensolver, DiskEigenvaluesAndResiduals) {
  const auto d = hs::build_disk(1.0, 40, 160);
  const auto sp = spectrum(d, 6);
  EXPECT_NEAR(sp.eigenvalues[0], 0.0, 1e-9);
  EXPECT_NEAR(sp.eigenvalues[1], mu2(), 1e-3 * mu2());
  EXPECT_NEAR(sp.eigenvalues[2], sp.eigenvalues[1], 1e-10);
  for (std::size_t i = 1; i < sp.eigenvalues.size(); ++i) {
    EXPECT_GE(sp.eigenvalues[i], sp.eigenvalues[i - 1] - 1e-12);
  }
  for (double r : sp.residuals) EXPECT_LE(r, 1e-8);
  // M-orthonormal
  const auto ops = hs::assemble<double>(d);
  const Eigen::MatrixXd g = sp.eigenvectors.transpose() * ops.mass.asDiagonal() * sp.eigenvectors;
  EXPECT_LT((g - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Eigensolver, LongDoubleAgrees) {
  const auto d = hs::build_disk(1.0, 20, 64);
  const auto od = hs::assemble<double>(d);
  const auto ol = hs::assemble<long double>(d);
  const auto a = hs::smallest_eigenpairs<double>(od.stiffness, od.mass, 4);
  const auto b = hs::smallest_eigenpairs<long double>(ol.stiffness, ol.mass, 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(a.eigenvalues[i], static_cast<double>(b.eigenvalues[i]), 1e-9);
  }
}

TEST(Eigensolver, BudgetExhaustionIsConvergenceError) {
  const auto d = hs::build_disk(1.0, 20, 64);
  const auto ops = hs::assemble<double>(d);
  hs::EigenOptions o;
  o.max_iterations = 1;
  EXPECT_THROW(hs::smallest_eigenpairs<double>(ops.stiffness, ops.mass, 4, o), hotspots::ConvergenceError);
}

TEST(Eigensolver, DiskRefinementOrder) {
  double prev = 0.0;
  for (int n_r : {20, 40, 80}) {
    const auto sp = spectrum(hs::build_disk(1.0, n_r, 4 * n_r), 3);
    const double err = std::abs(sp.eigenvalues[1] - mu2());
    if (prev > 0.0) EXPECT_GE(std::log2(prev / err), 1.0) << n_r;
    prev = err;
  }
}

TEST(DiscreteRatio, DiskIsOneAndChainPasses) {
  const auto d = hs::build_disk(1.2, 40, 160);
  const auto sp = spectrum(d, 3);
  const Eigen::VectorXd v = sp.eigenvectors.col(1);
  EXPECT_NEAR(hs::hotspots_ratio_discrete(d, v).ratio, 1.0, 1e-12);
  const auto chain = hs::chain_check(d, v);
  EXPECT_TRUE(chain.pass);
  EXPECT_LT(chain.pointwise_excess, 0.0);
  EXPECT_NEAR(chain.scale, 1.0 / 1.2, 1e-12);
}

TEST(DiscreteRatio, RadialFieldPeakedAtOrigin) {
  const auto d = hs::build_disk(1.0, 20, 64);
  Eigen::VectorXd f(d.unknowns());
  for (int u = 0; u < d.unknowns(); ++u) f[u] = -(2.0 - d.radius(d.active_cells[u]));
  const auto r = hs::hotspots_ratio_discrete(d, f);
  EXPECT_FALSE(r.flipped);
  EXPECT_NEAR(r.ratio, 2.0 / (2.0 - d.centers.back()), 1e-12);
  EXPECT_NEAR(hs::radial_share(d, f), 1.0, 1e-12);
}

TEST(RadialShare, AngularModeHasNoRadialPart) {
  const auto d = hs::build_disk(1.0, 20, 64);
  Eigen::VectorXd f(d.unknowns());
  for (int u = 0; u < d.unknowns(); ++u) {
    const int c = d.active_cells[u];
    f[u] = d.radius(c) * std::cos(d.theta(c));
  }
  EXPECT_LT(hs::radial_share(d, f), 1e-12);
}

TEST(Monotonicity, AddingChannelsRaisesFirstEigenvalue) {
  const hs::SieveSpec s{0.1, 0.2, 2.0, 9};
  const auto layout = hs::generate_sieve(s, 256);
  std::vector<hs::AngularInterval> half(layout.channels.begin(),
                                        layout.channels.begin() + layout.channels.size() / 2);
  const double few = spectrum(hs::build_domain(s, 40, 256, half), 2).eigenvalues[1];
  const double all = spectrum(hs::build_domain(s, 40, 256, layout.channels), 2).eigenvalues[1];
  EXPECT_GE(all, few - 1e-9);
}

TEST(Monotonicity, TrendInAlphaOnMatchedGrid) {
  double prev = 0.0;
  for (double alpha : {0.4, 0.8, 1.6, 3.2}) {
    const auto d = hs::build_domain({0.1, 0.2, alpha, 1}, 40, 512);
    const double mu = spectrum(d, 2).eigenvalues[1];
    EXPECT_GE(mu, prev - 1e-9) << alpha;
    prev = mu;
  }
}

TEST(FieldExport, CsvHeaderAndRows) {
  const auto d = hs::build_disk(1.0, 8, 16);
  const Eigen::VectorXd f = Eigen::VectorXd::Ones(d.unknowns());
  std::ostringstream os;
  hs::write_field_csv(os, d, f);
  const std::string out = os.str();
  EXPECT_EQ(out.rfind("r,theta,x,y,value\n", 0), 0u);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), d.unknowns() + 1);
}

TEST(FullDiskControl, ReproducesMu2) {
  const auto c = hs::full_disk_control(1.2, 40, 160);
  EXPECT_LT(c.relative_error, 1e-3);
  EXPECT_LT(c.multiplicity_gap, 1e-8);
  EXPECT_NEAR(c.ratio.ratio, 1.0, 1e-12);
}
