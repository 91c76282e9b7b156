#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "hotspots/ball.hpp"
#include "hotspots/errors.hpp"
#include "hotspots/specfun.hpp"

namespace hb = hotspots::ball;

namespace {

// 30-digit reference values from an independent arbitrary-precision evaluation.
struct SpectrumFixture {
  int d;
  double j_root;
  double p_root;
  double s_d;
};

const SpectrumFixture kFixtures[] = {
    {2, 2.4048255576957728, 1.8411837813406593, 3.1642787788424521},
    {3, std::numbers::pi, 2.0815759778181006, 2.3861333684648164},
    {4, 3.8317059702075123, 2.2999103302284109, 2.1299860148219294},
    {10, 7.5883424345038044, 3.3405507521801356, 1.7987719992981223},
    {100, 56.072903051148753, 10.050850362784551, 1.6613527295449345},
    {200, 107.80810329718983, 14.177795987538353, 1.6549705101550204},
};

}  // namespace

TEST(BallSpectrum, MatchesReferenceRoots) {
  for (const auto& f : kFixtures) {
    const auto& s = hb::ball_spectrum(f.d);
    EXPECT_EQ(s.dim, f.d);
    EXPECT_NEAR(s.j_root, f.j_root, 1e-10) << "d=" << f.d;
    EXPECT_NEAR(s.p_root, f.p_root, 1e-10) << "d=" << f.d;
    EXPECT_DOUBLE_EQ(s.lambda1, s.j_root * s.j_root);
    EXPECT_DOUBLE_EQ(s.mu1, s.p_root * s.p_root);
  }
  EXPECT_NEAR(hb::ball_spectrum(2).mu1, 3.3899577166718887, 1e-9);
  EXPECT_NEAR(hb::ball_spectrum(3).mu1, 4.3329585514293817, 1e-9);
}

TEST(BallSpectrum, OrderingAndGrowthEnvelope) {
  for (int d = hb::kMinDim; d <= hb::kMaxDim; ++d) {
    const auto& s = hb::ball_spectrum(d);
    EXPECT_GT(s.mu1, 0.0);
    EXPECT_LT(s.mu1, s.lambda1) << "d=" << d;
    EXPECT_LE(std::abs(s.mu1 - d), 5.0 * std::cbrt(d)) << "d=" << d;
  }
}

TEST(BallSpectrum, RejectsUnsupportedDimensions) {
  EXPECT_THROW(hb::ball_spectrum(1), hotspots::UnsupportedRangeError);
  EXPECT_THROW(hb::ball_spectrum(201), hotspots::UnsupportedRangeError);
}

TEST(BallSpectrum, ConcurrentReadersSeeOneValue) {
  std::vector<std::thread> pool;
  std::vector<const hb::BallSpectrum*> seen(8);
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&seen, t] { seen[t] = &hb::ball_spectrum(57); });
  }
  for (auto& th : pool) th.join();
  for (int t = 1; t < 8; ++t) EXPECT_EQ(seen[t], seen[0]);
}

TEST(Eta, TableValues) {
  // Published to four truncated decimals: the digits v denote [v, v + 1e-4).
  const double table[][2] = {{2, 3.1642}, {3, 2.3861}, {4, 2.1299}, {10, 1.7987}, {100, 1.6613}};
  for (const auto& row : table) {
    const double s = hb::hotspots_constant(static_cast<int>(row[0]));
    EXPECT_NEAR(s, row[1] + 5e-5, 5e-5) << "d=" << row[0];
    EXPECT_EQ(std::floor(s * 1e4), std::round(row[1] * 1e4)) << "d=" << row[0];
  }
  for (const auto& f : kFixtures) {
    EXPECT_NEAR(hb::hotspots_constant(f.d), f.s_d, 1e-11) << "d=" << f.d;
    EXPECT_DOUBLE_EQ(hb::eta(f.d, 0.0), hb::hotspots_constant(f.d));
  }
}

TEST(Eta, BoundaryAndClosedForms) {
  for (int d : {2, 3, 7, 50, 200}) EXPECT_EQ(hb::eta(d, 1.0), 1.0);
  // d = 3: eta(r) = sin(r p) / (r p) * p / sin(p).
  const double p = hb::ball_spectrum(3).p_root;
  for (double r : {0.1, 0.37, 0.8}) {
    EXPECT_NEAR(hb::eta(3, r), std::sin(r * p) / (r * std::sin(p)), 1e-12);
  }
  EXPECT_NEAR(hb::eta(2, 0.5), 2.5285416092239217, 1e-11);
  EXPECT_THROW(hb::eta(2, -0.1), hotspots::DomainError);
  EXPECT_THROW(hb::eta(2, 1.0001), hotspots::DomainError);
}

TEST(Eta, StrictlyDecreasing) {
  for (int d : {2, 3, 10, 100, 200}) {
    const hb::EtaProfile eta(d);
    EXPECT_GT(eta.s_d(), 1.0);
    double prev = eta(0.0);
    for (int i = 1; i <= 10000; ++i) {
      const double cur = eta(i / 10000.0);
      ASSERT_LT(cur, prev) << "d=" << d << " i=" << i;
      prev = cur;
    }
  }
}

TEST(Eta, DerivativeMatchesFiniteDifference) {
  const hb::EtaProfile eta(5);
  const double h = 1e-6;
  for (double r : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(eta.derivative(r), (eta(r + h) - eta(r - h)) / (2 * h), 1e-7);
  }
  // eta'(1) = -(p^2 / d) Lambda_{d/2}(p) / Lambda_{d/2-1}(p).
  const double p = eta.spectrum().p_root;
  const double expected = -p * p / 5.0 * hotspots::specfun::normalized_bessel(2.5, p).value /
                          hotspots::specfun::normalized_bessel(1.5, p).value;
  EXPECT_NEAR(eta.derivative(1.0), expected, 1e-12);
}

TEST(Eta, OdeResidualIsSecondOrder) {
  for (int d : {2, 3, 10}) {
    const hb::EtaProfile eta(d);
    const double mu = eta.spectrum().mu1;
    auto max_residual = [&](double h) {
      double worst = 0.0;
      for (int i = 1; i <= 100; ++i) {
        const double r = 0.05 + 0.9 * (i - 1) / 99.0;
        const double f0 = eta(r);
        const double fp = eta(r + h);
        const double fm = eta(r - h);
        const double d2 = (fp - 2 * f0 + fm) / (h * h);
        const double d1 = (fp - fm) / (2 * h);
        worst = std::max(worst, std::abs(d2 + (d - 1) / r * d1 + mu * f0));
      }
      return worst;
    };
    const double coarse = max_residual(2e-2);
    const double fine = max_residual(1e-2);
    EXPECT_GE(std::log2(coarse / fine), 1.9) << "d=" << d;
  }
}

TEST(Landscape, SpecializesToEta) {
  for (int d : {2, 3, 10}) {
    const double mu = hb::ball_spectrum(d).mu1;
    for (double r : {0.0, 0.3, 0.77, 1.0}) {
      EXPECT_NEAR(hb::landscape_v(d, mu, r), hb::eta(d, r), 1e-13);
    }
  }
  EXPECT_NEAR(hb::landscape_v(2, 1.0, 0.0), 1.3068518339335652, 1e-12);
  for (double r : {0.0, 0.5, 1.0}) EXPECT_NEAR(hb::landscape_v(4, 1e-10, r), 1.0, 1e-10);
}

TEST(Landscape, MonotoneInMuAndAtLeastOne) {
  for (int d : {2, 3, 6}) {
    const double lambda = hb::ball_spectrum(d).lambda1;
    for (int j = 1; j <= 20; ++j) {
      const double r = j / 21.0;
      double prev = 0.0;
      for (int i = 1; i <= 20; ++i) {
        const double mu = lambda * i / 21.0;
        const double v = hb::landscape_v(d, mu, r);
        EXPECT_GE(v, 1.0);
        EXPECT_GT(v, prev) << "d=" << d << " r=" << r << " mu=" << mu;
        prev = v;
      }
    }
  }
}

TEST(Landscape, RejectsMuOutsideRange) {
  const double lambda = hb::ball_spectrum(2).lambda1;
  EXPECT_THROW(hb::landscape_v(2, lambda, 0.5), hotspots::DomainError);
  EXPECT_THROW(hb::landscape_v(2, 0.0, 0.5), hotspots::DomainError);
  EXPECT_THROW(hb::landscape_v(2, 1.0, 1.5), hotspots::DomainError);
}

TEST(EtaInfinity, Values) {
  EXPECT_DOUBLE_EQ(hb::eta_infinity(1.0), 1.0);
  EXPECT_NEAR(hb::eta_infinity(0.0), 1.6487212707001282, 1e-15);
  EXPECT_NEAR(hb::eta_infinity(0.5), std::exp(0.375), 1e-15);
  EXPECT_THROW(hb::eta_infinity(2.0), hotspots::DomainError);
}

TEST(VolumeCurve, EndpointsAndMonotonicity) {
  for (int d : {2, 3, 10}) {
    const auto curve = hb::volume_curve(d, 101);
    ASSERT_EQ(curve.points.size(), 101u);
    EXPECT_EQ(curve.points.front().level, 1.0);
    EXPECT_EQ(curve.points.front().fraction, 1.0);
    EXPECT_DOUBLE_EQ(curve.points.back().level, hb::hotspots_constant(d));
    EXPECT_EQ(curve.points.back().fraction, 0.0);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      EXPECT_GT(curve.points[i].level, curve.points[i - 1].level);
      EXPECT_LT(curve.points[i].fraction, curve.points[i - 1].fraction);
    }
  }
  EXPECT_THROW(hb::volume_curve(2, 1), hotspots::DomainError);
}

TEST(VolumeCurve, QuarterFractionInTwoDimensions) {
  const auto curve = hb::volume_curve(2, 5);
  EXPECT_DOUBLE_EQ(curve.points[3].fraction, 0.25);
  EXPECT_NEAR(curve.points[3].level, 2.5285416092239217, 1e-11);
}

TEST(VolumeCurve, RoundTrip) {
  for (int d : {2, 3, 10}) {
    const hb::EtaProfile eta(d);
    for (int i = 0; i < 100; ++i) {
      const double r = i / 99.0;
      EXPECT_NEAR(hb::volume_fraction(d, eta(r)), std::pow(r, d), 1e-9) << "d=" << d << " r=" << r;
    }
  }
  EXPECT_EQ(hb::volume_fraction(4, 1.0), 1.0);
  EXPECT_EQ(hb::volume_fraction(4, hb::hotspots_constant(4)), 0.0);
  EXPECT_THROW(hb::volume_fraction(2, 0.9), hotspots::DomainError);
  EXPECT_THROW(hb::volume_fraction(2, 3.2), hotspots::DomainError);
}

TEST(Asymptotics, SqrtELimit) {
  const auto rows = hb::asymptotic_report({10, 20, 50, 100, 200});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].gap, 0.0);
    if (i > 0) EXPECT_LT(rows[i].gap, rows[i - 1].gap);
  }
  EXPECT_LT(rows.back().gap, 0.01);
}

TEST(Asymptotics, GaussianProfileAndVolumeDecay) {
  const auto rows = hb::asymptotic_report({5, 10, 50, 100}, 1.1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].profile_sup, rows[i - 1].profile_sup);
    EXPECT_LT(rows[i].volume, rows[i - 1].volume);
  }
  // The sup is attained at the origin, where it equals S_d - sqrt(e).
  for (const auto& row : rows) EXPECT_NEAR(row.profile_sup, row.gap, 1e-14);
  EXPECT_LT(rows[3].volume / rows[1].volume, 1e-3);
  for (const auto& row : rows) {
    EXPECT_NEAR(row.decay_rate, -std::log(row.volume) / row.dim, 1e-15);
  }
}
