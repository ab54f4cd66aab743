#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "wpot/sampling.hpp"
#include "wpot/transport.hpp"
#include "wpot/verify.hpp"

using namespace wpot;

TEST(CenterOfMass, DiracAndPair) {
  const CenterOfMass d = center_of_mass_and_deviation(DiscreteMeasure::dirac(TorusPoint{0.3, -0.2}));
  EXPECT_NEAR(d.center[0], 0.3, 1e-15);
  EXPECT_NEAR(d.center[1], -0.2, 1e-15);
  EXPECT_EQ(d.deviation, 0.0);

  const DiscreteMeasure pair(Manifold::torus(2), {TorusPoint{0.1, 0.1}, TorusPoint{0.3, 0.2}}, {0.5, 0.5});
  const CenterOfMass c = center_of_mass_and_deviation(pair);
  EXPECT_NEAR(c.center[0], 0.2, 1e-15);
  EXPECT_NEAR(c.center[1], 0.15, 1e-15);
  EXPECT_NEAR(c.deviation, std::hypot(0.2, 0.1) / 2, 1e-15);
}

TEST(CenterOfMass, AcrossTheSeam) {
  const DiscreteMeasure mu(Manifold::torus(1), {TorusPoint{0.45}, TorusPoint{-0.45}}, {0.5, 0.5});
  const CenterOfMass c = center_of_mass_and_deviation(mu);
  EXPECT_NEAR(circle_distance(c.center[0], -0.5), 0.0, 1e-15);
  EXPECT_NEAR(c.deviation, 0.05, 1e-15);
}

TEST(CenterOfMass, RejectsWideSupport) {
  const DiscreteMeasure mu(Manifold::torus(1), {TorusPoint{0.0}, TorusPoint{0.2}, TorusPoint{-0.2}, TorusPoint{0.4}},
                           {0.25, 0.25, 0.25, 0.25});
  EXPECT_THROW(center_of_mass_and_deviation(mu), std::invalid_argument);
}

TEST(CenterOfMass, DeviationIsTheTransportDistance) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    std::vector<Point> pts;
    for (int k = 0; k < 4; ++k) pts.emplace_back(TorusPoint{0.1 + 0.4 * (rng() % 1000) / 1000.0, -0.2 + 0.4 * (rng() % 1000) / 1000.0});
    const DiscreteMeasure mu(Manifold::torus(2), pts, random_weights(pts.size(), rng));
    const CenterOfMass c = center_of_mass_and_deviation(mu);
    EXPECT_NEAR(c.deviation, solve_transport(mu, DiscreteMeasure::dirac(c.center), 2.0).distance, 1e-12);
  }
}

TEST(CubeIsometry, MapsTheCubeOntoItself) {
  const std::vector<double> lo{0.1, -0.4};
  const TorusIsometry psi = cube_isometry(lo, {1, 0}, {-1, 1});
  for (double a : {0.0, 0.13, 0.5}) {
    for (double b : {0.0, 0.37, 0.5}) {
      const TorusPoint y = psi(TorusPoint{lo[0] + a, lo[1] + b});
      for (std::size_t k = 0; k < 2; ++k) {
        const double offset = y[k] - lo[k] - std::floor(y[k] - lo[k]);
        EXPECT_TRUE(offset <= 0.5 + 1e-15 || offset >= 1.0 - 1e-15) << offset;
      }
    }
  }
}

TEST(AlphaInterval, Examples) {
  const Point x = TorusPoint{0.0, 0.0};
  const Point y = TorusPoint{0.4, 0.0};
  const AlphaInterval closer = dirac_segment_alpha_interval(DiscreteMeasure::dirac(TorusPoint{0.05, 0.1}), x, y);
  EXPECT_DOUBLE_EQ(closer.lo, 1.0);
  EXPECT_DOUBLE_EQ(closer.hi, 1.0);

  const DiscreteMeasure split(Manifold::torus(2), {TorusPoint{0.05, 0.1}, TorusPoint{0.35, -0.1}}, {0.5, 0.5});
  const AlphaInterval half = dirac_segment_alpha_interval(split, x, y);
  EXPECT_DOUBLE_EQ(half.lo, 0.5);
  EXPECT_DOUBLE_EQ(half.hi, 0.5);

  const DiscreteMeasure bisector(Manifold::torus(2), {TorusPoint{0.2, 0.1}, TorusPoint{-0.3, -0.2}}, {0.5, 0.5});
  const AlphaInterval all = dirac_segment_alpha_interval(bisector, x, y);
  EXPECT_DOUBLE_EQ(all.lo, 0.0);
  EXPECT_DOUBLE_EQ(all.hi, 1.0);
  const AlphaInterval grid = alpha_grid_search(bisector, x, y);
  EXPECT_DOUBLE_EQ(grid.lo, 0.0);
  EXPECT_DOUBLE_EQ(grid.hi, 1.0);
}

TEST(AlphaInterval, MatchesGridSearch) {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 10; ++t) {
    const Manifold m = t % 2 == 0 ? Manifold::torus(2) : Manifold::sphere(2);
    const Point x = random_point(m, rng);
    const Point y = random_point(m, rng);
    const DiscreteMeasure eta = random_measure(m, rng, {1, 5, {}});
    const AlphaInterval law = dirac_segment_alpha_interval(eta, x, y);
    const AlphaInterval grid = alpha_grid_search(eta, x, y);
    EXPECT_NEAR(law.lo, grid.lo, 1e-3);
    EXPECT_NEAR(law.hi, grid.hi, 1e-3);
  }
}

TEST(Suites, NamesAndUnknownSuite) {
  const auto& names = suite_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "isometry"), names.end());
  SuiteConfig cfg;
  cfg.suite = "nope";
  EXPECT_THROW(run_suite(cfg), std::invalid_argument);
  cfg.suite = "isometry";
  cfg.trials = 0;
  EXPECT_THROW(run_suite(cfg), std::invalid_argument);
}

TEST(Suites, DeterministicFromSeed) {
  SuiteConfig cfg;
  cfg.suite = "isometry";
  cfg.trials = 30;
  cfg.seed = 7;
  const SuiteReport a = run_suite(cfg);
  const SuiteReport b = run_suite(cfg);
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.metrics, b.metrics);
  EXPECT_EQ(format_report_table({a}), format_report_table({b}));
}

TEST(Suites, DiameterOnTheTwoSphere) {
  SuiteConfig cfg;
  cfg.suite = "diameter";
  cfg.manifold = Manifold::sphere(2);
  cfg.trials = 50;
  EXPECT_TRUE(run_suite(cfg).passed);
}

TEST(Suites, RecoveryTorusP2UsesMarginals) {
  SuiteConfig cfg;
  cfg.suite = "recovery";
  cfg.manifold = Manifold::torus(2);
  cfg.p = 2.0;
  cfg.trials = 5;
  const SuiteReport r = run_suite(cfg);
  EXPECT_TRUE(r.passed);
  bool saw_marginal = false;
  for (const auto& [key, value] : r.metrics) saw_marginal = saw_marginal || key.find("marginal") != std::string::npos;
  EXPECT_TRUE(saw_marginal);
}

TEST(Suites, ToleranceOverrideCanFail) {
  SuiteConfig cfg;
  cfg.suite = "recovery";
  cfg.manifold = Manifold::torus(2);
  cfg.p = 1.5;
  cfg.trials = 2;
  cfg.tolerances["sampled"] = 1e-12;
  const SuiteReport r = run_suite(cfg);
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.failures.empty());
}
