#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "wpot/errors.hpp"
#include "wpot/fourier.hpp"
#include "wpot/sampling.hpp"

using namespace wpot;

namespace {

constexpr double kPi = std::numbers::pi;

// Midpoint rule on a fine grid; accurate enough to check the smooth p = 3 case.
double midpoint_coeff(double p, int j) {
  const int n = 1 << 18;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * 0.5 / n;
    s += std::pow(x, p) * std::cos(2 * kPi * j * x);
  }
  return 2.0 * s * 0.5 / n;
}

}  // namespace

TEST(CostCoeff, ClosedFormValues) {
  EXPECT_NEAR(cost_coeff_closed(2.0, 0), 1.0 / 12.0, 1e-16);
  EXPECT_NEAR(cost_coeff_closed(2.0, 1), -0.05066059182116889, 1e-16);
  EXPECT_EQ(cost_coeff_closed(1.0, 2), 0.0);
  EXPECT_DOUBLE_EQ(cost_coeff_closed(1.0, 0), 0.25);
  EXPECT_NEAR(cost_coeff_closed(1.0, 3), -1.0 / (9 * kPi * kPi), 1e-16);
  EXPECT_THROW(cost_coeff_closed(1.5, 1), std::invalid_argument);
}

TEST(CostCoeff, TwoDimensionalP2) {
  const std::vector<int> both{1, 1};
  const std::vector<int> axis{0, 3};
  const std::vector<int> zero{0, 0};
  EXPECT_EQ(cost_coeff_closed(2.0, both), 0.0);
  EXPECT_NEAR(cost_coeff_closed(2.0, axis), -0.005628954646796543, 1e-16);
  EXPECT_NEAR(cost_coeff_closed(2.0, zero), 1.0 / 6.0, 1e-16);
}

TEST(CostCoeff, QuadratureMatchesClosedForms) {
  for (int j = -64; j <= 64; ++j) {
    EXPECT_NEAR(cost_coeff_quadrature(1.0, j), cost_coeff_closed(1.0, j), 1e-9) << j;
    EXPECT_NEAR(cost_coeff_quadrature(2.0, j), cost_coeff_closed(2.0, j), 1e-9) << j;
  }
}

TEST(CostCoeff, QuadratureMatchesMidpointForP3) {
  for (int j : {0, 1, 5, 17}) EXPECT_NEAR(cost_coeff_quadrature(3.0, j), midpoint_coeff(3.0, j), 1e-10);
}

TEST(CostCoeff, ErrorEstimateIsSmallAndBounds) {
  const QuadratureValue q = cost_coeff_quadrature_with_error(2.0, 7);
  EXPECT_LT(q.error, 1e-12);
  EXPECT_LE(std::abs(q.value - cost_coeff_closed(2.0, 7)), 1e-12);
  EXPECT_THROW(cost_coeff_quadrature(2.0, 1, 1000), std::invalid_argument);
}

TEST(MeasureTransform, Examples) {
  std::mt19937_64 rng(51);
  const DiscreteMeasure mu = random_measure(Manifold::torus(1), rng);
  EXPECT_EQ(measure_transform(mu, 0), std::complex<double>(1.0, 0.0));
  const DiscreteMeasure dirac = DiscreteMeasure::dirac(TorusPoint{0.0});
  for (int j = -5; j <= 5; ++j) EXPECT_NEAR(std::abs(measure_transform(dirac, j) - 1.0), 0.0, 1e-15);
  const DiscreteMeasure half(Manifold::torus(1), {TorusPoint{0.0}, TorusPoint{-0.5}}, {0.5, 0.5});
  EXPECT_NEAR(std::abs(measure_transform(half, 1)), 0.0, 1e-15);
}

TEST(Convolution, DiracAndRandomMeasures) {
  EXPECT_LE(convolution_identity_check(DiscreteMeasure::dirac(TorusPoint{0.0}), 2.0, 16), 1e-8);
  std::mt19937_64 rng(52);
  const DiscreteMeasure mu3 = random_measure(Manifold::torus(1), rng, {3, 3, {}});
  EXPECT_LE(convolution_identity_check(mu3, 2.0, 16), 1e-8);
  const DiscreteMeasure mu = random_measure(Manifold::torus(1), rng);
  EXPECT_LE(convolution_identity_check(mu, 1.5, 16), 1e-7);
}

TEST(Spectrum, ZeroSets) {
  EXPECT_EQ(nonvanishing_scan(1.0, 8).zeros, (std::vector<int>{-8, -6, -4, -2, 2, 4, 6, 8}));
  EXPECT_TRUE(nonvanishing_scan(2.0, 64).zeros.empty());
  EXPECT_TRUE(nonvanishing_scan(1.5, 64).zeros.empty());
  const SpectrumReport closed = closed_form_spectrum(1.0, 8);
  EXPECT_EQ(closed.zeros, nonvanishing_scan(1.0, 8).zeros);
  EXPECT_EQ(closed.frequencies.size(), 17u);
}

TEST(FourierRecover, DiracAndTwoAtoms) {
  const PotentialOracle d =
      PotentialOracle::sampled(sample_potential(PotentialOracle::closed_form(DiscreteMeasure::dirac(TorusPoint{0.0}), 2.0), 1 << 16));
  const auto hat = fourier_recover(d, 2.0, 4);
  for (const auto& v : hat) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-6);

  const DiscreteMeasure mu(Manifold::torus(1), {TorusPoint{0.0}, TorusPoint{0.25}}, {0.5, 0.5});
  const PotentialOracle g = PotentialOracle::sampled(sample_potential(PotentialOracle::closed_form(mu, 2.0), 1 << 16));
  const auto two = fourier_recover(g, 2.0, 2);
  EXPECT_NEAR(std::abs(two[3] - std::complex<double>(0.5, -0.5)), 0.0, 1e-6);
}

TEST(FourierRecover, P1HitsVanishingCoefficients) {
  const PotentialOracle g = PotentialOracle::sampled(
      sample_potential(PotentialOracle::closed_form(DiscreteMeasure::dirac(TorusPoint{0.1}), 1.0), 1 << 10));
  try {
    fourier_recover(g, 1.0, 2);
    FAIL() << "expected UnrecoverableFrequency";
  } catch (const UnrecoverableFrequency& e) {
    EXPECT_EQ(e.frequencies(), (std::vector<int>{-2, 2}));
  }
}
