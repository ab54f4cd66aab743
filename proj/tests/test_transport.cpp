#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "wpot/errors.hpp"
#include "wpot/potential.hpp"
#include "wpot/sampling.hpp"
#include "wpot/transport.hpp"

using namespace wpot;

namespace {

// Equal-weight optimum by enumerating permutations.
double permutation_optimum(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  std::vector<std::size_t> perm(mu.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) c += std::pow(distance(mu.point(i), nu.point(perm[i])), p);
    best = std::min(best, c / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST(Transport, DiracPairIsTheDistance) {
  const Point x = TorusPoint{0.4, 0.1};
  const Point y = TorusPoint{-0.4, 0.3};
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const TransportResult r = solve_transport(DiscreteMeasure::dirac(x), DiscreteMeasure::dirac(y), p);
    EXPECT_NEAR(r.distance, distance(x, y), 1e-15);
    EXPECT_DOUBLE_EQ(r.coupling(0, 0), 1.0);
  }
}

TEST(Transport, TwoAtomsToOnePoint) {
  const Point x = SpherePoint{1, 0, 0};
  const Point y = SpherePoint{0, 1, 0};
  const Point z = SpherePoint{0, 0, 1};
  const DiscreteMeasure mu = DiscreteMeasure::uniform(Manifold::sphere(2), {x, y});
  const double p = 2.5;
  const double want = std::pow(0.5 * std::pow(distance(x, z), p) + 0.5 * std::pow(distance(y, z), p), 1.0 / p);
  EXPECT_NEAR(solve_transport(mu, DiscreteMeasure::dirac(z), p).distance, want, 1e-14);
}

TEST(Transport, SelfDistanceIsZero) {
  std::mt19937_64 rng(21);
  const DiscreteMeasure mu = random_measure(Manifold::torus(2), rng);
  EXPECT_NEAR(solve_transport(mu, mu, 1.0).distance, 0.0, 1e-15);
}

TEST(Transport, EqualWeightsMatchPermutations) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 40; ++t) {
    const Manifold m = t % 2 == 0 ? Manifold::torus(2) : Manifold::sphere(2);
    std::vector<Point> a;
    std::vector<Point> b;
    for (int k = 0; k < 4; ++k) {
      a.push_back(random_point(m, rng));
      b.push_back(random_point(m, rng));
    }
    const DiscreteMeasure mu = DiscreteMeasure::uniform(m, a);
    const DiscreteMeasure nu = DiscreteMeasure::uniform(m, b);
    const double p = 1.0 + 0.5 * (t % 4);
    EXPECT_NEAR(solve_transport(mu, nu, p).cost, permutation_optimum(mu, nu, p), 1e-12);
    EXPECT_NEAR(brute_force_transport(mu, nu, p).cost, permutation_optimum(mu, nu, p), 1e-12);
  }
}

TEST(Transport, GeneralWeightsMatchBruteForce) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const Manifold m = t % 2 == 0 ? Manifold::torus(1) : Manifold::sphere(1);
    const int rows = 1 + t % 4;
    const int cols = 12 / rows;
    const DiscreteMeasure mu = random_measure(m, rng, {rows, rows, {}});
    const DiscreteMeasure nu = random_measure(m, rng, {cols, cols, {}});
    const TransportResult fast = solve_transport(mu, nu, 1.5);
    EXPECT_NEAR(fast.cost, brute_force_transport(mu, nu, 1.5).cost, 1e-12);
    EXPECT_NEAR(coupling_cost(fast.coupling, mu, nu, 1.5), fast.cost, 1e-14);
  }
}

TEST(Transport, NeverBeatsTheProductCoupling) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 20; ++t) {
    const DiscreteMeasure mu = random_measure(Manifold::torus(3), rng, {5, 10, {}});
    const DiscreteMeasure nu = random_measure(Manifold::torus(3), rng, {5, 10, {}});
    const double product = coupling_cost(Coupling::product(mu.weights(), nu.weights()), mu, nu, 2.0);
    EXPECT_LE(solve_transport(mu, nu, 2.0).cost, product + 1e-14);
  }
}

TEST(Transport, MatchesPotentialForDiracTarget) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 20; ++t) {
    const Manifold m = t % 2 == 0 ? Manifold::torus(2) : Manifold::sphere(2);
    const DiscreteMeasure mu = random_measure(m, rng);
    const Point x = random_point(m, rng);
    EXPECT_NEAR(potential_eval(mu, 1.5, x), solve_transport(mu, DiscreteMeasure::dirac(x), 1.5).cost, 1e-12);
  }
}

TEST(Transport, DegenerateInstance) {
  // Identical equal-weight supports: many optimal bases, cost zero.
  std::vector<Point> pts{TorusPoint{0.0}, TorusPoint{0.25}, TorusPoint{-0.25}, TorusPoint{-0.5}};
  const DiscreteMeasure mu = DiscreteMeasure::uniform(Manifold::torus(1), pts);
  std::reverse(pts.begin(), pts.end());
  const DiscreteMeasure nu = DiscreteMeasure::uniform(Manifold::torus(1), pts);
  EXPECT_NEAR(solve_transport(mu, nu, 1.0).cost, 0.0, 1e-15);
}

TEST(Coupling, CostOfDiagonalAndProduct) {
  const DiscreteMeasure mu(Manifold::torus(1), {TorusPoint{0.1}, TorusPoint{0.3}}, {0.5, 0.5});
  Coupling diag(2, 2);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.5;
  EXPECT_DOUBLE_EQ(coupling_cost(diag, mu, mu, 1.0), 0.0);

  const DiscreteMeasure x = DiscreteMeasure::dirac(TorusPoint{0.1});
  const DiscreteMeasure y = DiscreteMeasure::dirac(TorusPoint{0.4});
  EXPECT_NEAR(coupling_cost(Coupling::product(x.weights(), y.weights()), x, y, 2.0), 0.09, 1e-15);
}

TEST(Coupling, RejectsWrongMarginals) {
  const DiscreteMeasure mu(Manifold::torus(1), {TorusPoint{0.1}, TorusPoint{0.3}}, {0.5, 0.5});
  Coupling bad(2, 2);
  bad(0, 0) = 1.0;
  EXPECT_THROW(coupling_cost(bad, mu, mu, 1.0), InvalidCoupling);
  Coupling negative(2, 2);
  negative(0, 0) = 0.6;
  negative(0, 1) = -0.1;
  negative(1, 1) = 0.6;
  negative(1, 0) = -0.1;
  EXPECT_THROW(coupling_cost(negative, mu, mu, 1.0), InvalidCoupling);
}

TEST(Transport, ArgumentErrors) {
  const DiscreteMeasure a = DiscreteMeasure::dirac(TorusPoint{0.1});
  const DiscreteMeasure b = DiscreteMeasure::dirac(SpherePoint{1, 0});
  EXPECT_THROW(solve_transport(a, b, 1.0), std::invalid_argument);
  EXPECT_THROW(solve_transport(a, a, 0.5), std::invalid_argument);
  std::mt19937_64 rng(26);
  const DiscreteMeasure big = random_measure(Manifold::torus(1), rng, {7, 7, {}});
  EXPECT_THROW(brute_force_transport(big, big, 1.0), ResourceError);
}
