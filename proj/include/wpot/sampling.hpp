#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "wpot/manifold.hpp"
#include "wpot/measure.hpp"

namespace wpot {

/// Independent sub-seed for stream `stream` of a base seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Uniform point: uniform coordinates on the torus, normalised Gaussian on the sphere.
Point random_point(const Manifold& m, std::mt19937_64& rng);

/// Symmetric Dirichlet(1) weights of length n.
std::vector<double> random_weights(std::size_t n, std::mt19937_64& rng);

struct RandomMeasureOptions {
  int min_atoms = 2;
  int max_atoms = 8;
  /// Predicates enforced on the support through perturb_to_generic.
  std::vector<PositionPredicate> predicates;
};

/// Dirichlet weights on uniform support points, then made generic for every
/// requested predicate.
DiscreteMeasure random_measure(const Manifold& m, std::mt19937_64& rng,
                               const RandomMeasureOptions& opts = {});

/// All predicates that make sense on m (the torus ones only on T^n).
std::vector<PositionPredicate> all_predicates(const Manifold& m);

}  // namespace wpot
