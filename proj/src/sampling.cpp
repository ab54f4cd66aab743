#include "wpot/sampling.hpp"

#include "wpot/errors.hpp"

namespace wpot {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Point random_point(const Manifold& m, std::mt19937_64& rng) {
  std::vector<double> c(static_cast<std::size_t>(m.ambient_dim()));
  if (m.kind == ManifoldKind::Torus) {
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    for (double& v : c) v = unif(rng);
    return TorusPoint(std::move(c));
  }
  std::normal_distribution<double> gauss;
  for (double& v : c) v = gauss(rng);
  return SpherePoint(std::move(c));
}

std::vector<double> random_weights(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& v : w) {
    v = expo(rng) + 1e-12;
    sum += v;
  }
  for (double& v : w) v /= sum;
  // Put the rounding residue on the largest weight so the sum is 1 to the last ulp.
  double total = 0.0;
  std::size_t largest = 0;
  for (std::size_t k = 0; k < n; ++k) {
    total += w[k];
    if (w[k] > w[largest]) largest = k;
  }
  if (n > 0) w[largest] += 1.0 - total;
  return w;
}

std::vector<PositionPredicate> all_predicates(const Manifold& m) {
  if (m.kind == ManifoldKind::Torus) {
    return {PositionPredicate::NoAntipodalPairs, PositionPredicate::AvoidsAntipodalHyperplanes,
            PositionPredicate::DistinctFirstCoordinates};
  }
  return {PositionPredicate::NoAntipodalPairs};
}

DiscreteMeasure random_measure(const Manifold& m, std::mt19937_64& rng,
                               const RandomMeasureOptions& opts) {
  std::uniform_int_distribution<int> count(opts.min_atoms, opts.max_atoms);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const auto n = static_cast<std::size_t>(count(rng));
    std::vector<Point> support;
    for (std::size_t k = 0; k < n; ++k) support.push_back(random_point(m, rng));
    bool distinct = true;
    for (std::size_t k = 0; k < n && distinct; ++k) {
      for (std::size_t l = k + 1; l < n && distinct; ++l) {
        distinct = distance(support[k], support[l]) > 1e-6;
      }
    }
    if (!distinct) continue;
    DiscreteMeasure mu(m, std::move(support), random_weights(n, rng));
    // Each perturbation moves points by at most 1e-4; repeat until all hold at once.
    for (int round = 0; round < 10; ++round) {
      bool all_hold = true;
      for (PositionPredicate p : opts.predicates) {
        if (!check_position(mu, p).holds) {
          all_hold = false;
          mu = perturb_to_generic(mu, p, rng());
        }
      }
      if (all_hold) return mu;
    }
  }
  throw ResourceError("random_measure: could not draw a generic measure");
}

}  // namespace wpot
