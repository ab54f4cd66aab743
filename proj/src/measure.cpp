#include "wpot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "wpot/errors.hpp"

namespace wpot {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void validate_measure(const Manifold& m, std::span<const Point> support,
                      std::span<const double> weights) {
  if (support.empty()) throw ValidationError("measure has empty support");
  if (support.size() != weights.size()) {
    throw ValidationError("support has " + std::to_string(support.size()) + " points but " +
                          std::to_string(weights.size()) + " weights were given");
  }
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (!lies_on(m, support[k])) {
      throw ValidationError("support point " + std::to_string(k) + " is not a point of " +
                            m.name());
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!std::isfinite(weights[k]) || weights[k] < 0.0) {
      throw ValidationError("negative weight " + fmt_g(weights[k]) + " at index " +
                            std::to_string(k));
    }
    if (weights[k] == 0.0) {
      throw ValidationError("zero weight at index " + std::to_string(k));
    }
    sum += weights[k];
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw ValidationError("weights sum " + fmt_g(sum) + ", expected 1");
  }
  for (std::size_t k = 0; k < support.size(); ++k) {
    for (std::size_t l = k + 1; l < support.size(); ++l) {
      if (distance(support[k], support[l]) <= kSupportTolerance) {
        throw ValidationError("duplicate support points at indices " + std::to_string(k) +
                              " and " + std::to_string(l));
      }
    }
  }
}

DiscreteMeasure::DiscreteMeasure(Manifold m, std::vector<Point> support,
                                 std::vector<double> weights)
    : manifold_(m), support_(std::move(support)), weights_(std::move(weights)) {
  validate_measure(manifold_, support_, weights_);
}

DiscreteMeasure DiscreteMeasure::dirac(const Point& x) {
  return DiscreteMeasure(manifold_of(x), {x}, {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(const Manifold& m, std::vector<Point> support) {
  const std::size_t n = support.size();
  std::vector<double> w(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
  return DiscreteMeasure(m, std::move(support), std::move(w));
}

double DiscreteMeasure::mass_at(const Point& x, double tol) const {
  require_on(manifold_, x);
  double mass = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    if (distance(support_[k], x) <= tol) mass += weights_[k];
  }
  return mass;
}

DiscreteMeasure pushforward(const Isometry& psi, const DiscreteMeasure& mu) {
  if (manifold_of(psi) != mu.manifold()) {
    throw std::invalid_argument("pushforward: isometry of " + manifold_of(psi).name() +
                                " applied to a measure on " + mu.manifold().name());
  }
  std::vector<Point> image;
  image.reserve(mu.size());
  for (const Point& x : mu.support()) image.push_back(apply_isometry(psi, x));
  return DiscreteMeasure(mu.manifold(), std::move(image), mu.weights());
}

DiscreteMeasure marginal(const DiscreteMeasure& mu, int axis) {
  const Manifold& m = mu.manifold();
  if (m.kind != ManifoldKind::Torus) throw std::invalid_argument("marginal: measure is not on a torus");
  if (axis < 0 || axis >= m.n) {
    throw std::invalid_argument("marginal: axis " + std::to_string(axis) + " out of range for " +
                                m.name());
  }
  struct Atom {
    double coord;
    double weight;
  };
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    atoms.push_back({std::get<TorusPoint>(mu.point(k))[static_cast<std::size_t>(axis)],
                     mu.weight(k)});
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.coord < b.coord; });

  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    if (!merged.empty() && circle_distance(merged.back().coord, a.coord) <= kSupportTolerance) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  // The first and last clusters can meet across the -1/2 ~ 1/2 seam.
  if (merged.size() > 1 &&
      circle_distance(merged.front().coord, merged.back().coord) <= kSupportTolerance) {
    merged.front().weight += merged.back().weight;
    merged.pop_back();
  }

  std::vector<Point> support;
  std::vector<double> weights;
  double total = 0.0;
  for (const Atom& a : merged) total += a.weight;
  for (const Atom& a : merged) {
    support.emplace_back(TorusPoint({a.coord}));
    weights.push_back(a.weight / total);
  }
  return DiscreteMeasure(Manifold::torus(1), std::move(support), std::move(weights));
}

std::string to_string(PositionPredicate p) {
  switch (p) {
    case PositionPredicate::NoAntipodalPairs:
      return "NoAntipodalPairs";
    case PositionPredicate::AvoidsAntipodalHyperplanes:
      return "AvoidsAntipodalHyperplanes";
    case PositionPredicate::DistinctFirstCoordinates:
      return "DistinctFirstCoordinates";
  }
  return "?";
}

PositionPredicate position_predicate_from_string(const std::string& s) {
  for (auto p : {PositionPredicate::NoAntipodalPairs, PositionPredicate::AvoidsAntipodalHyperplanes,
                 PositionPredicate::DistinctFirstCoordinates}) {
    if (to_string(p) == s) return p;
  }
  throw std::invalid_argument("unknown position predicate '" + s + "'");
}

PositionReport check_position(const Manifold& m, std::span<const Point> points,
                              PositionPredicate predicate) {
  if (predicate != PositionPredicate::NoAntipodalPairs && m.kind != ManifoldKind::Torus) {
    throw std::invalid_argument(to_string(predicate) + " is only defined on the torus");
  }
  for (const Point& x : points) require_on(m, x);

  PositionReport report{predicate, true, {}};
  const int count = static_cast<int>(points.size());
  for (int k = 0; k < count; ++k) {
    for (int l = k + 1; l < count; ++l) {
      const Point& a = points[static_cast<std::size_t>(k)];
      const Point& b = points[static_cast<std::size_t>(l)];
      bool bad = false;
      switch (predicate) {
        case PositionPredicate::NoAntipodalPairs:
          bad = distance(antipode(a), b) <= kPositionTolerance;
          break;
        case PositionPredicate::AvoidsAntipodalHyperplanes: {
          const auto& ta = std::get<TorusPoint>(a);
          const auto& tb = std::get<TorusPoint>(b);
          for (int j = 0; j < m.n && !bad; ++j) {
            bad = circle_distance(tb[j], ta[j] + 0.5) <= kPositionTolerance;
          }
          break;
        }
        case PositionPredicate::DistinctFirstCoordinates:
          bad = circle_distance(std::get<TorusPoint>(a)[0], std::get<TorusPoint>(b)[0]) <
                kPositionTolerance;
          break;
      }
      if (bad) report.witnesses.emplace_back(k, l);
    }
  }
  report.holds = report.witnesses.empty();
  return report;
}

PositionReport check_position(const DiscreteMeasure& mu, PositionPredicate predicate) {
  return check_position(mu.manifold(), mu.support(), predicate);
}

namespace {

// A point at geodesic distance at most kGenericJitter from x.
Point jitter(const Point& x, std::mt19937_64& rng) {
  if (const auto* t = std::get_if<TorusPoint>(&x)) {
    const double half_side = kGenericJitter / std::sqrt(static_cast<double>(t->dim()));
    std::uniform_real_distribution<double> unif(-half_side, half_side);
    std::vector<double> c(t->coords().begin(), t->coords().end());
    for (double& v : c) v += unif(rng);
    return TorusPoint(std::move(c));
  }
  const auto& s = std::get<SpherePoint>(x);
  const SpherePoint dir = sphere_tangent_direction(s, rng());
  std::uniform_real_distribution<double> unif(0.25 * kGenericJitter, kGenericJitter);
  const double r = unif(rng);
  std::vector<double> c(s.coords().begin(), s.coords().end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += r * dir[k];
  // Normalising x + r*dir gives angle atan(r) <= r.
  return SpherePoint(std::move(c));
}

}  // namespace

DiscreteMeasure perturb_to_generic(const DiscreteMeasure& mu, PositionPredicate predicate,
                                   std::uint64_t seed) {
  if (check_position(mu, predicate).holds) return mu;

  std::mt19937_64 rng(seed);
  std::vector<Point> current = mu.support();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const PositionReport report = check_position(mu.manifold(), current, predicate);
    bool distinct = true;
    for (std::size_t k = 0; k < current.size() && distinct; ++k) {
      for (std::size_t l = k + 1; l < current.size() && distinct; ++l) {
        distinct = distance(current[k], current[l]) > kSupportTolerance;
      }
    }
    if (report.holds && distinct) {
      return DiscreteMeasure(mu.manifold(), std::move(current), mu.weights());
    }
    std::set<int> movers;
    for (const auto& [k, l] : report.witnesses) movers.insert(l);
    if (!distinct) {
      for (std::size_t k = 0; k < current.size(); ++k) movers.insert(static_cast<int>(k));
    }
    for (int l : movers) {
      current[static_cast<std::size_t>(l)] = jitter(mu.point(static_cast<std::size_t>(l)), rng);
    }
  }
  throw ResourceError("perturb_to_generic: could not reach " + to_string(predicate) +
                      " after 1000 attempts");
}

}  // namespace wpot
