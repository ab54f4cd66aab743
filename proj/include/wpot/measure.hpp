#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wpot/manifold.hpp"

namespace wpot {

/// Support points closer than this are treated as the same point.
inline constexpr double kSupportTolerance = 1e-10;
/// Tolerance of the genericity predicates, and of atom / hyperplane membership.
inline constexpr double kPositionTolerance = 1e-10;
inline constexpr double kWeightSumTolerance = 1e-12;

/// Finitely supported probability measure sum_k w_k delta_{x^k}.
///
/// Construction validates every invariant: strictly positive weights summing to
/// one, pairwise distinct support points, all points on the given manifold.
class DiscreteMeasure {
 public:
  DiscreteMeasure(Manifold m, std::vector<Point> support, std::vector<double> weights);

  static DiscreteMeasure dirac(const Point& x);
  /// Equal weights 1/N on the given points.
  static DiscreteMeasure uniform(const Manifold& m, std::vector<Point> support);

  const Manifold& manifold() const { return manifold_; }
  std::size_t size() const { return support_.size(); }
  const std::vector<Point>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  const Point& point(std::size_t k) const { return support_[k]; }
  double weight(std::size_t k) const { return weights_[k]; }

  /// mu({x}), matching support points within `tol`.
  double mass_at(const Point& x, double tol = kPositionTolerance) const;

 private:
  Manifold manifold_;
  std::vector<Point> support_;
  std::vector<double> weights_;
};

/// Throws ValidationError naming the first violated invariant.
void validate_measure(const Manifold& m, std::span<const Point> support,
                      std::span<const double> weights);

/// The image measure psi_# mu: support mapped pointwise, weights unchanged.
DiscreteMeasure pushforward(const Isometry& psi, const DiscreteMeasure& mu);

/// Image of a torus measure under the projection onto coordinate `axis`
/// (zero-based). Atoms whose projections lie within 1e-10 on the circle are
/// merged; the result is sorted by coordinate.
DiscreteMeasure marginal(const DiscreteMeasure& mu, int axis);

enum class PositionPredicate {
  /// No support point is the antipode of another.
  NoAntipodalPairs,
  /// Torus only: no support point lies on H(x^k + e^j/2, j) for another x^k.
  AvoidsAntipodalHyperplanes,
  /// Torus only: first coordinates pairwise different.
  DistinctFirstCoordinates,
};

std::string to_string(PositionPredicate p);
PositionPredicate position_predicate_from_string(const std::string& s);

struct PositionReport {
  PositionPredicate predicate;
  bool holds = true;
  /// Offending zero-based index pairs (k, l), k < l.
  std::vector<std::pair<int, int>> witnesses;
};

PositionReport check_position(const Manifold& m, std::span<const Point> points,
                              PositionPredicate predicate);
PositionReport check_position(const DiscreteMeasure& mu, PositionPredicate predicate);

/// Moves offending support points by at most 1e-4 (geodesic) until the
/// predicate holds. Weights are untouched; a generic input is returned as is.
DiscreteMeasure perturb_to_generic(const DiscreteMeasure& mu, PositionPredicate predicate,
                                   std::uint64_t seed);

inline constexpr double kGenericJitter = 1e-4;

}  // namespace wpot
