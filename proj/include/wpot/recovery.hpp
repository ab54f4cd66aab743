#pragma once

#include <string>
#include <vector>

#include "wpot/measure.hpp"
#include "wpot/potential.hpp"

namespace wpot {

enum class RecoveryMethod { TorusP1, TorusPGeneral, TorusP2Marginals, SphereP1, SpherePGeneral };

std::string to_string(RecoveryMethod m);

struct RecoveryResult {
  std::vector<Point> sites;
  std::vector<double> masses;
  RecoveryMethod method = RecoveryMethod::TorusP1;
  /// |1 - sum of masses| after clipping negative masses to zero.
  double residual = 0.0;
  /// Total negative mass removed by clipping (reported, not hidden).
  double clipped = 0.0;
};

struct RecoveryOptions {
  /// Use numeric limits even when the oracle knows its measure.
  bool force_numeric = false;
};

/// Masses of a torus measure at the candidate sites, read off the potential.
///
/// n >= 2, p = 1: mass at x^k is half the second-difference limit at x^k
///   (sites must satisfy AvoidsAntipodalHyperplanes).
/// n >= 2, p != 1: mass at x^k is the limit at x^k + e^1/2 divided by
///   -p 4^{(2-p)/2} (sites must satisfy DistinctFirstCoordinates). For p = 2
///   this is the mass of the hyperplane {y_1 = x^k_1}, i.e. the first marginal.
/// n = 1: circle formulas at the antipode x^k + 1/2 (NoAntipodalPairs).
///
/// Closed-form oracles use the analytic limits; grid oracles use grid_site_limit.
RecoveryResult recover_torus_weights(const PotentialOracle& t, const std::vector<Point>& sites,
                                     const RecoveryOptions& opts = {});

/// Masses on S^n from limits at the antipodes -x_j (sites: NoAntipodalPairs).
RecoveryResult recover_sphere_weights(const PotentialOracle& t, const std::vector<Point>& sites,
                                      const RecoveryOptions& opts = {});

/// Dispatches on the oracle's manifold.
RecoveryResult recover_weights(const PotentialOracle& t, const std::vector<Point>& sites,
                               const RecoveryOptions& opts = {});

struct MarginalScanOptions {
  /// Number of scan points per axis (power of two recommended). Grid oracles
  /// are always scanned at their own resolution.
  int resolution = 1024;
  /// Minimum dip depth (in units of the second-difference ratio) to report an atom.
  double threshold = 1e-9;
  RecoveryOptions recovery{};
};

/// The one-dimensional marginals of the measure behind a p = 2 potential on
/// T^n, n >= 2. Atoms are found as dips of the second difference along each
/// axis, located by bisection, and weighted by the hyperplane mass
/// mu(H(z, j)) = -1/2 * limit at z - e^j/2.
std::vector<DiscreteMeasure> recover_torus_marginals_p2(const PotentialOracle& t,
                                                        const MarginalScanOptions& opts = {});

}  // namespace wpot
