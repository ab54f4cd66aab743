#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wpot/manifold.hpp"
#include "wpot/measure.hpp"

namespace wpot {

struct CenterOfMass {
  TorusPoint center;
  double deviation;
};

/// Barycentre and standard deviation of a torus measure whose support fits in
/// a coordinate cube of side <= 1/2. The cube is the product of the shortest
/// arcs covering each coordinate projection; inside it the torus metric is
/// Euclidean, so the barycentre minimises z -> W_2(delta_z, mu).
/// Throws std::invalid_argument when no such cube exists.
CenterOfMass center_of_mass_and_deviation(const DiscreteMeasure& mu);

/// Lower corner of the covering cube used above (per coordinate, the start of
/// the shortest covering arc).
std::vector<double> covering_cube_corner(const DiscreteMeasure& mu);

/// The isometry x -> (eps_k x_sigma(k) + u_k)_k that maps the cube
/// prod_k [lo_k, lo_k + 1/2] onto itself.
TorusIsometry cube_isometry(const std::vector<double>& lo, std::vector<int> sigma,
                            std::vector<int> eps);

/// Minimisers of alpha -> W_2(eta, alpha delta_x + (1 - alpha) delta_y) form
/// the interval [eta(strictly closer to x), eta(at least as close to x)].
struct AlphaInterval {
  double lo;
  double hi;
};
AlphaInterval dirac_segment_alpha_interval(const DiscreteMeasure& eta, const Point& x, const Point& y);

/// W_2(eta, alpha delta_x + (1 - alpha) delta_y)^2 through the transport solver.
double segment_cost(const DiscreteMeasure& eta, const Point& x, const Point& y, double alpha);

/// Grid minimisers of segment_cost over alpha = 0, step, 2 step, ..., 1 (values
/// within `flat` of the minimum count as minimisers). Returns [min, max] of them.
AlphaInterval alpha_grid_search(const DiscreteMeasure& eta, const Point& x, const Point& y,
                                double step = 1e-3, double flat = 1e-9);

struct SuiteConfig {
  std::string suite = "all";
  /// When unset each suite cycles through its own panel of manifolds.
  std::optional<Manifold> manifold;
  /// When unset each suite cycles through its own exponents.
  std::optional<double> p;
  int trials = 20;
  std::uint64_t seed = 7;
  /// Overrides of the per-suite tolerances, by name.
  std::map<std::string, double> tolerances;
};

struct SuiteFailure {
  std::uint64_t trial_seed;
  std::string description;
  double observed;
  double expected;
  double tolerance;
};

struct SuiteReport {
  std::string suite;
  int trials = 0;
  std::vector<SuiteFailure> failures;
  /// Summary numbers (worst deviation, smallest margin, ...).
  std::map<std::string, double> metrics;
  bool passed = true;
};

/// Names accepted by run_suite, without "all".
const std::vector<std::string>& suite_names();

/// Runs one suite; "all" runs every suite and returns one report per suite.
/// Unknown names throw std::invalid_argument.
std::vector<SuiteReport> run_suites(const SuiteConfig& cfg);
SuiteReport run_suite(const SuiteConfig& cfg);

std::string format_report_table(const std::vector<SuiteReport>& reports);

}  // namespace wpot
