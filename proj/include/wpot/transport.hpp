#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "wpot/measure.hpp"

namespace wpot {

/// Joint mass matrix over two supports (row-major, rows = source atoms).
struct Coupling {
  int rows = 0;
  int cols = 0;
  std::vector<double> mass;

  Coupling() = default;
  Coupling(int r, int c) : rows(r), cols(c), mass(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return mass[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return mass[static_cast<std::size_t>(i) * cols + j]; }

  /// Independent coupling mu (x) nu.
  static Coupling product(std::span<const double> a, std::span<const double> b);
};

struct TransportResult {
  double distance = 0.0;  ///< W_p = cost^(1/p)
  double cost = 0.0;      ///< optimal value of the transport LP
  Coupling coupling;
  double p = 1.0;
};

/// Dense matrix of d(x_i, y_j)^p.
Eigen::MatrixXd cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// sum_ij pi_ij d(x_i, y_j)^p. Throws InvalidCoupling when the marginals of pi
/// differ from the weights by more than 1e-8 or pi has negative entries.
double coupling_cost(const Coupling& pi, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     double p);

/// Exact optimal transport between two discrete measures: transportation
/// simplex on the dense cost matrix. Dantzig pricing, switching to Bland's rule
/// on runs of degenerate pivots; ties always resolve to the lowest cell index.
TransportResult solve_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

/// The transport LP on raw data: supplies a, demands b, costs c (a.size() x b.size()).
/// Returns the optimal coupling; its cost is sum(c .* pi).
Coupling solve_transport_lp(std::span<const double> a, std::span<const double> b,
                            const Eigen::MatrixXd& c);

/// Exhaustive optimum for tiny instances: permutation couplings when both
/// measures have N = M <= 6 equal weights, otherwise enumeration of all basic
/// feasible solutions when N*M <= 12. Larger inputs raise ResourceError.
TransportResult brute_force_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      double p);

void require_valid_exponent(double p);

}  // namespace wpot
