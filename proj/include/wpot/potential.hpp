#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "wpot/manifold.hpp"
#include "wpot/measure.hpp"

namespace wpot {

/// T_mu^p(x) = sum_k w_k d(x, x^k)^p, which equals W_p(mu, delta_x)^p.
double potential_eval(const DiscreteMeasure& mu, double p, const Point& x);

/// Potential values on a regular grid, evaluated by interpolation.
///
/// Torus: `resolution` nodes per axis at -1/2 + i/resolution, periodic
/// multilinear interpolation; node index is row-major with axis 0 slowest.
/// Sphere S^1: nodes at angle 2 pi b / resolution. Sphere S^2: latitude-longitude
/// nodes theta_a = pi (a + 1/2) / resolution, phi_b = 2 pi b / resolution, index
/// a * resolution + b; bilinear in (theta, phi), reflected across the poles.
class SampledPotential {
 public:
  SampledPotential(Manifold m, int resolution, double p, std::vector<double> values);

  const Manifold& manifold() const { return manifold_; }
  int resolution() const { return resolution_; }
  double p() const { return p_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t node_count() const { return values_.size(); }

  /// Coordinates of grid node `index`.
  Point node(std::size_t index) const;
  /// Grid index of the node at `x`, or -1 if x is not within 1e-9 of a node.
  long node_index(const Point& x) const;
  /// Node spacing along the lines used for limits: 1/resolution on the torus,
  /// 2 pi / resolution on S^1, pi / resolution along S^2 meridians.
  double line_spacing() const;

  double operator()(const Point& x) const;
  /// Value at x of the grid interpolant of f (f evaluated at the stencil nodes).
  double interpolate(const std::function<double(const Point&)>& f, const Point& x) const;

  static std::size_t node_count(const Manifold& m, int resolution);

 private:
  Manifold manifold_;
  int resolution_;
  double p_;
  std::vector<double> values_;

  double interpolate_nodes(const Point& x, const std::function<double(std::size_t)>& value) const;
};

/// A queryable potential x -> T_mu^p(x): either the closed form of a known
/// measure or an interpolated grid.
class PotentialOracle {
 public:
  static PotentialOracle closed_form(DiscreteMeasure mu, double p);
  static PotentialOracle sampled(SampledPotential grid);

  const Manifold& manifold() const;
  double p() const;
  double operator()(const Point& x) const;

  bool is_closed_form() const { return std::holds_alternative<ClosedForm>(impl_); }
  /// The underlying measure for closed-form oracles, nullptr otherwise.
  const DiscreteMeasure* measure() const;
  const SampledPotential* grid() const;

 private:
  struct ClosedForm {
    DiscreteMeasure mu;
    double p;
  };
  explicit PotentialOracle(std::variant<ClosedForm, SampledPotential> impl)
      : impl_(std::move(impl)) {}
  std::variant<ClosedForm, SampledPotential> impl_;
};

/// Samples T on the grid of the given resolution.
SampledPotential sample_potential(const PotentialOracle& t, int resolution);

/// Torus: coordinate axis (zero-based). Sphere: unit tangent z with <x, z> = 0.
using Direction = std::variant<int, SpherePoint>;

/// The point reached from x after moving distance s along dir: x + s e^j on
/// the torus, cos(s) x + sin(s) z on the sphere (s may be negative).
Point displace(const Point& x, const Direction& dir, double s);

/// (T(x+s) - 2T(x) + T(x-s)) / s with the manifold displacement above.
double second_difference_ratio(const PotentialOracle& t, const Point& x, const Direction& dir,
                               double s);

/// lim_{s->0+} of the second-difference ratio on T^n, n >= 2, along axis j:
///   p = 1:      2 mu({x}) - sum_{y in H} w_y (1/4 + rho_{n-1}(x_j', y_j')^2)^{-1/2}
///   p != 1, 2:  -p sum_{y in H} w_y (1/4 + rho_{n-1}^2)^{(p-2)/2}
///   p = 2:      -2 mu(H)
/// where H = H(x + e^j/2, j) is the antipodal hyperplane. Throws
/// UnsupportedDimension for n = 1 (see circle_limit_analytic).
double torus_limit_analytic(const DiscreteMeasure& mu, double p, const TorusPoint& x, int axis);

/// The same limit on S^n along any tangent: 2 mu({x}) - 2 mu({-x}) for p = 1,
/// -2 p pi^{p-1} mu({-x}) for p > 1.
double sphere_limit_analytic(const DiscreteMeasure& mu, double p, const SpherePoint& x);

/// The limit on the unit-circumference circle T^1, obtained from the S^1
/// formula by rescaling angles by 2 pi: 2 mu({x}) - 2 mu({x + 1/2}) for p = 1,
/// -2 p (1/2)^{p-1} mu({x + 1/2}) for p > 1.
double circle_limit_analytic(const DiscreteMeasure& mu, double p, const TorusPoint& x);

/// Analytic limit for whichever manifold mu lives on (dir is only checked).
double analytic_limit(const DiscreteMeasure& mu, double p, const Point& x, const Direction& dir);

/// Step schedule for numeric limits of closed-form potentials.
inline constexpr std::array<double, 5> kLimitSchedule{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};

/// Value at 0 of the interpolating polynomial through (s_i, f_i) (Neville).
double extrapolate_to_zero(std::span<const double> s, std::span<const double> f);

/// Second-difference ratios over kLimitSchedule, extrapolated to s = 0.
double richardson_limit(const PotentialOracle& t, const Point& x, const Direction& dir);

/// Limit for grid potentials. The ratio (T(x+2s) - T(x+s) - T(x-s) + T(x-2s)) / s
/// has the same limit but never samples the grid cell that contains the kink
/// at x; it is evaluated at s = h, 2h, 3h, 4h and extrapolated to s = 0.
double grid_limit(const PotentialOracle& t, const Point& x, const Direction& dir);

/// The limit at x for a grid potential whose singularity at x is caused by the
/// mass at `site` alone. Interpolation smears that singularity over a few
/// cells; the smear is the same as for the grid interpolant of the Dirac
/// potential of `site`, so the ratios above at s = h..8h are fitted as
/// w * (same ratios of that interpolant) + cubic in s, and w times the Dirac's
/// limit is returned. Closed-form oracles fall back to grid_limit.
double grid_site_limit(const PotentialOracle& t, const Point& x, const Direction& dir, const Point& site);

/// Direction for grid limits on the sphere: the meridian through x on S^2
/// (grid aligned), the positive tangent on S^1.
SpherePoint grid_tangent(const SpherePoint& x);

}  // namespace wpot
