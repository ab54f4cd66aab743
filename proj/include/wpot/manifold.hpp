#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace wpot {

enum class ManifoldKind { Torus, Sphere };

/// Flat torus T^n = R^n / Z^n or round unit sphere S^n in R^{n+1}.
struct Manifold {
  ManifoldKind kind = ManifoldKind::Torus;
  int n = 1;

  static Manifold torus(int n);
  static Manifold sphere(int n);

  /// Number of stored coordinates per point: n on the torus, n+1 on the sphere.
  int ambient_dim() const { return kind == ManifoldKind::Torus ? n : n + 1; }
  /// Largest geodesic distance: sqrt(n)/2 on the torus, pi on the sphere.
  double diameter() const;
  std::string name() const;

  friend bool operator==(const Manifold&, const Manifold&) = default;
};

/// Maps t to its representative in [-1/2, 1/2).
double wrap_unit(double t);

/// Distance on the unit-circumference circle R/Z.
double circle_distance(double a, double b);

/// Point of T^n in canonical coordinates [-1/2, 1/2)^n.
class TorusPoint {
 public:
  explicit TorusPoint(std::vector<double> coords);
  TorusPoint(std::initializer_list<double> coords)
      : TorusPoint(std::vector<double>(coords)) {}

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t k) const { return coords_[k]; }
  std::span<const double> coords() const { return coords_; }

  /// This point moved by t along coordinate axis j.
  TorusPoint shifted(int j, double t) const;

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// Unit vector of R^{n+1}; the constructor renormalises.
class SpherePoint {
 public:
  explicit SpherePoint(std::vector<double> coords);
  SpherePoint(std::initializer_list<double> coords)
      : SpherePoint(std::vector<double>(coords)) {}

  /// Intrinsic dimension n (the point lives in R^{n+1}).
  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  double operator[](std::size_t k) const { return coords_[k]; }
  std::span<const double> coords() const { return coords_; }
  Eigen::Map<const Eigen::VectorXd> vec() const {
    return {coords_.data(), static_cast<Eigen::Index>(coords_.size())};
  }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  std::vector<double> coords_;
};

using Point = std::variant<TorusPoint, SpherePoint>;

/// The manifold a point lives on (torus dimension or sphere dimension).
Manifold manifold_of(const Point& x);
bool lies_on(const Manifold& m, const Point& x);
/// Throws std::invalid_argument unless x lies on m.
void require_on(const Manifold& m, const Point& x);
std::span<const double> coords_of(const Point& x);
/// Builds a point of m from raw coordinates (torus: wrapped, sphere: normalised).
Point make_point(const Manifold& m, std::vector<double> coords);

double distance(const TorusPoint& x, const TorusPoint& y);
double distance(const SpherePoint& x, const SpherePoint& y);
double distance(const Point& x, const Point& y);
double distance(const Manifold& m, const Point& x, const Point& y);

TorusPoint antipode(const TorusPoint& x);
SpherePoint antipode(const SpherePoint& x);
Point antipode(const Point& x);

/// x -> (eps_k * x_{sigma(k)} + u_k)_k. Indices are zero-based.
class TorusIsometry {
 public:
  TorusIsometry(std::vector<int> sigma, std::vector<int> eps, TorusPoint shift);
  static TorusIsometry identity(int n);
  static TorusIsometry translation(TorusPoint shift);

  int dim() const { return static_cast<int>(sigma_.size()); }
  const std::vector<int>& sigma() const { return sigma_; }
  const std::vector<int>& eps() const { return eps_; }
  const TorusPoint& shift() const { return shift_; }

  TorusPoint operator()(const TorusPoint& x) const;
  TorusIsometry inverse() const;
  /// (*this) after inner.
  TorusIsometry after(const TorusIsometry& inner) const;

 private:
  std::vector<int> sigma_;
  std::vector<int> eps_;
  TorusPoint shift_;
};

/// Restriction of an orthogonal map of R^{n+1}.
class SphereIsometry {
 public:
  explicit SphereIsometry(Eigen::MatrixXd q);
  static SphereIsometry identity(int n);

  int dim() const { return static_cast<int>(q_.rows()) - 1; }
  const Eigen::MatrixXd& matrix() const { return q_; }

  SpherePoint operator()(const SpherePoint& x) const;
  SphereIsometry inverse() const { return SphereIsometry(q_.transpose()); }
  SphereIsometry after(const SphereIsometry& inner) const {
    return SphereIsometry(q_ * inner.q_);
  }

 private:
  Eigen::MatrixXd q_;
};

using Isometry = std::variant<TorusIsometry, SphereIsometry>;

Manifold manifold_of(const Isometry& psi);
Point apply_isometry(const Isometry& psi, const Point& x);
Isometry inverse(const Isometry& psi);
/// outer after inner.
Isometry compose(const Isometry& outer, const Isometry& inner);

/// Deterministic per seed. Torus: uniform permutation, signs and shift.
/// Sphere: Haar-distributed orthogonal matrix (QR of a Gaussian matrix).
Isometry random_isometry(const Manifold& m, std::uint64_t seed);

/// Unit vector orthogonal to x, deterministic per seed.
SpherePoint sphere_tangent_direction(const SpherePoint& x, std::uint64_t seed);

enum class BisectorSide { CloserToX, Equidistant, CloserToY };

inline constexpr double kTieTolerance = 1e-12;

/// Which side of the bisector B(x, y) the point z lies on.
BisectorSide bisector_side(const Point& x, const Point& y, const Point& z);

}  // namespace wpot
