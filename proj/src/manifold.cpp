#include "wpot/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/QR>

namespace wpot {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_positive_dim(int n) {
  if (n < 1) {
    throw std::invalid_argument("manifold dimension must be >= 1, got " + std::to_string(n));
  }
}

}  // namespace

Manifold Manifold::torus(int n) {
  require_positive_dim(n);
  return {ManifoldKind::Torus, n};
}

Manifold Manifold::sphere(int n) {
  require_positive_dim(n);
  return {ManifoldKind::Sphere, n};
}

double Manifold::diameter() const {
  return kind == ManifoldKind::Torus ? std::sqrt(static_cast<double>(n)) / 2.0
                                     : std::numbers::pi;
}

std::string Manifold::name() const {
  return (kind == ManifoldKind::Torus ? "T^" : "S^") + std::to_string(n);
}

double wrap_unit(double t) {
  double r = t - std::floor(t + 0.5);
  if (r >= 0.5) r -= 1.0;
  if (r < -0.5) r += 1.0;
  return r;
}

double circle_distance(double a, double b) { return std::abs(wrap_unit(a - b)); }

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("torus point needs at least one coordinate");
  for (double& c : coords_) {
    if (!std::isfinite(c)) throw std::invalid_argument("torus coordinate is not finite");
    c = wrap_unit(c);
  }
}

TorusPoint TorusPoint::shifted(int j, double t) const {
  std::vector<double> c = coords_;
  c.at(static_cast<std::size_t>(j)) += t;
  return TorusPoint(std::move(c));
}

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("sphere point needs at least two coordinates");
  double norm2 = 0.0;
  for (double c : coords_) {
    if (!std::isfinite(c)) throw std::invalid_argument("sphere coordinate is not finite");
    norm2 += c * c;
  }
  if (!(norm2 > 0.0)) throw std::invalid_argument("sphere point cannot be the zero vector");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : coords_) c *= inv;
}

Manifold manifold_of(const Point& x) {
  return std::visit(overloaded{[](const TorusPoint& p) { return Manifold::torus(p.dim()); },
                               [](const SpherePoint& p) { return Manifold::sphere(p.dim()); }},
                    x);
}

bool lies_on(const Manifold& m, const Point& x) { return manifold_of(x) == m; }

void require_on(const Manifold& m, const Point& x) {
  if (!lies_on(m, x)) {
    throw std::invalid_argument("point of " + manifold_of(x).name() + " used on " + m.name());
  }
}

std::span<const double> coords_of(const Point& x) {
  return std::visit([](const auto& p) { return p.coords(); }, x);
}

Point make_point(const Manifold& m, std::vector<double> coords) {
  if (static_cast<int>(coords.size()) != m.ambient_dim()) {
    throw std::invalid_argument("expected " + std::to_string(m.ambient_dim()) +
                                " coordinates for a point of " + m.name() + ", got " +
                                std::to_string(coords.size()));
  }
  if (m.kind == ManifoldKind::Torus) return TorusPoint(std::move(coords));
  return SpherePoint(std::move(coords));
}

double distance(const TorusPoint& x, const TorusPoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("torus points of different dimension");
  double sum = 0.0;
  for (int k = 0; k < x.dim(); ++k) {
    const double d = wrap_unit(x[k] - y[k]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double distance(const SpherePoint& x, const SpherePoint& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("sphere points of different dimension");
  // 2 atan2(|x-y|, |x+y|) equals arccos<x,y> on unit vectors and keeps full
  // precision near 0 and pi.
  double minus = 0.0;
  double plus = 0.0;
  for (int k = 0; k <= x.dim(); ++k) {
    minus += (x[k] - y[k]) * (x[k] - y[k]);
    plus += (x[k] + y[k]) * (x[k] + y[k]);
  }
  return 2.0 * std::atan2(std::sqrt(minus), std::sqrt(plus));
}

double distance(const Point& x, const Point& y) {
  return std::visit(
      overloaded{
          [](const TorusPoint& a, const TorusPoint& b) { return distance(a, b); },
          [](const SpherePoint& a, const SpherePoint& b) { return distance(a, b); },
          [](const auto&, const auto&) -> double {
            throw std::invalid_argument("distance between points of different manifolds");
          }},
      x, y);
}

double distance(const Manifold& m, const Point& x, const Point& y) {
  require_on(m, x);
  require_on(m, y);
  return distance(x, y);
}

TorusPoint antipode(const TorusPoint& x) {
  std::vector<double> c(x.coords().begin(), x.coords().end());
  for (double& v : c) v += 0.5;
  return TorusPoint(std::move(c));
}

SpherePoint antipode(const SpherePoint& x) {
  std::vector<double> c(x.coords().begin(), x.coords().end());
  for (double& v : c) v = -v;
  return SpherePoint(std::move(c));
}

Point antipode(const Point& x) {
  return std::visit([](const auto& p) -> Point { return antipode(p); }, x);
}

// ---------------------------------------------------------------------------
// Torus isometries

TorusIsometry::TorusIsometry(std::vector<int> sigma, std::vector<int> eps, TorusPoint shift)
    : sigma_(std::move(sigma)), eps_(std::move(eps)), shift_(std::move(shift)) {
  const auto n = sigma_.size();
  if (eps_.size() != n || static_cast<std::size_t>(shift_.dim()) != n) {
    throw std::invalid_argument("torus isometry: sigma, eps and u must have equal length");
  }
  std::vector<bool> seen(n, false);
  for (int s : sigma_) {
    if (s < 0 || static_cast<std::size_t>(s) >= n || seen[static_cast<std::size_t>(s)]) {
      throw std::invalid_argument("torus isometry: sigma is not a permutation");
    }
    seen[static_cast<std::size_t>(s)] = true;
  }
  for (int e : eps_) {
    if (e != 1 && e != -1) throw std::invalid_argument("torus isometry: eps entries must be +-1");
  }
}

TorusIsometry TorusIsometry::identity(int n) {
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  return {std::move(sigma), std::vector<int>(static_cast<std::size_t>(n), 1),
          TorusPoint(std::vector<double>(static_cast<std::size_t>(n), 0.0))};
}

TorusIsometry TorusIsometry::translation(TorusPoint shift) {
  auto id = identity(shift.dim());
  return {id.sigma_, id.eps_, std::move(shift)};
}

TorusPoint TorusIsometry::operator()(const TorusPoint& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("torus isometry applied to point of wrong dimension");
  std::vector<double> out(static_cast<std::size_t>(dim()));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = eps_[k] * x[static_cast<std::size_t>(sigma_[k])] + shift_[k];
  }
  return TorusPoint(std::move(out));
}

TorusIsometry TorusIsometry::inverse() const {
  // y_k = e_k x_{s(k)} + u_k  =>  x_m = e_k y_k - e_k u_k with k = s^{-1}(m).
  const auto n = sigma_.size();
  std::vector<int> sigma(n);
  std::vector<int> eps(n);
  std::vector<double> u(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto m = static_cast<std::size_t>(sigma_[k]);
    sigma[m] = static_cast<int>(k);
    eps[m] = eps_[k];
    u[m] = -eps_[k] * shift_[k];
  }
  return {std::move(sigma), std::move(eps), TorusPoint(std::move(u))};
}

TorusIsometry TorusIsometry::after(const TorusIsometry& inner) const {
  if (inner.dim() != dim()) throw std::invalid_argument("composing torus isometries of different dimension");
  const auto n = sigma_.size();
  std::vector<int> sigma(n);
  std::vector<int> eps(n);
  std::vector<double> u(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto m = static_cast<std::size_t>(sigma_[k]);
    sigma[k] = inner.sigma_[m];
    eps[k] = eps_[k] * inner.eps_[m];
    u[k] = eps_[k] * inner.shift_[m] + shift_[k];
  }
  return {std::move(sigma), std::move(eps), TorusPoint(std::move(u))};
}

// ---------------------------------------------------------------------------
// Sphere isometries

SphereIsometry::SphereIsometry(Eigen::MatrixXd q) : q_(std::move(q)) {
  if (q_.rows() != q_.cols() || q_.rows() < 2) {
    throw std::invalid_argument("sphere isometry needs a square matrix of size >= 2");
  }
  const Eigen::MatrixXd gram = q_.transpose() * q_;
  const double dev = (gram - Eigen::MatrixXd::Identity(q_.rows(), q_.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= 1e-10)) {
    throw std::invalid_argument("sphere isometry matrix is not orthogonal (|Q^T Q - I| = " +
                                std::to_string(dev) + ")");
  }
}

SphereIsometry SphereIsometry::identity(int n) {
  return SphereIsometry(Eigen::MatrixXd::Identity(n + 1, n + 1));
}

SpherePoint SphereIsometry::operator()(const SpherePoint& x) const {
  if (x.dim() != dim()) throw std::invalid_argument("sphere isometry applied to point of wrong dimension");
  const Eigen::VectorXd y = q_ * x.vec();
  return SpherePoint(std::vector<double>(y.data(), y.data() + y.size()));
}

Manifold manifold_of(const Isometry& psi) {
  return std::visit(
      overloaded{[](const TorusIsometry& t) { return Manifold::torus(t.dim()); },
                 [](const SphereIsometry& s) { return Manifold::sphere(s.dim()); }},
      psi);
}

Point apply_isometry(const Isometry& psi, const Point& x) {
  return std::visit(
      overloaded{[](const TorusIsometry& f, const TorusPoint& p) -> Point { return f(p); },
                 [](const SphereIsometry& f, const SpherePoint& p) -> Point { return f(p); },
                 [](const auto&, const auto&) -> Point {
                   throw std::invalid_argument("isometry and point belong to different manifolds");
                 }},
      psi, x);
}

Isometry inverse(const Isometry& psi) {
  return std::visit([](const auto& f) -> Isometry { return f.inverse(); }, psi);
}

Isometry compose(const Isometry& outer, const Isometry& inner) {
  return std::visit(
      overloaded{
          [](const TorusIsometry& f, const TorusIsometry& g) -> Isometry { return f.after(g); },
          [](const SphereIsometry& f, const SphereIsometry& g) -> Isometry {
            if (f.dim() != g.dim()) throw std::invalid_argument("composing sphere isometries of different dimension");
            return f.after(g);
          },
          [](const auto&, const auto&) -> Isometry {
            throw std::invalid_argument("composing isometries of different manifolds");
          }},
      outer, inner);
}

Isometry random_isometry(const Manifold& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (m.kind == ManifoldKind::Torus) {
    const auto n = static_cast<std::size_t>(m.n);
    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    std::vector<int> eps(n);
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) eps[k] = coin(rng) ? 1 : -1;
    for (std::size_t k = 0; k < n; ++k) u[k] = unif(rng);
    return TorusIsometry(std::move(sigma), std::move(eps), TorusPoint(std::move(u)));
  }
  const int d = m.n + 1;
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) g(r, c) = gauss(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the signs of diag(R) makes the distribution Haar.
  for (int k = 0; k < d; ++k) {
    if (r(k, k) < 0.0) q.col(k) *= -1.0;
  }
  return SphereIsometry(std::move(q));
}

SpherePoint sphere_tangent_direction(const SpherePoint& x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const auto x_vec = x.vec();
  const auto d = x_vec.size();
  for (int attempt = 0; attempt < 64; ++attempt) {
    Eigen::VectorXd z(d);
    for (Eigen::Index k = 0; k < d; ++k) z[k] = gauss(rng);
    // Two Gram-Schmidt passes bring |<x,z>| down to roundoff.
    for (int pass = 0; pass < 2; ++pass) z -= z.dot(x_vec) * x_vec;
    const double norm = z.norm();
    if (norm > 1e-3) {
      z /= norm;
      z -= z.dot(x_vec) * x_vec;
      return SpherePoint(std::vector<double>(z.data(), z.data() + z.size()));
    }
  }
  throw std::runtime_error("sphere_tangent_direction: degenerate draws");
}

BisectorSide bisector_side(const Point& x, const Point& y, const Point& z) {
  if (distance(x, y) <= kTieTolerance) {
    throw std::invalid_argument("bisector_side: x and y coincide");
  }
  const double diff = distance(x, z) - distance(y, z);
  if (diff < -kTieTolerance) return BisectorSide::CloserToX;
  if (diff > kTieTolerance) return BisectorSide::CloserToY;
  return BisectorSide::Equidistant;
}

}  // namespace wpot
