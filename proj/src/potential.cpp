#include "wpot/potential.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "wpot/errors.hpp"
#include "wpot/transport.hpp"

namespace wpot {

namespace {

constexpr double kPi = std::numbers::pi;

double pow_p(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

long positive_mod(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

// Spherical angles of a point of S^1 or S^2.
double azimuth(const SpherePoint& x) {
  double phi = std::atan2(x[1], x[0]);
  if (phi < 0.0) phi += 2.0 * kPi;
  return phi;
}

double polar(const SpherePoint& x) { return std::atan2(std::hypot(x[0], x[1]), x[2]); }

}  // namespace

double potential_eval(const DiscreteMeasure& mu, double p, const Point& x) {
  require_valid_exponent(p);
  require_on(mu.manifold(), x);
  double sum = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) sum += mu.weight(k) * pow_p(distance(x, mu.point(k)), p);
  return sum;
}

// ---------------------------------------------------------------------------
// SampledPotential

std::size_t SampledPotential::node_count(const Manifold& m, int resolution) {
  if (m.kind == ManifoldKind::Torus) {
    std::size_t count = 1;
    for (int k = 0; k < m.n; ++k) {
      count *= static_cast<std::size_t>(resolution);
      if (count > (std::size_t{1} << 28)) throw ResourceError("potential grid is too large");
    }
    return count;
  }
  if (m.n == 1) return static_cast<std::size_t>(resolution);
  if (m.n == 2) return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  throw UnsupportedDimension("sampled sphere potentials are limited to S^1 and S^2");
}

SampledPotential::SampledPotential(Manifold m, int resolution, double p, std::vector<double> values)
    : manifold_(m), resolution_(resolution), p_(p), values_(std::move(values)) {
  require_valid_exponent(p);
  if (resolution_ < 4 || resolution_ % 2 != 0) {
    throw std::invalid_argument("grid resolution must be even and at least 4");
  }
  if (values_.size() != node_count(manifold_, resolution_)) {
    throw std::invalid_argument("grid of " + m.name() + " at resolution " + std::to_string(resolution_) +
                                " needs " + std::to_string(node_count(manifold_, resolution_)) +
                                " values, got " + std::to_string(values_.size()));
  }
}

Point SampledPotential::node(std::size_t index) const {
  const double res = resolution_;
  if (manifold_.kind == ManifoldKind::Torus) {
    std::vector<double> c(static_cast<std::size_t>(manifold_.n));
    for (int k = manifold_.n - 1; k >= 0; --k) {
      c[static_cast<std::size_t>(k)] = -0.5 + static_cast<double>(index % resolution_) / res;
      index /= static_cast<std::size_t>(resolution_);
    }
    return TorusPoint(std::move(c));
  }
  if (manifold_.n == 1) {
    const double phi = 2.0 * kPi * static_cast<double>(index) / res;
    return SpherePoint({std::cos(phi), std::sin(phi)});
  }
  const double theta = kPi * (static_cast<double>(index / resolution_) + 0.5) / res;
  const double phi = 2.0 * kPi * static_cast<double>(index % resolution_) / res;
  return SpherePoint({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
}

long SampledPotential::node_index(const Point& x) const {
  if (!lies_on(manifold_, x)) return -1;
  const long res = resolution_;
  long index = 0;
  if (manifold_.kind == ManifoldKind::Torus) {
    const auto& t = std::get<TorusPoint>(x);
    for (int k = 0; k < manifold_.n; ++k) {
      index = index * res + positive_mod(std::lround((t[k] + 0.5) * resolution_), res);
    }
  } else {
    const auto& s = std::get<SpherePoint>(x);
    const long b = positive_mod(std::lround(azimuth(s) * resolution_ / (2.0 * kPi)), res);
    if (manifold_.n == 1) {
      index = b;
    } else {
      const long a = std::lround(polar(s) * resolution_ / kPi - 0.5);
      if (a < 0 || a >= res) return -1;
      index = a * res + b;
    }
  }
  if (distance(node(static_cast<std::size_t>(index)), x) > 1e-9) return -1;
  return index;
}

double SampledPotential::line_spacing() const {
  if (manifold_.kind == ManifoldKind::Torus) return 1.0 / resolution_;
  return (manifold_.n == 1 ? 2.0 * kPi : kPi) / resolution_;
}

double SampledPotential::interpolate_nodes(const Point& x,
                                           const std::function<double(std::size_t)>& value) const {
  require_on(manifold_, x);
  const long res = resolution_;
  if (manifold_.kind == ManifoldKind::Torus) {
    const auto& t = std::get<TorusPoint>(x);
    const int n = manifold_.n;
    std::vector<long> base(static_cast<std::size_t>(n));
    std::vector<double> frac(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double u = (t[k] + 0.5) * resolution_;
      const double f = std::floor(u);
      base[static_cast<std::size_t>(k)] = static_cast<long>(f);
      frac[static_cast<std::size_t>(k)] = u - f;
    }
    double sum = 0.0;
    for (unsigned corner = 0; corner < (1u << n); ++corner) {
      double weight = 1.0;
      std::size_t index = 0;
      for (int k = 0; k < n; ++k) {
        const bool up = (corner >> k) & 1u;
        weight *= up ? frac[static_cast<std::size_t>(k)] : 1.0 - frac[static_cast<std::size_t>(k)];
        index = index * static_cast<std::size_t>(res) +
                static_cast<std::size_t>(positive_mod(base[static_cast<std::size_t>(k)] + (up ? 1 : 0), res));
      }
      if (weight != 0.0) sum += weight * value(index);
    }
    return sum;
  }

  const auto& s = std::get<SpherePoint>(x);
  const double u = azimuth(s) * resolution_ / (2.0 * kPi);
  const double fb = std::floor(u);
  const double wb = u - fb;
  const long b0 = positive_mod(static_cast<long>(fb), res);
  const long b1 = positive_mod(b0 + 1, res);
  if (manifold_.n == 1) {
    return (1.0 - wb) * value(static_cast<std::size_t>(b0)) + wb * value(static_cast<std::size_t>(b1));
  }
  const double v = polar(s) * resolution_ / kPi - 0.5;
  const double fa = std::floor(v);
  const double wa = v - fa;
  const long a0 = static_cast<long>(fa);
  // Rows -1 and res are the reflections of rows 0 and res-1 across the poles.
  auto at = [&](long a, long b) {
    if (a < 0) {
      a = -1 - a;
      b = positive_mod(b + res / 2, res);
    } else if (a >= res) {
      a = 2 * res - 1 - a;
      b = positive_mod(b + res / 2, res);
    }
    return value(static_cast<std::size_t>(a * res + b));
  };
  return (1.0 - wa) * ((1.0 - wb) * at(a0, b0) + wb * at(a0, b1)) +
         wa * ((1.0 - wb) * at(a0 + 1, b0) + wb * at(a0 + 1, b1));
}

double SampledPotential::operator()(const Point& x) const {
  return interpolate_nodes(x, [this](std::size_t i) { return values_[i]; });
}

double SampledPotential::interpolate(const std::function<double(const Point&)>& f, const Point& x) const {
  return interpolate_nodes(x, [&](std::size_t i) { return f(node(i)); });
}

// ---------------------------------------------------------------------------
// PotentialOracle

PotentialOracle PotentialOracle::closed_form(DiscreteMeasure mu, double p) {
  require_valid_exponent(p);
  return PotentialOracle(ClosedForm{std::move(mu), p});
}

PotentialOracle PotentialOracle::sampled(SampledPotential grid) {
  return PotentialOracle(std::move(grid));
}

const Manifold& PotentialOracle::manifold() const {
  if (const auto* c = std::get_if<ClosedForm>(&impl_)) return c->mu.manifold();
  return std::get<SampledPotential>(impl_).manifold();
}

double PotentialOracle::p() const {
  if (const auto* c = std::get_if<ClosedForm>(&impl_)) return c->p;
  return std::get<SampledPotential>(impl_).p();
}

double PotentialOracle::operator()(const Point& x) const {
  if (const auto* c = std::get_if<ClosedForm>(&impl_)) return potential_eval(c->mu, c->p, x);
  return std::get<SampledPotential>(impl_)(x);
}

const DiscreteMeasure* PotentialOracle::measure() const {
  const auto* c = std::get_if<ClosedForm>(&impl_);
  return c != nullptr ? &c->mu : nullptr;
}

const SampledPotential* PotentialOracle::grid() const { return std::get_if<SampledPotential>(&impl_); }

SampledPotential sample_potential(const PotentialOracle& t, int resolution) {
  const Manifold& m = t.manifold();
  const std::size_t count = SampledPotential::node_count(m, resolution);
  // A throwaway grid gives access to the node layout.
  SampledPotential layout(m, resolution, t.p(), std::vector<double>(count, 0.0));
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = t(layout.node(i));
  return SampledPotential(m, resolution, t.p(), std::move(values));
}

// ---------------------------------------------------------------------------
// Second differences and limits

namespace {

void check_direction(const Point& x, const Direction& dir) {
  if (const auto* t = std::get_if<TorusPoint>(&x)) {
    const int* axis = std::get_if<int>(&dir);
    if (axis == nullptr) throw std::invalid_argument("torus limits need a coordinate axis");
    if (*axis < 0 || *axis >= t->dim()) {
      throw std::invalid_argument("axis " + std::to_string(*axis) + " out of range");
    }
    return;
  }
  const auto& s = std::get<SpherePoint>(x);
  const auto* z = std::get_if<SpherePoint>(&dir);
  if (z == nullptr) throw std::invalid_argument("sphere limits need a tangent direction");
  if (z->dim() != s.dim()) throw std::invalid_argument("tangent direction of wrong dimension");
  if (std::abs(s.vec().dot(z->vec())) > 1e-8) {
    throw std::invalid_argument("direction is not tangent: |<x, z>| > 1e-8");
  }
}

}  // namespace

Point displace(const Point& x, const Direction& dir, double s) {
  check_direction(x, dir);
  if (const auto* t = std::get_if<TorusPoint>(&x)) return t->shifted(std::get<int>(dir), s);
  const auto& p = std::get<SpherePoint>(x);
  const auto& z = std::get<SpherePoint>(dir);
  std::vector<double> c(p.coords().size());
  const double cs = std::cos(s);
  const double sn = std::sin(s);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = cs * p[k] + sn * z[k];
  return SpherePoint(std::move(c));
}

double second_difference_ratio(const PotentialOracle& t, const Point& x, const Direction& dir,
                               double s) {
  if (!(s > 0.0)) throw std::invalid_argument("second_difference_ratio: step must be positive");
  require_on(t.manifold(), x);
  check_direction(x, dir);
  return (t(displace(x, dir, s)) - 2.0 * t(x) + t(displace(x, dir, -s))) / s;
}

double torus_limit_analytic(const DiscreteMeasure& mu, double p, const TorusPoint& x, int axis) {
  require_valid_exponent(p);
  const Manifold& m = mu.manifold();
  require_on(m, x);
  if (m.n < 2) {
    throw UnsupportedDimension("torus_limit_analytic needs n >= 2; use circle_limit_analytic on T^1");
  }
  if (axis < 0 || axis >= m.n) throw std::invalid_argument("axis out of range");

  const double plane = x[static_cast<std::size_t>(axis)] + 0.5;
  double atom = 0.0;
  double hyperplane = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const auto& y = std::get<TorusPoint>(mu.point(k));
    const double w = mu.weight(k);
    if (distance(x, y) <= kPositionTolerance) atom += w;
    if (circle_distance(y[static_cast<std::size_t>(axis)], plane) > kPositionTolerance) continue;
    if (p == 2.0) {
      hyperplane += w;
      continue;
    }
    double rho2 = 0.0;  // rho_{n-1}(x without axis, y without axis)^2
    for (int k2 = 0; k2 < m.n; ++k2) {
      if (k2 == axis) continue;
      const double d = wrap_unit(x[static_cast<std::size_t>(k2)] - y[static_cast<std::size_t>(k2)]);
      rho2 += d * d;
    }
    hyperplane += w * std::pow(0.25 + rho2, (p - 2.0) / 2.0);
  }
  if (p == 1.0) return 2.0 * atom - hyperplane;
  if (p == 2.0) return -2.0 * hyperplane;
  return -p * hyperplane;
}

double sphere_limit_analytic(const DiscreteMeasure& mu, double p, const SpherePoint& x) {
  require_valid_exponent(p);
  require_on(mu.manifold(), x);
  const double at_x = mu.mass_at(x);
  const double at_antipode = mu.mass_at(antipode(x));
  if (p == 1.0) return 2.0 * at_x - 2.0 * at_antipode;
  return -2.0 * p * std::pow(kPi, p - 1.0) * at_antipode;
}

double circle_limit_analytic(const DiscreteMeasure& mu, double p, const TorusPoint& x) {
  require_valid_exponent(p);
  if (mu.manifold() != Manifold::torus(1)) throw std::invalid_argument("circle_limit_analytic needs a measure on T^1");
  require_on(mu.manifold(), x);
  const double at_x = mu.mass_at(x);
  const double at_antipode = mu.mass_at(antipode(x));
  if (p == 1.0) return 2.0 * at_x - 2.0 * at_antipode;
  return -2.0 * p * std::pow(0.5, p - 1.0) * at_antipode;
}

double analytic_limit(const DiscreteMeasure& mu, double p, const Point& x, const Direction& dir) {
  check_direction(x, dir);
  if (const auto* t = std::get_if<TorusPoint>(&x)) {
    if (t->dim() == 1) return circle_limit_analytic(mu, p, *t);
    return torus_limit_analytic(mu, p, *t, std::get<int>(dir));
  }
  return sphere_limit_analytic(mu, p, std::get<SpherePoint>(x));
}

double extrapolate_to_zero(std::span<const double> s, std::span<const double> f) {
  if (s.size() != f.size() || s.empty()) throw std::invalid_argument("extrapolate_to_zero: bad table");
  std::vector<double> table(f.begin(), f.end());
  const std::size_t n = s.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double si = s[i];
      const double sj = s[i + level];
      table[i] = (sj * table[i] - si * table[i + 1]) / (sj - si);
    }
  }
  return table[0];
}

double richardson_limit(const PotentialOracle& t, const Point& x, const Direction& dir) {
  std::array<double, kLimitSchedule.size()> ratios{};
  for (std::size_t i = 0; i < kLimitSchedule.size(); ++i) {
    ratios[i] = second_difference_ratio(t, x, dir, kLimitSchedule[i]);
  }
  return extrapolate_to_zero(kLimitSchedule, ratios);
}

SpherePoint grid_tangent(const SpherePoint& x) {
  if (x.dim() == 1) return SpherePoint({-x[1], x[0]});
  if (x.dim() != 2) throw UnsupportedDimension("grid_tangent is defined on S^1 and S^2");
  const double theta = polar(x);
  const double phi = azimuth(x);
  return SpherePoint({std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)});
}

namespace {

// (F(x+2s) - F(x+s) - F(x-s) + F(x-2s)) / s along dir.
template <class F>
double outer_jump(const F& f, const Point& x, const Direction& dir, double s) {
  return (f(displace(x, dir, 2.0 * s)) - f(displace(x, dir, s)) - f(displace(x, dir, -s)) +
          f(displace(x, dir, -2.0 * s))) /
         s;
}

double grid_spacing(const PotentialOracle& t) {
  const SampledPotential* grid = t.grid();
  return grid != nullptr ? grid->line_spacing() : kLimitSchedule.back();
}

}  // namespace

double grid_limit(const PotentialOracle& t, const Point& x, const Direction& dir) {
  require_on(t.manifold(), x);
  check_direction(x, dir);
  const double h = grid_spacing(t);
  // Integer multiples of the spacing keep every sample at the same offset
  // inside its cell, so the interpolation errors cancel to second order.
  std::array<double, 4> steps{};
  std::array<double, 4> jumps{};
  for (std::size_t i = 0; i < steps.size(); ++i) {
    steps[i] = static_cast<double>(steps.size() - i) * h;
    jumps[i] = outer_jump(t, x, dir, steps[i]);
  }
  return extrapolate_to_zero(steps, jumps);
}

double grid_site_limit(const PotentialOracle& t, const Point& x, const Direction& dir, const Point& site) {
  require_on(t.manifold(), x);
  require_on(t.manifold(), site);
  check_direction(x, dir);
  const SampledPotential* grid = t.grid();
  if (grid == nullptr) return grid_limit(t, x, dir);

  const DiscreteMeasure dirac = DiscreteMeasure::dirac(site);
  const double p = t.p();
  auto kernel = [&](const Point& y) {
    return grid->interpolate([&](const Point& z) { return potential_eval(dirac, p, z); }, y);
  };

  const double h = grid->line_spacing();
  constexpr int kSteps = 8;
  Eigen::MatrixXd a(kSteps, 4);
  Eigen::VectorXd b(kSteps);
  for (int k = 1; k <= kSteps; ++k) {
    const double s = k * h;
    a(k - 1, 0) = outer_jump(kernel, x, dir, s);
    a(k - 1, 1) = s;
    a(k - 1, 2) = s * s;
    a(k - 1, 3) = s * s * s;
    b(k - 1) = outer_jump(t, x, dir, s);
  }
  const double weight = a.colPivHouseholderQr().solve(b)(0);
  return weight * analytic_limit(dirac, p, x, dir);
}

}  // namespace wpot
