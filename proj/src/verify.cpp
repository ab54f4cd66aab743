#include "wpot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "wpot/errors.hpp"
#include "wpot/fourier.hpp"
#include "wpot/potential.hpp"
#include "wpot/recovery.hpp"
#include "wpot/sampling.hpp"
#include "wpot/transport.hpp"

namespace wpot {

// ---------------------------------------------------------------------------
// Centre of mass

namespace {

// Start of the shortest arc covering the given circle coordinates, and its length.
std::pair<double, double> covering_arc(std::vector<double> c) {
  for (double& v : c) v = wrap_unit(v);
  std::sort(c.begin(), c.end());
  double gap = c.front() + 1.0 - c.back();
  double start = c.front();
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i] - c[i - 1] > gap) {
      gap = c[i] - c[i - 1];
      start = c[i];
    }
  }
  return {start, 1.0 - gap};
}

}  // namespace

std::vector<double> covering_cube_corner(const DiscreteMeasure& mu) {
  const Manifold& m = mu.manifold();
  if (m.kind != ManifoldKind::Torus) throw std::invalid_argument("centre of mass is defined on the torus only");
  std::vector<double> lo;
  for (int j = 0; j < m.n; ++j) {
    std::vector<double> c;
    for (const Point& x : mu.support()) c.push_back(std::get<TorusPoint>(x)[static_cast<std::size_t>(j)]);
    const auto [start, length] = covering_arc(c);
    if (length > 0.5 + 1e-12) {
      throw std::invalid_argument("support does not fit in a cube of side 1/2 (axis " + std::to_string(j) +
                                  " needs " + std::to_string(length) + ")");
    }
    lo.push_back(start);
  }
  return lo;
}

CenterOfMass center_of_mass_and_deviation(const DiscreteMeasure& mu) {
  const std::vector<double> lo = covering_cube_corner(mu);
  const std::size_t n = lo.size();
  std::vector<std::vector<double>> unwrapped;
  std::vector<double> m(n, 0.0);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const auto& x = std::get<TorusPoint>(mu.point(k));
    std::vector<double> u(n);
    for (std::size_t j = 0; j < n; ++j) {
      double d = x[j] - lo[j];
      d -= std::floor(d);
      if (d > 0.5 + 1e-12) d -= 1.0;  // cannot happen for a covering arc; guards rounding at the seam
      u[j] = lo[j] + d;
      m[j] += mu.weight(k) * u[j];
    }
    unwrapped.push_back(std::move(u));
  }
  double var = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) d2 += (unwrapped[k][j] - m[j]) * (unwrapped[k][j] - m[j]);
    var += mu.weight(k) * d2;
  }
  return {TorusPoint(m), std::sqrt(var)};
}

TorusIsometry cube_isometry(const std::vector<double>& lo, std::vector<int> sigma, std::vector<int> eps) {
  std::vector<double> u(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) {
    const double from = lo[static_cast<std::size_t>(sigma.at(k))];
    u[k] = eps.at(k) == 1 ? lo[k] - from : lo[k] + from + 0.5;
  }
  return TorusIsometry(std::move(sigma), std::move(eps), TorusPoint(std::move(u)));
}

// ---------------------------------------------------------------------------
// Dirac segments

AlphaInterval dirac_segment_alpha_interval(const DiscreteMeasure& eta, const Point& x, const Point& y) {
  require_on(eta.manifold(), x);
  require_on(eta.manifold(), y);
  if (distance(x, y) <= kTieTolerance) throw std::invalid_argument("dirac_segment_alpha_interval: x = y");
  double strict = 0.0;
  double weak = 0.0;
  for (std::size_t k = 0; k < eta.size(); ++k) {
    switch (bisector_side(x, y, eta.point(k))) {
      case BisectorSide::CloserToX:
        strict += eta.weight(k);
        weak += eta.weight(k);
        break;
      case BisectorSide::Equidistant:
        weak += eta.weight(k);
        break;
      case BisectorSide::CloserToY:
        break;
    }
  }
  return {std::min(strict, 1.0), std::min(weak, 1.0)};
}

double segment_cost(const DiscreteMeasure& eta, const Point& x, const Point& y, double alpha) {
  const Manifold& m = eta.manifold();
  if (alpha <= 0.0) return solve_transport(eta, DiscreteMeasure::dirac(y), 2.0).cost;
  if (alpha >= 1.0) return solve_transport(eta, DiscreteMeasure::dirac(x), 2.0).cost;
  const DiscreteMeasure target(m, {x, y}, {alpha, 1.0 - alpha});
  return solve_transport(eta, target, 2.0).cost;
}

AlphaInterval alpha_grid_search(const DiscreteMeasure& eta, const Point& x, const Point& y, double step,
                                double flat) {
  const int count = static_cast<int>(std::lround(1.0 / step));
  std::vector<double> cost(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i <= count; ++i) cost[static_cast<std::size_t>(i)] = segment_cost(eta, x, y, i * step);
  const double best = *std::min_element(cost.begin(), cost.end());
  AlphaInterval r{2.0, -1.0};
  for (int i = 0; i <= count; ++i) {
    if (cost[static_cast<std::size_t>(i)] <= best + flat) {
      r.lo = std::min(r.lo, i * step);
      r.hi = std::max(r.hi, i * step);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Suites

namespace {

class Recorder {
 public:
  Recorder(std::string name, const SuiteConfig& cfg) : cfg_(cfg) { report_.suite = std::move(name); }

  double tol(const std::string& key, double fallback) const {
    auto it = cfg_.tolerances.find(key);
    if (it == cfg_.tolerances.end()) return fallback;
    if (!(it->second > 0.0)) throw std::invalid_argument("tolerance " + key + " must be positive");
    return it->second;
  }

  // Records a failure unless observed <= tolerance.
  void at_most(std::uint64_t seed, const std::string& what, double observed, double tolerance) {
    worst(what, observed);
    if (!(observed <= tolerance)) report_.failures.push_back({seed, what, observed, 0.0, tolerance});
  }

  // Records a failure unless observed > bound.
  void above(std::uint64_t seed, const std::string& what, double observed, double bound) {
    least(what, observed);
    if (!(observed > bound)) report_.failures.push_back({seed, what, observed, bound, 0.0});
  }

  void fail(std::uint64_t seed, const std::string& what, double observed, double expected, double tolerance) {
    report_.failures.push_back({seed, what, observed, expected, tolerance});
  }

  void worst(const std::string& key, double v) {
    auto [it, fresh] = report_.metrics.emplace("max " + key, v);
    if (!fresh) it->second = std::max(it->second, v);
  }

  void least(const std::string& key, double v) {
    auto [it, fresh] = report_.metrics.emplace("min " + key, v);
    if (!fresh) it->second = std::min(it->second, v);
  }

  SuiteReport finish(int trials) {
    report_.trials = trials;
    report_.passed = report_.failures.empty();
    return std::move(report_);
  }

 private:
  const SuiteConfig& cfg_;
  SuiteReport report_;
};

const std::vector<double> kSuiteExponents{1.0, 1.5, 2.0, 2.5};

std::vector<Manifold> panel(const SuiteConfig& cfg, std::vector<Manifold> fallback) {
  if (cfg.manifold) return {*cfg.manifold};
  return fallback;
}

std::vector<double> exponents(const SuiteConfig& cfg, std::vector<double> fallback = kSuiteExponents) {
  if (cfg.p) {
    require_valid_exponent(*cfg.p);
    return {*cfg.p};
  }
  return fallback;
}

std::string describe(const Manifold& m, double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s p=%g", m.name().c_str(), p);
  return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Random measure whose atoms stay away from each other's singular sets
/// (antipodes, and on the torus the coordinate hyperplanes and their antipodal
/// hyperplanes), as sampled recovery needs. `margin` is a fraction of the
/// length of a closed geodesic (1 on the torus, 2 pi on the sphere).
DiscreteMeasure separated_measure(const Manifold& m, std::mt19937_64& rng, double margin) {
  RandomMeasureOptions opts;
  opts.predicates = all_predicates(m);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    DiscreteMeasure mu = random_measure(m, rng, opts);
    bool ok = true;
    for (std::size_t k = 0; k < mu.size() && ok; ++k) {
      for (std::size_t l = k + 1; l < mu.size() && ok; ++l) {
        if (m.kind == ManifoldKind::Torus) {
          const auto& a = std::get<TorusPoint>(mu.point(k));
          const auto& b = std::get<TorusPoint>(mu.point(l));
          for (int j = 0; j < m.n; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const double d = circle_distance(a[jj], b[jj]);
            ok = ok && d >= margin && 0.5 - d >= margin;
          }
        } else {
          const double d = distance(mu.point(k), mu.point(l));
          const double angle = 2.0 * std::numbers::pi * margin;
          ok = d >= angle && std::numbers::pi - d >= angle;
        }
      }
    }
    if (ok) return mu;
  }
  throw ResourceError("could not draw a well separated measure");
}

std::vector<double> expected_masses(const DiscreteMeasure& mu, const std::vector<Point>& sites) {
  std::vector<double> w;
  for (const Point& x : sites) w.push_back(mu.mass_at(x));
  return w;
}

// (i) W_p(psi mu, psi nu) = W_p(mu, nu).
SuiteReport suite_isometry(const SuiteConfig& cfg) {
  Recorder rec("isometry", cfg);
  const double tol = rec.tol("isometry", 1e-9);
  const auto ms = panel(cfg, {Manifold::torus(1), Manifold::torus(2), Manifold::torus(3), Manifold::sphere(1),
                              Manifold::sphere(2), Manifold::sphere(3)});
  const auto ps = exponents(cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(seed);
    const Manifold& m = ms[static_cast<std::size_t>(t) % ms.size()];
    const double p = ps[static_cast<std::size_t>(t) / ms.size() % ps.size()];
    const DiscreteMeasure mu = random_measure(m, rng);
    const DiscreteMeasure nu = random_measure(m, rng);
    const Isometry psi = random_isometry(m, rng());
    const double before = solve_transport(mu, nu, p).distance;
    const double after = solve_transport(pushforward(psi, mu), pushforward(psi, nu), p).distance;
    rec.at_most(seed, "W_p deviation under isometry, " + describe(m, p), std::abs(before - after), tol);
  }
  return rec.finish(cfg.trials);
}

// Potential values at test points: the 64-per-axis grid where one exists.
std::vector<double> probe_values(const PotentialOracle& t, std::uint64_t seed) {
  const Manifold& m = t.manifold();
  if (m.kind == ManifoldKind::Torus || m.n <= 2) return sample_potential(t, 64).values();
  std::mt19937_64 rng(seed);
  std::vector<double> v;
  for (int i = 0; i < 64 * 64; ++i) v.push_back(t(random_point(m, rng)));
  return v;
}

// (ii) Distinct measures have distinct potentials, and recovery at mu's sites
// from nu's potential returns nu's masses there.
SuiteReport suite_injectivity(const SuiteConfig& cfg) {
  Recorder rec("injectivity", cfg);
  const double gap = rec.tol("gap", 1e-6);
  const double tol = rec.tol("recovery", 1e-9);
  const double separation = rec.tol("separation", 1e-2);
  const auto ms = panel(cfg, {Manifold::torus(1), Manifold::torus(2), Manifold::torus(3), Manifold::sphere(1),
                              Manifold::sphere(2)});
  const auto ps = exponents(cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(seed);
    const Manifold& m = ms[static_cast<std::size_t>(t) % ms.size()];
    const double p = ps[static_cast<std::size_t>(t) / ms.size() % ps.size()];
    RandomMeasureOptions opts;
    opts.predicates = all_predicates(m);
    const DiscreteMeasure mu = random_measure(m, rng, opts);
    DiscreteMeasure nu = random_measure(m, rng, opts);
    while (solve_transport(mu, nu, 1.0).distance < separation) nu = random_measure(m, rng, opts);

    const PotentialOracle tmu = PotentialOracle::closed_form(mu, p);
    const PotentialOracle tnu = PotentialOracle::closed_form(nu, p);
    rec.above(seed, "potential gap on the test grid, " + describe(m, p),
              max_abs_diff(probe_values(tmu, seed), probe_values(tnu, seed)), gap);

    const RecoveryResult r = recover_weights(tnu, mu.support());
    rec.at_most(seed, "recovery from the other potential, " + describe(m, p),
                max_abs_diff(r.masses, expected_masses(nu, mu.support())), tol);
  }
  return rec.finish(cfg.trials);
}

// (iii) Antipodal Diracs realise the diameter; other measures stay below it.
SuiteReport suite_diameter(const SuiteConfig& cfg) {
  Recorder rec("diameter", cfg);
  const double tol = rec.tol("diameter", 1e-12);
  const auto ms = panel(cfg, {Manifold::torus(1), Manifold::torus(2), Manifold::torus(3), Manifold::sphere(1),
                              Manifold::sphere(2), Manifold::sphere(3)});
  const auto ps = exponents(cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(seed);
    const Manifold& m = ms[static_cast<std::size_t>(t) % ms.size()];
    const double p = ps[static_cast<std::size_t>(t) / ms.size() % ps.size()];
    const double bound = m.diameter();

    const Point x = random_point(m, rng);
    const double w = solve_transport(DiscreteMeasure::dirac(x), DiscreteMeasure::dirac(antipode(x)), p).distance;
    rec.at_most(seed, "antipodal Dirac distance vs diameter, " + describe(m, p), std::abs(w - bound), tol);

    const DiscreteMeasure mu = random_measure(m, rng);
    const PotentialOracle pot = PotentialOracle::closed_form(mu, p);
    double sup = 0.0;
    for (const Point& y : mu.support()) sup = std::max(sup, std::pow(pot(antipode(y)), 1.0 / p));
    for (int i = 0; i < 256; ++i) sup = std::max(sup, std::pow(pot(random_point(m, rng)), 1.0 / p));
    rec.above(seed, "margin below the diameter, " + describe(m, p), bound - sup, 0.0);
  }
  return rec.finish(cfg.trials);
}

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol, double& err) {
  err = 0.0;
  if (a.size() != b.size()) {
    err = 1.0;
    return false;
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    err = std::max(err, distance(a.point(k), b.point(k)));
    err = std::max(err, std::abs(a.weight(k) - b.weight(k)));
  }
  return err <= tol;
}

// (iv) p = 2 potentials determine the one-dimensional marginals.
SuiteReport suite_marginals(const SuiteConfig& cfg) {
  Recorder rec("marginals", cfg);
  const double tol = rec.tol("marginals", 1e-8);
  const auto ms = panel(cfg, {Manifold::torus(2), Manifold::torus(3)});
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(seed);
    const Manifold& m = ms[static_cast<std::size_t>(t) % ms.size()];
    const DiscreteMeasure mu = random_measure(m, rng);
    const auto found = recover_torus_marginals_p2(PotentialOracle::closed_form(mu, 2.0));
    for (int j = 0; j < m.n; ++j) {
      double err = 0.0;
      same_measure(found[static_cast<std::size_t>(j)], marginal(mu, j), tol, err);
      rec.at_most(seed, "marginal " + std::to_string(j) + " from the p=2 potential, " + m.name(), err, tol);
    }
  }
  return rec.finish(cfg.trials);
}

// (v) Weights read back from closed-form and sampled potentials.
SuiteReport suite_recovery(const SuiteConfig& cfg) {
  Recorder rec("recovery", cfg);
  const double closed = rec.tol("closed", 1e-9);
  const double marg = rec.tol("marginals", 1e-8);
  const double sampled = rec.tol("sampled", 1e-3);
  const int grid = static_cast<int>(rec.tol("grid", 512));
  const double margin = rec.tol("separation", 0.08);
  const auto ms = panel(cfg, {Manifold::torus(1), Manifold::torus(2), Manifold::torus(3), Manifold::sphere(1),
                              Manifold::sphere(2), Manifold::sphere(3)});
  const auto ps = exponents(cfg);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(seed);
    const Manifold& m = ms[static_cast<std::size_t>(t) % ms.size()];
    const double p = ps[static_cast<std::size_t>(t) / ms.size() % ps.size()];
    RandomMeasureOptions opts;
    opts.predicates = all_predicates(m);
    const DiscreteMeasure mu = random_measure(m, rng, opts);
    const PotentialOracle pot = PotentialOracle::closed_form(mu, p);
    const RecoveryResult r = recover_weights(pot, mu.support());
    rec.at_most(seed, "closed-form recovery (" + to_string(r.method) + "), " + describe(m, p),
                max_abs_diff(r.masses, mu.weights()), closed);

    if (m.kind == ManifoldKind::Torus && m.n >= 2 && p == 2.0) {
      const auto found = recover_torus_marginals_p2(pot);
      for (int j = 0; j < m.n; ++j) {
        double err = 0.0;
        same_measure(found[static_cast<std::size_t>(j)], marginal(mu, j), marg, err);
        rec.at_most(seed, "marginal " + std::to_string(j) + ", " + m.name(), err, marg);
      }
    }

    if (m.n <= 2) {
      const DiscreteMeasure nu = separated_measure(m, rng, margin);
      const PotentialOracle g = PotentialOracle::sampled(sample_potential(PotentialOracle::closed_form(nu, p), grid));
      const RecoveryResult rg = recover_weights(g, nu.support());
      rec.at_most(seed, "sampled recovery on a " + std::to_string(grid) + " grid, " + describe(m, p),
                  max_abs_diff(rg.masses, nu.weights()), sampled);
    }
  }
  return rec.finish(cfg.trials);
}

// (vi) Minimisers over the Dirac segment.
SuiteReport suite_segment(const SuiteConfig& cfg) {
  Recorder rec("segment", cfg);
  const double tol = rec.tol("segment", 1e-3);
  const auto ms = panel(cfg, {Manifold::torus(1), Manifold::torus(2), Manifold::torus(3), Manifold::sphere(1),
                              Manifold::sphere(2)});
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(seed);
    const Manifold& m = ms[static_cast<std::size_t>(t) % ms.size()];
    Point x = random_point(m, rng);
    Point y = random_point(m, rng);
    while (distance(x, y) < 1e-3) y = random_point(m, rng);
    const DiscreteMeasure eta = random_measure(m, rng, {1, 6, {}});
    const AlphaInterval law = dirac_segment_alpha_interval(eta, x, y);
    const AlphaInterval found = alpha_grid_search(eta, x, y);
    const double err = std::max(std::abs(law.lo - found.lo), std::abs(law.hi - found.hi));
    rec.at_most(seed, "alpha interval vs grid search, " + m.name(), err, tol);
  }
  return rec.finish(cfg.trials);
}

// (vii) Cost coefficients, the convolution identity and Fourier recovery.
SuiteReport suite_fourier(const SuiteConfig& cfg) {
  Recorder rec("fourier", cfg);
  const double closed = rec.tol("closed", 1e-9);
  const double conv = rec.tol("convolution", 1e-7);
  const double back = rec.tol("recover", 1e-6);

  for (double p : {1.0, 2.0}) {
    double err = 0.0;
    for (int j = -64; j <= 64; ++j) err = std::max(err, std::abs(cost_coeff_quadrature(p, j) - cost_coeff_closed(p, j)));
    rec.at_most(cfg.seed, "quadrature vs closed form, p=" + std::to_string(static_cast<int>(p)), err, closed);
  }
  for (double p : {1.25, 1.5, 2.0, 2.5, 3.0}) {
    const SpectrumReport s = nonvanishing_scan(p, 64);
    double smallest = 1.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (s.frequencies[i] != 0) smallest = std::min(smallest, std::abs(s.values[i]));
    }
    rec.above(cfg.seed, "smallest |c_p(j)|, 0 < |j| <= 64, p=" + std::to_string(p), smallest, kSpectrumZeroThreshold);
  }
  {
    const SpectrumReport s = nonvanishing_scan(1.0, 64);
    std::vector<int> even;
    for (int j = -64; j <= 64; ++j) {
      if (j != 0 && j % 2 == 0) even.push_back(j);
    }
    if (s.zeros != even) rec.fail(cfg.seed, "p=1 zero set differs from the nonzero even frequencies",
                                  static_cast<double>(s.zeros.size()), static_cast<double>(even.size()), 0.0);
  }

  const std::vector<double> conv_ps = cfg.p ? std::vector<double>{*cfg.p} : std::vector<double>{1.0, 1.5, 2.0};
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(seed);
    const double p = conv_ps[static_cast<std::size_t>(t) % conv_ps.size()];
    const DiscreteMeasure mu = random_measure(Manifold::torus(1), rng);
    rec.at_most(seed, "convolution identity, |j| <= 16, p=" + std::to_string(p),
                convolution_identity_check(mu, p, 16), conv);
    if (p > 1.0) {
      const PotentialOracle g = PotentialOracle::sampled(sample_potential(PotentialOracle::closed_form(mu, p), 1 << 16));
      const auto hat = fourier_recover(g, p, 8);
      double err = 0.0;
      for (int j = -8; j <= 8; ++j) err = std::max(err, std::abs(hat[static_cast<std::size_t>(j + 8)] - measure_transform(mu, j)));
      rec.at_most(seed, "Fourier recovery, |j| <= 8, p=" + std::to_string(p), err, back);
    }
  }
  return rec.finish(cfg.trials);
}

// Centre of mass: grid minimiser and invariance under cube symmetries.
SuiteReport suite_center(const SuiteConfig& cfg) {
  Recorder rec("center", cfg);
  const double inv = rec.tol("invariance", 1e-10);
  const auto ms = panel(cfg, {Manifold::torus(1), Manifold::torus(2), Manifold::torus(3)});
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(seed);
    const Manifold& m = ms[static_cast<std::size_t>(t) % ms.size()];
    const auto n = static_cast<std::size_t>(m.n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> lo(n);
    for (double& v : lo) v = unit(rng) - 0.5;
    std::uniform_int_distribution<int> count(1, 8);
    const int atoms = count(rng);
    std::vector<Point> support;
    for (int k = 0; k < atoms; ++k) {
      std::vector<double> c(n);
      for (std::size_t j = 0; j < n; ++j) c[j] = lo[j] + 0.5 * unit(rng);
      support.emplace_back(TorusPoint(std::move(c)));
    }
    const DiscreteMeasure mu(m, support, random_weights(support.size(), rng));
    const CenterOfMass cm = center_of_mass_and_deviation(mu);

    // Grid search over the cube, 65 points per axis.
    const PotentialOracle pot = PotentialOracle::closed_form(mu, 2.0);
    const int per_axis = 65;
    const double h = 0.5 / (per_axis - 1);
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) total *= per_axis;
    double best = INFINITY;
    std::vector<double> arg(n);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<double> z(n);
      std::size_t rest = idx;
      for (std::size_t j = 0; j < n; ++j) {
        z[j] = lo[j] + h * static_cast<double>(rest % per_axis);
        rest /= per_axis;
      }
      const double v = pot(TorusPoint(z));
      if (v < best) {
        best = v;
        arg = z;
      }
    }
    double cell = 0.0;
    for (std::size_t j = 0; j < n; ++j) cell = std::max(cell, circle_distance(arg[j], cm.center[j]));
    rec.at_most(seed, "grid minimiser vs barycentre (cells), " + m.name(), cell / h, 1.0);

    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::vector<int> eps(n);
    for (int& e : eps) e = unit(rng) < 0.5 ? -1 : 1;
    const TorusIsometry psi = cube_isometry(covering_cube_corner(mu), sigma, eps);
    const CenterOfMass moved = center_of_mass_and_deviation(pushforward(psi, mu));
    rec.at_most(seed, "centre of mass equivariance, " + m.name(), distance(moved.center, psi(cm.center)), inv);
    rec.at_most(seed, "deviation invariance, " + m.name(), std::abs(moved.deviation - cm.deviation), inv);
  }
  return rec.finish(cfg.trials);
}

using SuiteFn = std::function<SuiteReport(const SuiteConfig&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"isometry", suite_isometry}, {"injectivity", suite_injectivity}, {"diameter", suite_diameter},
      {"marginals", suite_marginals}, {"recovery", suite_recovery},     {"segment", suite_segment},
      {"fourier", suite_fourier},   {"center", suite_center},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  for (const auto& [name, fn] : registry()) {
    if (name == cfg.suite) return fn(cfg);
  }
  throw std::invalid_argument("unknown suite '" + cfg.suite + "'");
}

std::vector<SuiteReport> run_suites(const SuiteConfig& cfg) {
  if (cfg.suite != "all") return {run_suite(cfg)};
  std::vector<SuiteReport> out;
  for (const std::string& name : suite_names()) {
    SuiteConfig one = cfg;
    one.suite = name;
    out.push_back(run_suite(one));
  }
  return out;
}

std::string format_report_table(const std::vector<SuiteReport>& reports) {
  std::string s;
  char line[512];
  std::snprintf(line, sizeof line, "%-12s %7s %9s  %s\n", "suite", "trials", "failures", "status");
  s += line;
  for (const SuiteReport& r : reports) {
    std::snprintf(line, sizeof line, "%-12s %7d %9zu  %s\n", r.suite.c_str(), r.trials, r.failures.size(),
                  r.passed ? "PASS" : "FAIL");
    s += line;
    for (const auto& [key, value] : r.metrics) {
      std::snprintf(line, sizeof line, "    %-60s %.3e\n", key.c_str(), value);
      s += line;
    }
    for (const SuiteFailure& f : r.failures) {
      std::snprintf(line, sizeof line, "    FAIL seed=%llu %s: observed %.6g expected %.6g tol %.3g\n",
                    static_cast<unsigned long long>(f.trial_seed), f.description.c_str(), f.observed, f.expected,
                    f.tolerance);
      s += line;
    }
  }
  return s;
}

}  // namespace wpot
