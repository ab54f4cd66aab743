#include "wpot/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wpot/errors.hpp"

namespace wpot {

std::string to_string(RecoveryMethod m) {
  switch (m) {
    case RecoveryMethod::TorusP1:
      return "TorusP1";
    case RecoveryMethod::TorusPGeneral:
      return "TorusP_general";
    case RecoveryMethod::TorusP2Marginals:
      return "TorusP2Marginals";
    case RecoveryMethod::SphereP1:
      return "SphereP1";
    case RecoveryMethod::SpherePGeneral:
      return "SphereP_general";
  }
  return "?";
}

namespace {

void require_position(const Manifold& m, const std::vector<Point>& sites, PositionPredicate pred) {
  const PositionReport report = check_position(m, sites, pred);
  if (report.holds) return;
  std::string list;
  for (const auto& [k, l] : report.witnesses) {
    if (!list.empty()) list += ", ";
    list += "(" + std::to_string(k) + ", " + std::to_string(l) + ")";
  }
  throw PreconditionError("candidate sites violate " + to_string(pred) + ": " + list);
}

// Limit at x, whose singularity is due to the mass at `site`.
double limit_at(const PotentialOracle& t, const Point& x, const Direction& dir, const Point& site,
                const RecoveryOptions& opts) {
  if (const DiscreteMeasure* mu = t.measure()) {
    if (!opts.force_numeric) return analytic_limit(*mu, t.p(), x, dir);
    return richardson_limit(t, x, dir);
  }
  return grid_site_limit(t, x, dir, site);
}

RecoveryResult finish(std::vector<Point> sites, std::vector<double> masses, RecoveryMethod method) {
  RecoveryResult r;
  r.method = method;
  double total = 0.0;
  for (double& m : masses) {
    if (m < 0.0) {
      r.clipped += -m;
      m = 0.0;
    }
    total += m;
  }
  r.residual = std::abs(1.0 - total);
  r.sites = std::move(sites);
  r.masses = std::move(masses);
  return r;
}

}  // namespace

RecoveryResult recover_torus_weights(const PotentialOracle& t, const std::vector<Point>& sites,
                                     const RecoveryOptions& opts) {
  const Manifold& m = t.manifold();
  if (m.kind != ManifoldKind::Torus) throw std::invalid_argument("recover_torus_weights needs a torus potential");
  for (const Point& x : sites) require_on(m, x);
  const double p = t.p();
  std::vector<double> masses;

  if (m.n == 1) {
    require_position(m, sites, PositionPredicate::NoAntipodalPairs);
    const double scale = p == 1.0 ? -2.0 : -2.0 * p * std::pow(0.5, p - 1.0);
    for (const Point& x : sites) masses.push_back(limit_at(t, antipode(x), 0, x, opts) / scale);
    return finish(sites, std::move(masses),
                  p == 1.0 ? RecoveryMethod::TorusP1 : RecoveryMethod::TorusPGeneral);
  }

  if (p == 1.0) {
    require_position(m, sites, PositionPredicate::AvoidsAntipodalHyperplanes);
    for (const Point& x : sites) masses.push_back(limit_at(t, x, 0, x, opts) / 2.0);
    return finish(sites, std::move(masses), RecoveryMethod::TorusP1);
  }

  require_position(m, sites, PositionPredicate::DistinctFirstCoordinates);
  const double scale = -p * std::pow(4.0, (2.0 - p) / 2.0);
  for (const Point& x : sites) {
    const Point probe = std::get<TorusPoint>(x).shifted(0, 0.5);
    masses.push_back(limit_at(t, probe, 0, x, opts) / scale);
  }
  return finish(sites, std::move(masses),
                p == 2.0 ? RecoveryMethod::TorusP2Marginals : RecoveryMethod::TorusPGeneral);
}

RecoveryResult recover_sphere_weights(const PotentialOracle& t, const std::vector<Point>& sites,
                                      const RecoveryOptions& opts) {
  const Manifold& m = t.manifold();
  if (m.kind != ManifoldKind::Sphere) throw std::invalid_argument("recover_sphere_weights needs a sphere potential");
  for (const Point& x : sites) require_on(m, x);
  require_position(m, sites, PositionPredicate::NoAntipodalPairs);
  const double p = t.p();
  const double scale = p == 1.0 ? -2.0 : -2.0 * p * std::pow(std::numbers::pi, p - 1.0);
  std::vector<double> masses;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const SpherePoint probe = antipode(std::get<SpherePoint>(sites[k]));
    const SpherePoint z = t.grid() != nullptr ? grid_tangent(probe) : sphere_tangent_direction(probe, k);
    masses.push_back(limit_at(t, probe, z, sites[k], opts) / scale);
  }
  return finish(sites, std::move(masses),
                p == 1.0 ? RecoveryMethod::SphereP1 : RecoveryMethod::SpherePGeneral);
}

RecoveryResult recover_weights(const PotentialOracle& t, const std::vector<Point>& sites,
                               const RecoveryOptions& opts) {
  if (t.manifold().kind == ManifoldKind::Torus) return recover_torus_weights(t, sites, opts);
  return recover_sphere_weights(t, sites, opts);
}

// ---------------------------------------------------------------------------
// p = 2 marginals

namespace {

struct Atom {
  double coord;
  double mass;
};

class MarginalScanner {
 public:
  MarginalScanner(const PotentialOracle& t, int axis, const MarginalScanOptions& opts)
      : t_(t), axis_(axis), opts_(opts), base_(std::vector<double>(static_cast<std::size_t>(t.manifold().n), 0.0)) {}

  std::vector<Atom> run() {
    const SampledPotential* grid = t_.grid();
    const int resolution = grid != nullptr ? grid->resolution() : opts_.resolution;
    if (resolution < 8) throw std::invalid_argument("marginal scan resolution must be >= 8");
    scan(-0.5, resolution, 1.0 / resolution, true, 0);
    return std::move(atoms_);
  }

 private:
  TorusPoint at(double t) const {
    std::vector<double> c(base_.coords().begin(), base_.coords().end());
    c[static_cast<std::size_t>(axis_)] = t;
    return TorusPoint(std::move(c));
  }

  // Second-difference ratio along the axis with step h at coordinate t. For
  // p = 2 this is 2h minus a tent of half-width h and depth 2 mu(H) under each
  // atom of the marginal (shifted by 1/2).
  double g(double t, double h) const {
    return (t_(at(t + h)) - 2.0 * t_(at(t)) + t_(at(t - h))) / h;
  }

  // Scans `count` points lo + i h. `periodic` scans wrap around the circle.
  void scan(double lo, int count, double h, bool periodic, int depth) {
    std::vector<double> values(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) values[static_cast<std::size_t>(i)] = g(lo + i * h, h);
    // Off the tents the ratio is exactly 2h (the total mass is 1).
    const double baseline = 2.0 * h;
    std::vector<bool> dip(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dip[i] = values[i] < baseline - opts_.threshold;

    // Runs of consecutive dipping nodes (cyclic when periodic).
    std::size_t start = 0;
    if (periodic) {
      if (std::all_of(dip.begin(), dip.end(), [](bool b) { return b; })) {
        throw std::runtime_error("marginal scan: the second difference dips everywhere; is p = 2?");
      }
      while (dip[start]) ++start;
    }
    for (std::size_t step = 0; step < values.size(); ++step) {
      const std::size_t i = (start + step) % values.size();
      if (!dip[i] || (step > 0 && dip[(i + values.size() - 1) % values.size()])) continue;
      if (!periodic && i > 0 && dip[i - 1]) continue;
      std::vector<std::size_t> run;
      for (std::size_t j = i; dip[j] && run.size() < values.size(); j = (j + 1) % values.size()) {
        run.push_back(j);
        if (!periodic && j + 1 == values.size()) break;
      }
      handle_run(lo, h, values, baseline, run, depth);
    }
  }

  void handle_run(double lo, double h, const std::vector<double>& values, double baseline,
                  const std::vector<std::size_t>& run, int depth) {
    // Hat functions form a partition of unity, so the depths of a run add up
    // to twice its total mass even when tents overlap.
    double run_mass = 0.0;
    std::size_t deepest = run.front();
    for (std::size_t i : run) {
      run_mass += (baseline - values[i]) / 2.0;
      if (values[i] < values[deepest]) deepest = i;
    }
    const double t0 = lo + static_cast<double>(deepest) * h;
    const double c = locate(t0 - h, t0 + h, h);
    // Grid runs cannot be split below the grid spacing; their exact node
    // samples make the depth sum the best mass estimate.
    if (t_.grid() != nullptr) {
      atoms_.push_back({wrap_unit(c + 0.5), run_mass});
      return;
    }
    const double mass = hyperplane_mass(c);
    if (std::abs(mass - run_mass) <= 1e-7 || h < 1e-9 || depth > 8) {
      atoms_.push_back({wrap_unit(c + 0.5), mass});
      return;
    }
    // Several atoms share the run: rescan it at a finer spacing.
    const double first = lo + static_cast<double>(run.front()) * h;
    const double span = static_cast<double>(run.size() + 1) * h;
    const int count = 16 * static_cast<int>(run.size() + 3);
    const double fine = (span + 2.0 * h) / count;
    scan(first - 1.5 * h, count + 1, fine, false, depth + 1);
  }

  // Bisection on t -> g(t + h/2) - g(t - h/2), which is negative left of the
  // tent centre and positive right of it.
  double locate(double lo, double hi, double h) const {
    auto phi = [&](double t) { return g(t + h / 2.0, h) - g(t - h / 2.0, h); };
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (phi(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  // mu(H(c + 1/2, axis)) = -1/2 * limit at c.
  double hyperplane_mass(double c) const {
    const Point x = at(c);
    if (const DiscreteMeasure* mu = t_.measure(); mu != nullptr && !opts_.recovery.force_numeric) {
      return -0.5 * torus_limit_analytic(*mu, 2.0, std::get<TorusPoint>(x), axis_);
    }
    return -0.5 * richardson_limit(t_, x, axis_);
  }

  const PotentialOracle& t_;
  int axis_;
  MarginalScanOptions opts_;
  TorusPoint base_;
  std::vector<Atom> atoms_;
};

}  // namespace

std::vector<DiscreteMeasure> recover_torus_marginals_p2(const PotentialOracle& t,
                                                        const MarginalScanOptions& opts) {
  const Manifold& m = t.manifold();
  if (m.kind != ManifoldKind::Torus || m.n < 2) {
    throw std::invalid_argument("recover_torus_marginals_p2 needs a potential on T^n with n >= 2");
  }
  if (t.p() != 2.0) throw std::invalid_argument("recover_torus_marginals_p2 needs p = 2");

  std::vector<DiscreteMeasure> marginals;
  for (int axis = 0; axis < m.n; ++axis) {
    std::vector<Atom> atoms = MarginalScanner(t, axis, opts).run();
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.coord < b.coord; });
    std::vector<Atom> merged;
    for (const Atom& a : atoms) {
      if (a.mass <= 0.0) continue;
      if (!merged.empty() && circle_distance(merged.back().coord, a.coord) <= kSupportTolerance) {
        // The same hyperplane found twice carries the same mass.
        merged.back().mass = std::max(merged.back().mass, a.mass);
      } else {
        merged.push_back(a);
      }
    }
    if (merged.size() > 1 && circle_distance(merged.front().coord, merged.back().coord) <= kSupportTolerance) {
      merged.pop_back();
    }
    if (merged.empty()) throw std::runtime_error("marginal scan found no atoms");
    double total = 0.0;
    for (const Atom& a : merged) total += a.mass;
    std::vector<Point> support;
    std::vector<double> weights;
    for (const Atom& a : merged) {
      support.emplace_back(TorusPoint({a.coord}));
      weights.push_back(a.mass / total);
    }
    marginals.emplace_back(Manifold::torus(1), std::move(support), std::move(weights));
  }
  return marginals;
}

}  // namespace wpot
