#include "wpot/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "wpot/errors.hpp"
#include "wpot/transport.hpp"

namespace wpot {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int r) { return r > 0 && (r & (r - 1)) == 0; }

double simpson(double p, int j, int intervals) {
  const double h = 0.5 / intervals;
  const double w = 2.0 * kPi * j;
  auto f = [&](double x) { return std::pow(x, p) * std::cos(w * x); };
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < intervals; ++i) {
    const double v = f(i * h);
    if (i % 2 == 1) {
      odd += v;
    } else {
      even += v;
    }
  }
  const double sum = f(0.0) + f(0.5) + 4.0 * odd + 2.0 * even;
  return 2.0 * h / 3.0 * sum;
}

}  // namespace

QuadratureValue cost_coeff_quadrature_with_error(double p, int j, int resolution) {
  require_valid_exponent(p);
  if (!is_power_of_two(resolution) || resolution < (1 << 10)) {
    throw std::invalid_argument("quadrature resolution must be a power of two >= 1024");
  }
  const double fine = simpson(p, j, resolution);
  const double coarse = simpson(p, j, resolution / 2);
  return {fine, std::abs(fine - coarse) / 15.0};
}

double cost_coeff_quadrature(double p, int j, int resolution) {
  require_valid_exponent(p);
  if (!is_power_of_two(resolution) || resolution < (1 << 10)) {
    throw std::invalid_argument("quadrature resolution must be a power of two >= 1024");
  }
  return simpson(p, j, resolution);
}

double cost_coeff_closed(double p, int j) {
  if (p == 2.0) {
    if (j == 0) return 1.0 / 12.0;
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    return sign / (2.0 * j * j * kPi * kPi);
  }
  if (p == 1.0) {
    if (j == 0) return 0.25;
    if (j % 2 == 0) return 0.0;
    return -1.0 / (static_cast<double>(j) * j * kPi * kPi);
  }
  throw std::invalid_argument("closed-form cost coefficients exist only for p = 1 and p = 2");
}

double cost_coeff_closed(double p, std::span<const int> j) {
  if (j.size() == 1) return cost_coeff_closed(p, j[0]);
  if (j.size() != 2 || p != 2.0) {
    throw std::invalid_argument("closed-form cost coefficients on T^n, n >= 2, exist only for n = 2, p = 2");
  }
  if (j[0] == 0 && j[1] == 0) return 1.0 / 6.0;
  if (j[0] == 0) return cost_coeff_closed(2.0, j[1]);
  if (j[1] == 0) return cost_coeff_closed(2.0, j[0]);
  return 0.0;
}

std::complex<double> measure_transform(const DiscreteMeasure& mu, std::span<const int> j) {
  const Manifold& m = mu.manifold();
  if (m.kind != ManifoldKind::Torus) throw std::invalid_argument("measure_transform needs a torus measure");
  if (static_cast<int>(j.size()) != m.n) {
    throw std::invalid_argument("frequency has " + std::to_string(j.size()) + " components on T^" +
                                std::to_string(m.n));
  }
  if (std::all_of(j.begin(), j.end(), [](int v) { return v == 0; })) return {1.0, 0.0};
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const auto& x = std::get<TorusPoint>(mu.point(k));
    double phase = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) phase += j[i] * x[i];
    sum += mu.weight(k) * std::polar(1.0, -2.0 * kPi * phase);
  }
  return sum;
}

std::complex<double> measure_transform(const DiscreteMeasure& mu, int j) {
  const int freq[1] = {j};
  return measure_transform(mu, std::span<const int>(freq, 1));
}

double convolution_identity_check(const DiscreteMeasure& mu, double p, int jmax, int gridsize) {
  require_valid_exponent(p);
  if (mu.manifold() != Manifold::torus(1)) throw std::invalid_argument("convolution_identity_check needs a measure on T^1");
  if (jmax < 0 || gridsize < 1) throw std::invalid_argument("jmax and gridsize must be positive");

  // T is smooth between the atoms and their antipodes.
  std::vector<double> breaks{-0.5};
  for (const Point& x : mu.support()) {
    const double a = std::get<TorusPoint>(x)[0];
    breaks.push_back(a);
    breaks.push_back(wrap_unit(a + 0.5));
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(0.5);

  using Rule = boost::math::quadrature::gauss<double, 10>;
  const auto& abscissa = Rule::abscissa();
  const auto& weight = Rule::weights();
  std::vector<double> nodes;
  std::vector<double> weights;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b];
    const double len = breaks[b + 1] - lo;
    if (len <= 0.0) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil(len * gridsize)));
    const double h = len / panels;
    for (int q = 0; q < panels; ++q) {
      const double mid = lo + (q + 0.5) * h;
      for (std::size_t i = 0; i < abscissa.size(); ++i) {
        // The rule stores the nonnegative half of its symmetric nodes.
        const double wi = weight[i] * h / 2.0;
        nodes.push_back(mid + abscissa[i] * h / 2.0);
        weights.push_back(wi);
        if (abscissa[i] != 0.0) {
          nodes.push_back(mid - abscissa[i] * h / 2.0);
          weights.push_back(wi);
        }
      }
    }
  }

  const PotentialOracle t = PotentialOracle::closed_form(mu, p);
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = t(Point(TorusPoint({nodes[i]})));

  double worst = 0.0;
  for (int j = -jmax; j <= jmax; ++j) {
    std::complex<double> that{0.0, 0.0};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      that += weights[i] * values[i] * std::polar(1.0, -2.0 * kPi * j * nodes[i]);
    }
    const std::complex<double> expected = cost_coeff_quadrature(p, j) * measure_transform(mu, j);
    worst = std::max(worst, std::abs(that - expected));
  }
  return worst;
}

SpectrumReport nonvanishing_scan(double p, int jmax, double threshold) {
  require_valid_exponent(p);
  if (jmax < 0) throw std::invalid_argument("jmax must be >= 0");
  SpectrumReport r;
  r.p = p;
  r.jmax = jmax;
  r.threshold = threshold;
  for (int j = -jmax; j <= jmax; ++j) {
    const QuadratureValue q = cost_coeff_quadrature_with_error(p, j);
    r.frequencies.push_back(j);
    r.values.push_back(q.value);
    r.errors.push_back(q.error);
    if (std::abs(q.value) <= threshold) r.zeros.push_back(j);
  }
  return r;
}

SpectrumReport closed_form_spectrum(double p, int jmax, double threshold) {
  if (jmax < 0) throw std::invalid_argument("jmax must be >= 0");
  SpectrumReport r;
  r.p = p;
  r.jmax = jmax;
  r.threshold = threshold;
  for (int j = -jmax; j <= jmax; ++j) {
    const double v = cost_coeff_closed(p, j);
    r.frequencies.push_back(j);
    r.values.push_back(v);
    r.errors.push_back(0.0);
    if (std::abs(v) <= threshold) r.zeros.push_back(j);
  }
  return r;
}

std::vector<std::complex<double>> fourier_recover(const PotentialOracle& t, double p, int jmax) {
  const SampledPotential* grid = t.grid();
  if (grid == nullptr) throw std::invalid_argument("fourier_recover needs a sampled potential");
  if (grid->manifold() != Manifold::torus(1)) throw std::invalid_argument("fourier_recover works on T^1 only");
  if (p != t.p()) throw std::invalid_argument("exponent does not match the sampled potential");
  if (jmax < 0 || 2 * jmax >= grid->resolution()) {
    throw std::invalid_argument("jmax must be in [0, resolution / 2)");
  }

  const SpectrumReport scan = nonvanishing_scan(p, jmax);
  if (!scan.zeros.empty()) {
    std::string list;
    for (int j : scan.zeros) list += (list.empty() ? "" : ", ") + std::to_string(j);
    throw UnrecoverableFrequency("cost coefficient vanishes at j = " + list, scan.zeros);
  }

  const std::vector<double>& v = grid->values();
  const double n = static_cast<double>(v.size());
  std::vector<std::complex<double>> out;
  for (int idx = 0; idx < static_cast<int>(scan.frequencies.size()); ++idx) {
    const int j = scan.frequencies[static_cast<std::size_t>(idx)];
    std::complex<double> that{0.0, 0.0};
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x = -0.5 + static_cast<double>(i) / n;
      that += v[i] * std::polar(1.0, -2.0 * kPi * j * x);
    }
    out.push_back(that / n / scan.values[static_cast<std::size_t>(idx)]);
  }
  return out;
}

}  // namespace wpot
