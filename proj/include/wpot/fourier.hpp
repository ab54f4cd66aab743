#pragma once

#include <complex>
#include <span>
#include <vector>

#include "wpot/measure.hpp"
#include "wpot/potential.hpp"

namespace wpot {

inline constexpr int kDefaultQuadratureResolution = 1 << 14;
inline constexpr double kSpectrumZeroThreshold = 1e-12;

/// c_p(j) = 2 * int_0^{1/2} x^p cos(2 pi j x) dx, the Fourier coefficient of
/// x -> |x|^p on the unit circle, by composite Simpson with `resolution`
/// subintervals (a power of two >= 2^10).
double cost_coeff_quadrature(double p, int j, int resolution = kDefaultQuadratureResolution);

/// Simpson value together with |S(h) - S(2h)| / 15 as an error estimate.
struct QuadratureValue {
  double value;
  double error;
};
QuadratureValue cost_coeff_quadrature_with_error(double p, int j,
                                                 int resolution = kDefaultQuadratureResolution);

/// Exact coefficients: p in {1, 2} on the circle, p = 2 on T^2. Anything else
/// throws std::invalid_argument.
double cost_coeff_closed(double p, int j);
double cost_coeff_closed(double p, std::span<const int> j);

/// mu^(j) = sum_k w_k exp(-2 pi i j . x^k); exactly 1 at j = 0.
std::complex<double> measure_transform(const DiscreteMeasure& mu, std::span<const int> j);
std::complex<double> measure_transform(const DiscreteMeasure& mu, int j);

/// max_{|j| <= jmax} |T^(j) - c_p(j) mu^(j)| on T^1, with T^(j) integrated from
/// the closed-form potential by Gauss-Legendre panels (about `gridsize` per
/// unit length) between the kinks of T.
double convolution_identity_check(const DiscreteMeasure& mu, double p, int jmax,
                                  int gridsize = 1 << 12);

struct SpectrumReport {
  double p = 1.0;
  int jmax = 0;
  double threshold = kSpectrumZeroThreshold;
  /// Frequencies -jmax..jmax in order, with values and quadrature error estimates.
  std::vector<int> frequencies;
  std::vector<double> values;
  std::vector<double> errors;
  /// Frequencies with |value| <= threshold.
  std::vector<int> zeros;
};

SpectrumReport nonvanishing_scan(double p, int jmax, double threshold = kSpectrumZeroThreshold);

/// Report built from cost_coeff_closed (p in {1, 2}); errors are zero.
SpectrumReport closed_form_spectrum(double p, int jmax, double threshold = kSpectrumZeroThreshold);

/// mu^(j) = T^(j) / c_p(j) for j = -jmax..jmax (index j + jmax), from a grid
/// potential on T^1. T^(j) is the discrete Fourier transform of the grid
/// samples, so the aliasing error decays like 1/resolution^2. Throws
/// UnrecoverableFrequency when c_p vanishes somewhere in range.
std::vector<std::complex<double>> fourier_recover(const PotentialOracle& t, double p, int jmax);

}  // namespace wpot
