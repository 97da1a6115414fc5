#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace stego {

/// Host probability density handed to the analytic stego-density oracles.
/// `sigma` is the host standard deviation; oracles use it to bound sums.
struct HostDensity {
  std::function<double(double)> pdf;
  double sigma = 1.0;
  std::vector<double> kinks;  // points where pdf is not smooth

  static HostDensity gaussian(double sigma);
  static HostDensity uniform(double lo, double hi);
};

double gaussian_pdf(double x, double sigma) noexcept;
double gaussian_cdf(double x, double sigma) noexcept;

/// Adaptive Gauss-Kronrod integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b);

/// Integral of f over [a, b] with a fixed 20-point Gauss-Legendre rule.
double integrate_fixed(const std::function<double(double)>& f, double a, double b);

/// Mass of a density on each of `bins` equal bins over [lo, hi). Every bin is
/// split at the breakpoints falling inside it (discontinuities of f) and at
/// `pieces_per_bin` equal sub-intervals before applying Gauss-Legendre.
std::vector<double> integrate_bins(const std::function<double(double)>& f, double lo, double hi,
                                   std::size_t bins, std::span<const double> breakpoints = {},
                                   std::size_t pieces_per_bin = 1);

}  // namespace stego
