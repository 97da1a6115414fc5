#include "stego/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stego/error.hpp"

namespace stego {

double gaussian_pdf(double x, double sigma) noexcept {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double gaussian_cdf(double x, double sigma) noexcept {
  return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2));
}

HostDensity HostDensity::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidParameter, "gaussian density needs sigma > 0");
  return HostDensity{[sigma](double x) { return gaussian_pdf(x, sigma); }, sigma};
}

HostDensity HostDensity::uniform(double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorKind::InvalidParameter, "uniform density needs hi > lo");
  const double height = 1.0 / (hi - lo);
  return HostDensity{[lo, hi, height](double x) { return (x >= lo && x <= hi) ? height : 0.0; },
                     (hi - lo) / std::sqrt(12.0), {lo, hi}};
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-13);
}

double integrate_fixed(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

std::vector<double> integrate_bins(const std::function<double(double)>& f, double lo, double hi,
                                   std::size_t bins, std::span<const double> breakpoints,
                                   std::size_t pieces_per_bin) {
  if (!(hi > lo) || bins == 0 || pieces_per_bin == 0)
    throw Error(ErrorKind::InvalidParameter, "integrate_bins needs hi > lo and positive counts");
  std::vector<double> cuts(breakpoints.begin(), breakpoints.end());
  std::sort(cuts.begin(), cuts.end());

  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> mass(bins, 0.0);
  std::vector<double> edges;
  for (std::size_t b = 0; b < bins; ++b) {
    const double a = lo + width * static_cast<double>(b);
    const double z = (b + 1 == bins) ? hi : lo + width * static_cast<double>(b + 1);
    edges.clear();
    for (std::size_t k = 0; k <= pieces_per_bin; ++k)
      edges.push_back(a + (z - a) * static_cast<double>(k) / static_cast<double>(pieces_per_bin));
    for (auto it = std::upper_bound(cuts.begin(), cuts.end(), a); it != cuts.end() && *it < z; ++it)
      edges.push_back(*it);
    std::sort(edges.begin(), edges.end());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      if (edges[k + 1] > edges[k])
        acc += boost::math::quadrature::gauss<double, 10>::integrate(f, edges[k], edges[k + 1]);
    }
    mass[b] = acc;
  }
  return mass;
}

}  // namespace stego
