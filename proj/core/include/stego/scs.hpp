#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stego/density.hpp"
#include "stego/message.hpp"
#include "stego/quantizer.hpp"
#include "stego/signal.hpp"

namespace stego {

/// Scalar Costa scheme configuration.
///
/// Bit m at sample i is carried by the coset {n*delta + m*delta/2 + d[i]}. The
/// keyed dither d[i] is 0 or delta/2, so it relabels the two cosets per sample
/// without moving the union lattice (delta/2)Z. The stego density therefore
/// keeps the aliasing structure of the undithered scheme.
struct ScsParams {
  double alpha;
  LatticeStep delta;
  Key key;

  ScsParams(double alpha, LatticeStep delta, Key key);

  /// Step chosen so that the watermark power alpha^2 delta^2 / 12 sits `dwr`
  /// below the host power sigma_s^2.
  static ScsParams from_dwr(double alpha, DbRatio dwr, double sigma_s, Key key);
};

/// delta = (sigma_s / alpha) * sqrt(12) * 10^(-dwr/20).
LatticeStep delta_for_dwr(double alpha, DbRatio dwr, double sigma_s);

double scs_dither(const ScsParams& p, std::size_t index);

Signal scs_embed(const Signal& host, const BitMessage& message, const ScsParams& p);

BitMessage scs_extract(std::span<const double> received, const ScsParams& p);

/// Dither-removed residuals mod delta: the per-sample decision statistic.
std::vector<double> scs_residuals(std::span<const double> received, const ScsParams& p);

/// Analytic stego density for equiprobable bits (0 < alpha < 1):
///   p_X(x) = 1 / (2(1-alpha)) * sum_u 1[|x-u| <= (1-alpha)delta/2] p_S((x - alpha u)/(1-alpha))
/// with u over the union lattice (delta/2)Z.
double scs_theoretical_pdf(double x, const ScsParams& p, const HostDensity& host);

/// Window edges of scs_theoretical_pdf inside [lo, hi] (its discontinuities).
std::vector<double> scs_pdf_breakpoints(const ScsParams& p, double lo, double hi);

}  // namespace stego
