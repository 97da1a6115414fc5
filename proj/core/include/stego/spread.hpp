#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stego/density.hpp"
#include "stego/message.hpp"
#include "stego/scs.hpp"
#include "stego/signal.hpp"

namespace stego {

struct SpreadParams {
  std::size_t tau;
  Key key;

  SpreadParams(std::size_t tau, Key key);
};

/// Keyed spreading coefficient t[i] = +-1/sqrt(tau), indexed by absolute position.
double spread_sign(const SpreadParams& p, std::size_t index);

/// Block inner products s_st[l] = sum_{i in block l} s[i] t[i].
Signal spread_project(const Signal& s, const SpreadParams& p);

/// Which domain a nominal DWR is applied in when sizing the projected-domain step.
enum class DwrReference {
  /// The SCS step is sized for the nominal DWR on the projected samples; the
  /// host-domain DWR is then nominal + 10 log10(tau).
  Projected,
  /// The projected step is sized for nominal - 10 log10(tau), so the host
  /// domain sees the nominal DWR.
  Host,
};

struct StScsParams {
  SpreadParams spread;
  ScsParams scs;

  StScsParams(SpreadParams spread, ScsParams scs) : spread(spread), scs(scs) {}

  static StScsParams from_dwr(double alpha, std::size_t tau, DbRatio dwr, double sigma_s, Key key,
                              DwrReference reference = DwrReference::Projected);
};

/// One bit per block of tau samples.
Signal stscs_embed(const Signal& host, const BitMessage& message, const StScsParams& p);

BitMessage stscs_extract(const Signal& received, const StScsParams& p);

/// Projected, dither-removed residuals (one per block).
std::vector<double> stscs_residuals(const Signal& received, const StScsParams& p);

/// Stego density marginalised over the spreading sign t, the message bit, the
/// codeword u and the rest-of-block projection Y ~ N(0, (tau-1) sigma_s^2 / tau):
///   tau / (4 (tau - alpha)) * sum_{t,u} integral p_Y(y) p_S(tau/(tau-alpha) (x - alpha u t + alpha y t)) dy
/// where the codeword selection restricts y to |y - (u - x t)| <= (tau - alpha) delta / (2 tau).
double stscs_theoretical_pdf(double x, const StScsParams& p, const HostDensity& host);

}  // namespace stego
