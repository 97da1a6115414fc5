#pragma once

#include "stego/signal.hpp"

namespace stego {

struct AttackParams {
  DbRatio wnr;  ///< DbRatio::infinite() disables the attack.
  Key key;
};

/// Noise variance that puts `watermark_power` at the requested WNR.
double noise_power_for(double watermark_power, DbRatio wnr);

/// y = x + n with n i.i.d. N(0, watermark_power / 10^(wnr/10)) drawn from the
/// key's noise substream.
Signal awgn_attack(const Signal& x, double watermark_power, const AttackParams& p);

}  // namespace stego
