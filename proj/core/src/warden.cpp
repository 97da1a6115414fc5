#include "stego/warden.hpp"

#include <cmath>

namespace stego {

double noise_power_for(double watermark_power, DbRatio wnr) {
  if (!(watermark_power > 0.0) || !std::isfinite(watermark_power))
    throw Error(ErrorKind::InvalidParameter, "watermark power must be positive");
  if (wnr.is_infinite()) return 0.0;
  if (!std::isfinite(wnr.db)) throw Error(ErrorKind::InvalidParameter, "WNR must be finite or +inf");
  return watermark_power / db_to_linear(wnr);
}

Signal awgn_attack(const Signal& x, double watermark_power, const AttackParams& p) {
  const double variance = noise_power_for(watermark_power, p.wnr);
  if (variance == 0.0) return x;
  const double sigma = std::sqrt(variance);
  const KeyedStream rng(p.key, Stream::Noise);
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sigma * rng.gaussian(i);
  return Signal(std::move(out));
}

}  // namespace stego
