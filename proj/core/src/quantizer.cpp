#include "stego/quantizer.hpp"

#include <cmath>

namespace stego {

LatticeStep::LatticeStep(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorKind::InvalidParameter, "lattice step must be positive and finite");
}

long long quantize_index(double v, LatticeStep delta) {
  if (!std::isfinite(v)) throw Error(ErrorKind::InvalidParameter, "quantize of a non-finite value");
  return static_cast<long long>(std::floor(v / delta.value() + 0.5));
}

double quantize(double v, LatticeStep delta) {
  return static_cast<double>(quantize_index(v, delta)) * delta.value();
}

double mod_residual(double v, LatticeStep delta) {
  const double d = delta.value();
  double r = v - quantize(v, delta);
  // Rounding in v / d can leave r a hair outside the half-open cell.
  if (r >= 0.5 * d) r -= d;
  if (r < -0.5 * d) r += d;
  return r;
}

}  // namespace stego
