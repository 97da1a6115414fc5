#pragma once

#include "stego/error.hpp"

namespace stego {

/// Step of the uniform scalar lattice {n * delta : n integer}.
class LatticeStep {
 public:
  explicit LatticeStep(double delta);
  double value() const noexcept { return delta_; }

  friend bool operator==(const LatticeStep&, const LatticeStep&) = default;

 private:
  double delta_;
};

/// Nearest lattice point n * delta; half-way ties go toward +infinity.
double quantize(double v, LatticeStep delta);

/// Lattice index of quantize(v, delta).
long long quantize_index(double v, LatticeStep delta);

/// v - quantize(v, delta), folded into [-delta/2, delta/2).
double mod_residual(double v, LatticeStep delta);

}  // namespace stego
