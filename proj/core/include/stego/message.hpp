#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stego/signal.hpp"

namespace stego {

/// Sequence of message bits, each 0 or 1.
class BitMessage {
 public:
  BitMessage() = default;
  explicit BitMessage(std::vector<std::uint8_t> bits);

  /// Equiprobable bits from the key's message substream.
  static BitMessage random(std::size_t count, Key key);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend bool operator==(const BitMessage&, const BitMessage&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// Fraction of positions where the two messages differ.
double bit_error_rate(const BitMessage& sent, const BitMessage& received);

}  // namespace stego
