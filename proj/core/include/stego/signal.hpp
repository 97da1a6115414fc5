#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "stego/error.hpp"

namespace stego {

/// Finite, non-empty sequence of real samples (host, stego or attacked).
class Signal {
 public:
  explicit Signal(std::vector<double> samples);
  Signal(std::initializer_list<double> samples) : Signal(std::vector<double>(samples)) {}

  std::size_t size() const noexcept { return samples_.size(); }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  std::span<const double> samples() const noexcept { return samples_; }
  operator std::span<const double>() const noexcept { return samples_; }

  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
};

/// Named substreams of a root key. Each one is an independent keyed sequence.
enum class Stream : std::uint64_t {
  Host = 1,
  Dither = 2,
  Spreading = 3,
  Message = 4,
  Noise = 5,
};

struct Key {
  std::uint64_t seed = 0;

  /// Child key, independent of the parent and of every other tag.
  Key derive(std::uint64_t tag) const noexcept;

  friend bool operator==(const Key&, const Key&) = default;
};

/// Counter-based random stream: value i depends only on (key, stream, i), so
/// disjoint index ranges can be drawn in any order or in parallel.
class KeyedStream {
 public:
  KeyedStream(Key key, Stream stream) noexcept;

  std::uint64_t bits(std::uint64_t index) const noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const noexcept;
  /// Standard normal via Box-Muller on the counter pair (2i, 2i+1).
  double gaussian(std::uint64_t index) const noexcept;
  int bit(std::uint64_t index) const noexcept { return static_cast<int>(bits(index) >> 63); }

 private:
  std::uint64_t state_;
};

/// Ratio expressed in decibels (DWR, WNR).
struct DbRatio {
  double db = 0.0;

  static DbRatio infinite() noexcept;
  bool is_infinite() const noexcept;

  friend bool operator==(const DbRatio&, const DbRatio&) = default;
};

double db_to_linear(DbRatio r);
DbRatio linear_to_db(double ratio);

Signal gen_gaussian_host(std::size_t count, double sigma_s, Key key);

double empirical_power(std::span<const double> samples);

/// a - b, sample-wise.
std::vector<double> difference(std::span<const double> a, std::span<const double> b);

}  // namespace stego
