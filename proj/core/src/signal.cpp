#include "stego/signal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace stego {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::LengthNotDivisible: return "length-not-divisible";
    case ErrorKind::SupportMismatch: return "support-mismatch";
    case ErrorKind::InsufficientTrials: return "insufficient-trials";
    case ErrorKind::MalformedHeader: return "malformed-header";
    case ErrorKind::TruncatedPayload: return "truncated-payload";
    case ErrorKind::UnsupportedMaxval: return "unsupported-maxval";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Signal::Signal(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw Error(ErrorKind::InvalidParameter, "signal must hold at least one sample");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i]))
      throw Error(ErrorKind::InvalidParameter, "non-finite sample at index " + std::to_string(i));
  }
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Key Key::derive(std::uint64_t tag) const noexcept {
  return Key{mix64(mix64(seed ^ 0xD1B54A32D192ED03ULL) + tag * kGolden)};
}

KeyedStream::KeyedStream(Key key, Stream stream) noexcept
    : state_(mix64(key.seed + mix64(static_cast<std::uint64_t>(stream) * kGolden))) {}

std::uint64_t KeyedStream::bits(std::uint64_t index) const noexcept {
  // SplitMix64 jumped straight to position `index`.
  return mix64(state_ + (index + 1) * kGolden);
}

double KeyedStream::uniform(std::uint64_t index) const noexcept {
  return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
}

double KeyedStream::gaussian(std::uint64_t index) const noexcept {
  const double u1 = 1.0 - uniform(2 * index);  // (0, 1]
  const double u2 = uniform(2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DbRatio DbRatio::infinite() noexcept { return DbRatio{std::numeric_limits<double>::infinity()}; }

bool DbRatio::is_infinite() const noexcept { return std::isinf(db) && db > 0; }

double db_to_linear(DbRatio r) {
  if (std::isnan(r.db)) throw Error(ErrorKind::InvalidParameter, "decibel value is NaN");
  return std::pow(10.0, r.db / 10.0);
}

DbRatio linear_to_db(double ratio) {
  if (!(ratio > 0.0) || std::isnan(ratio))
    throw Error(ErrorKind::InvalidParameter, "linear ratio must be positive");
  return DbRatio{10.0 * std::log10(ratio)};
}

Signal gen_gaussian_host(std::size_t count, double sigma_s, Key key) {
  if (count == 0) throw Error(ErrorKind::InvalidParameter, "host length must be >= 1");
  if (!(sigma_s > 0.0) || !std::isfinite(sigma_s))
    throw Error(ErrorKind::InvalidParameter, "sigma_s must be positive and finite");
  const KeyedStream rng(key, Stream::Host);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = sigma_s * rng.gaussian(i);
  return Signal(std::move(out));
}

double empirical_power(std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorKind::InvalidParameter, "power of an empty signal");
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return acc / static_cast<double>(samples.size());
}

std::vector<double> difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "difference of unequal lengths");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace stego
