#include "stego/scs.hpp"

#include <cmath>
#include <string>

namespace stego {

BitMessage::BitMessage(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > 1)
      throw Error(ErrorKind::InvalidParameter, "message bit at " + std::to_string(i) + " is not 0/1");
  }
}

BitMessage BitMessage::random(std::size_t count, Key key) {
  const KeyedStream rng(key, Stream::Message);
  std::vector<std::uint8_t> bits(count);
  for (std::size_t i = 0; i < count; ++i) bits[i] = static_cast<std::uint8_t>(rng.bit(i));
  return BitMessage(std::move(bits));
}

double bit_error_rate(const BitMessage& sent, const BitMessage& received) {
  if (sent.size() != received.size())
    throw Error(ErrorKind::LengthMismatch, "bit error rate of unequal-length messages");
  if (sent.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) errors += sent[i] != received[i];
  return static_cast<double>(errors) / static_cast<double>(sent.size());
}

ScsParams::ScsParams(double alpha_, LatticeStep delta_, Key key_)
    : alpha(alpha_), delta(delta_), key(key_) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(ErrorKind::InvalidParameter, "alpha must lie in (0, 1]");
}

LatticeStep delta_for_dwr(double alpha, DbRatio dwr, double sigma_s) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidParameter, "alpha must lie in (0, 1]");
  if (!(sigma_s > 0.0)) throw Error(ErrorKind::InvalidParameter, "sigma_s must be positive");
  if (!std::isfinite(dwr.db)) throw Error(ErrorKind::InvalidParameter, "DWR must be finite");
  return LatticeStep(sigma_s / alpha * std::sqrt(12.0) * std::pow(10.0, -dwr.db / 20.0));
}

ScsParams ScsParams::from_dwr(double alpha, DbRatio dwr, double sigma_s, Key key) {
  return ScsParams(alpha, delta_for_dwr(alpha, dwr, sigma_s), key);
}

double scs_dither(const ScsParams& p, std::size_t index) {
  return 0.5 * p.delta.value() * static_cast<double>(KeyedStream(p.key, Stream::Dither).bit(index));
}

Signal scs_embed(const Signal& host, const BitMessage& message, const ScsParams& p) {
  if (message.size() != host.size())
    throw Error(ErrorKind::LengthMismatch, "SCS needs one message bit per host sample");
  const double d = p.delta.value();
  const KeyedStream dither(p.key, Stream::Dither);
  std::vector<double> out(host.size());
  for (std::size_t i = 0; i < host.size(); ++i) {
    const double offset = 0.5 * d * static_cast<double>(message[i] ^ dither.bit(i));
    const double u = quantize(host[i] - offset, p.delta) + offset;
    out[i] = (1.0 - p.alpha) * host[i] + p.alpha * u;
  }
  return Signal(std::move(out));
}

std::vector<double> scs_residuals(std::span<const double> received, const ScsParams& p) {
  const double half = 0.5 * p.delta.value();
  const KeyedStream dither(p.key, Stream::Dither);
  std::vector<double> r(received.size());
  for (std::size_t i = 0; i < received.size(); ++i)
    r[i] = mod_residual(received[i] - half * static_cast<double>(dither.bit(i)), p.delta);
  return r;
}

BitMessage scs_extract(std::span<const double> received, const ScsParams& p) {
  if (received.empty()) throw Error(ErrorKind::InvalidParameter, "nothing to extract");
  const double quarter = 0.25 * p.delta.value();
  const auto r = scs_residuals(received, p);
  std::vector<std::uint8_t> bits(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) bits[i] = std::abs(r[i]) < quarter ? 0 : 1;
  return BitMessage(std::move(bits));
}

double scs_theoretical_pdf(double x, const ScsParams& p, const HostDensity& host) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    throw Error(ErrorKind::InvalidParameter, "SCS density needs 0 < alpha < 1");
  const double a = p.alpha;
  const double spacing = 0.5 * p.delta.value();
  const double half_width = 0.5 * (1.0 - a) * p.delta.value();
  const auto first = static_cast<long long>(std::ceil((x - half_width) / spacing));
  const auto last = static_cast<long long>(std::floor((x + half_width) / spacing));
  double acc = 0.0;
  for (long long n = first; n <= last; ++n) {
    const double u = spacing * static_cast<double>(n);
    if (std::abs(x - u) > half_width) continue;
    acc += host.pdf((x - a * u) / (1.0 - a));
  }
  return acc / (2.0 * (1.0 - a));
}

std::vector<double> scs_pdf_breakpoints(const ScsParams& p, double lo, double hi) {
  const double spacing = 0.5 * p.delta.value();
  const double half_width = 0.5 * (1.0 - p.alpha) * p.delta.value();
  std::vector<double> out;
  const auto first = static_cast<long long>(std::floor((lo - half_width) / spacing)) - 1;
  const auto last = static_cast<long long>(std::ceil((hi + half_width) / spacing)) + 1;
  for (long long n = first; n <= last; ++n) {
    const double u = spacing * static_cast<double>(n);
    for (double edge : {u - half_width, u + half_width})
      if (edge >= lo && edge <= hi) out.push_back(edge);
  }
  return out;
}

}  // namespace stego
