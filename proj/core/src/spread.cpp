#include "stego/spread.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stego {

SpreadParams::SpreadParams(std::size_t tau_, Key key_) : tau(tau_), key(key_) {
  if (tau == 0) throw Error(ErrorKind::InvalidParameter, "spreading factor must be >= 1");
}

double spread_sign(const SpreadParams& p, std::size_t index) {
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(p.tau));
  return KeyedStream(p.key, Stream::Spreading).bit(index) ? -magnitude : magnitude;
}

namespace {

std::vector<double> signs(const SpreadParams& p, std::size_t count) {
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(p.tau));
  const KeyedStream rng(p.key, Stream::Spreading);
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = rng.bit(i) ? -magnitude : magnitude;
  return t;
}

void require_blocks(std::size_t length, std::size_t tau) {
  if (length % tau != 0)
    throw Error(ErrorKind::LengthNotDivisible,
                "signal length " + std::to_string(length) + " is not a multiple of tau = " + std::to_string(tau));
}

std::vector<double> project(std::span<const double> s, std::span<const double> t, std::size_t tau) {
  std::vector<double> out(s.size() / tau, 0.0);
  for (std::size_t l = 0; l < out.size(); ++l) {
    double acc = 0.0;
    for (std::size_t k = 0; k < tau; ++k) acc += s[l * tau + k] * t[l * tau + k];
    out[l] = acc;
  }
  return out;
}

}  // namespace

Signal spread_project(const Signal& s, const SpreadParams& p) {
  require_blocks(s.size(), p.tau);
  const auto t = signs(p, s.size());
  return Signal(project(s.samples(), t, p.tau));
}

StScsParams StScsParams::from_dwr(double alpha, std::size_t tau, DbRatio dwr, double sigma_s, Key key,
                                  DwrReference reference) {
  SpreadParams spread(tau, key);
  DbRatio projected = dwr;
  if (reference == DwrReference::Host) projected.db -= 10.0 * std::log10(static_cast<double>(tau));
  // Block projections keep the host variance, so sigma_s also sizes the projected step.
  return StScsParams(spread, ScsParams::from_dwr(alpha, projected, sigma_s, key));
}

Signal stscs_embed(const Signal& host, const BitMessage& message, const StScsParams& p) {
  const std::size_t tau = p.spread.tau;
  require_blocks(host.size(), tau);
  if (message.size() != host.size() / tau)
    throw Error(ErrorKind::LengthMismatch, "ST-SCS needs one message bit per block of tau samples");
  const auto t = signs(p.spread, host.size());
  const Signal projected(project(host.samples(), t, tau));
  const Signal marked = scs_embed(projected, message, p.scs);
  std::vector<double> out(host.begin(), host.end());
  for (std::size_t l = 0; l < projected.size(); ++l) {
    const double change = marked[l] - projected[l];
    for (std::size_t k = 0; k < tau; ++k) out[l * tau + k] += change * t[l * tau + k];
  }
  return Signal(std::move(out));
}

std::vector<double> stscs_residuals(const Signal& received, const StScsParams& p) {
  return scs_residuals(spread_project(received, p.spread).samples(), p.scs);
}

BitMessage stscs_extract(const Signal& received, const StScsParams& p) {
  return scs_extract(spread_project(received, p.spread).samples(), p.scs);
}

double stscs_theoretical_pdf(double x, const StScsParams& p, const HostDensity& host) {
  const double tau = static_cast<double>(p.spread.tau);
  if (p.spread.tau < 2) throw Error(ErrorKind::InvalidParameter, "ST-SCS density needs tau >= 2");
  const double a = p.scs.alpha;
  const double delta = p.scs.delta.value();
  const double spacing = 0.5 * delta;
  const double gain = tau / (tau - a);
  const double half_width = (tau - a) * delta / (2.0 * tau);
  const double sigma_y = host.sigma * std::sqrt((tau - 1.0) / tau);
  const double reach = 8.0 * sigma_y;

  double acc = 0.0;
  for (double t : {1.0 / std::sqrt(tau), -1.0 / std::sqrt(tau)}) {
    const double centre = x * t;
    const auto first = static_cast<long long>(std::floor((centre - reach - half_width) / spacing));
    const auto last = static_cast<long long>(std::ceil((centre + reach + half_width) / spacing));
    for (long long n = first; n <= last; ++n) {
      const double u = spacing * static_cast<double>(n);
      const double y_lo = std::max(u - centre - half_width, -reach);
      const double y_hi = std::min(u - centre + half_width, reach);
      if (y_hi <= y_lo) continue;
      acc += integrate_fixed(
          [&](double y) {
            return gaussian_pdf(y, sigma_y) * host.pdf(gain * (x - a * u * t + a * y * t));
          },
          y_lo, y_hi);
    }
  }
  return gain * acc / 4.0;
}

}  // namespace stego
