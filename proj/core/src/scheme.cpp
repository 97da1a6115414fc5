#include "stego/scheme.hpp"

#include <string>

namespace stego {

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::Scs: return "scs";
    case Scheme::Tcq: return "tcq";
    case Scheme::StScs: return "stscs";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "scs" || name == "SCS") return Scheme::Scs;
  if (name == "tcq" || name == "TCQ") return Scheme::Tcq;
  if (name == "stscs" || name == "st-scs" || name == "ST-SCS") return Scheme::StScs;
  throw Error(ErrorKind::InvalidParameter, "unknown scheme '" + std::string(name) + "'");
}

ScsParams scs_params(const SchemeSpec& spec, Key key) {
  return ScsParams::from_dwr(spec.alpha, spec.dwr, spec.sigma_s, key);
}

TcqParams tcq_params(const SchemeSpec& spec) {
  return TcqParams::from_dwr(spec.alpha, spec.dwr, spec.sigma_s, spec.trellis_bits);
}

StScsParams stscs_params(const SchemeSpec& spec, Key key) {
  return StScsParams::from_dwr(spec.alpha, spec.tau, spec.dwr, spec.sigma_s, key, spec.dwr_reference);
}

std::size_t message_length(const SchemeSpec& spec, std::size_t host_length) {
  const std::size_t per = spec.samples_per_bit();
  if (per == 0 || host_length % per != 0)
    throw Error(ErrorKind::LengthNotDivisible, "host length is not a whole number of blocks");
  return host_length / per;
}

Signal embed(const SchemeSpec& spec, const Signal& host, const BitMessage& message, Key key) {
  switch (spec.scheme) {
    case Scheme::Scs: return scs_embed(host, message, scs_params(spec, key));
    case Scheme::Tcq: return tcq_embed(host, message, tcq_params(spec));
    case Scheme::StScs: return stscs_embed(host, message, stscs_params(spec, key));
  }
  throw Error(ErrorKind::InvalidParameter, "unknown scheme");
}

BitMessage extract(const SchemeSpec& spec, const Signal& received, Key key) {
  switch (spec.scheme) {
    case Scheme::Scs: return scs_extract(received.samples(), scs_params(spec, key));
    case Scheme::Tcq: return tcq_extract(received.samples(), tcq_params(spec));
    case Scheme::StScs: return stscs_extract(received, stscs_params(spec, key));
  }
  throw Error(ErrorKind::InvalidParameter, "unknown scheme");
}

LatticeStep decision_step(const SchemeSpec& spec) {
  switch (spec.scheme) {
    case Scheme::Scs: return scs_params(spec, Key{}).delta;
    case Scheme::Tcq: return tcq_params(spec).delta;
    case Scheme::StScs: return stscs_params(spec, Key{}).scs.delta;
  }
  throw Error(ErrorKind::InvalidParameter, "unknown scheme");
}

std::vector<double> decision_residuals(const SchemeSpec& spec, const Signal& received, Key key) {
  switch (spec.scheme) {
    case Scheme::Scs: return scs_residuals(received.samples(), scs_params(spec, key));
    case Scheme::StScs: return stscs_residuals(received, stscs_params(spec, key));
    case Scheme::Tcq: break;
  }
  throw Error(ErrorKind::InvalidParameter, "TCQ has no per-sample decision statistic");
}

}  // namespace stego
