#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "stego/message.hpp"
#include "stego/quantizer.hpp"
#include "stego/scs.hpp"
#include "stego/signal.hpp"
#include "stego/spread.hpp"
#include "stego/tcq.hpp"

namespace stego {

enum class Scheme { Scs, Tcq, StScs };

std::string_view to_string(Scheme scheme) noexcept;
Scheme parse_scheme(std::string_view name);

/// Uniform description of one operating point of any of the three schemes.
/// Keys are supplied separately so the same spec can be replayed under many.
struct SchemeSpec {
  Scheme scheme = Scheme::Scs;
  double alpha = 0.3;
  DbRatio dwr{13.0};
  std::size_t tau = 2;    // ST-SCS only
  int trellis_bits = 6;   // TCQ only
  double sigma_s = 1.0;
  DwrReference dwr_reference = DwrReference::Projected;

  /// Host samples consumed per message bit.
  std::size_t samples_per_bit() const noexcept { return scheme == Scheme::StScs ? tau : 1; }
};

ScsParams scs_params(const SchemeSpec& spec, Key key);
TcqParams tcq_params(const SchemeSpec& spec);
StScsParams stscs_params(const SchemeSpec& spec, Key key);

std::size_t message_length(const SchemeSpec& spec, std::size_t host_length);

Signal embed(const SchemeSpec& spec, const Signal& host, const BitMessage& message, Key key);
BitMessage extract(const SchemeSpec& spec, const Signal& received, Key key);

/// Step of the lattice the decision statistic lives on (projected for ST-SCS).
LatticeStep decision_step(const SchemeSpec& spec);

/// Per-bit dither-removed residuals; SCS and ST-SCS only.
std::vector<double> decision_residuals(const SchemeSpec& spec, const Signal& received, Key key);

}  // namespace stego
