#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stego/density.hpp"
#include "stego/message.hpp"
#include "stego/quantizer.hpp"
#include "stego/signal.hpp"

namespace stego {

using State = std::uint32_t;

/// Binary trellis with a state- and bit-dependent dither.
///
/// Dithers are stored as fractions of the lattice step, so one trellis serves
/// any delta: the codebook of branch (e, m) is {(n + dither_fraction(e, m)) * delta}.
class Trellis {
 public:
  struct Branch {
    State from;
    std::uint8_t bit;
  };

  /// Validates: distinct successors per state, exactly two incoming branches
  /// per state, dither fractions within [-1/2, 1/2].
  Trellis(int state_bits, std::vector<std::array<State, 2>> next,
          std::vector<std::array<double, 2>> dither_fraction);

  int state_bits() const noexcept { return state_bits_; }
  std::size_t states() const noexcept { return next_.size(); }
  State next(State e, int bit) const noexcept { return next_[e][bit]; }
  double dither_fraction(State e, int bit) const noexcept { return dither_[e][bit]; }
  double dither(State e, int bit, LatticeStep delta) const noexcept {
    return dither_[e][bit] * delta.value();
  }
  std::span<const Branch, 2> incoming(State e) const noexcept {
    return std::span<const Branch, 2>(incoming_[e]);
  }

 private:
  int state_bits_;
  std::vector<std::array<State, 2>> next_;
  std::vector<std::array<double, 2>> dither_;
  std::vector<std::array<Branch, 2>> incoming_;
};

/// Shift-register trellis on N = 2^r states: tr(e, b) = (2e + b) mod N.
/// State e (1-based index i = e + 1) gets dither (m/2 - i/N) for i <= N/2 and
/// repeats the dither of state i - N/2 above that.
Trellis build_trellis(int state_bits);

struct TcqParams {
  double alpha;
  LatticeStep delta;
  Trellis trellis;
  State initial_state = 0;

  TcqParams(double alpha, LatticeStep delta, Trellis trellis, State initial_state = 0);

  static TcqParams from_dwr(double alpha, DbRatio dwr, double sigma_s, int state_bits);
};

/// Nearest point of {n*delta + offset}; only the two lattice indices around v
/// are examined.
double nearest_codeword(double v, double offset, LatticeStep delta) noexcept;

/// Surviving Viterbi path. `states` has one more entry than `bits`.
struct TrellisPath {
  std::vector<State> states;
  std::vector<std::uint8_t> bits;
  std::vector<double> codewords;
  double cost = 0.0;
};

/// Minimum squared-distance path that starts in `initial` and only follows
/// branches labelled with the message bits.
TrellisPath viterbi_constrained(std::span<const double> observed, const Trellis& trellis,
                                LatticeStep delta, const BitMessage& labels, State initial);

/// Minimum squared-distance path over all start states and branch labels.
TrellisPath viterbi_free(std::span<const double> observed, const Trellis& trellis, LatticeStep delta);

Signal tcq_embed(const Signal& host, const BitMessage& message, const TcqParams& p);

BitMessage tcq_extract(std::span<const double> received, const TcqParams& p);

/// Smoothing-integral density: (1/(alpha delta)) * integral of p_S over
/// [x - alpha delta/2, x + alpha delta/2].
double tcq_theoretical_pdf(double x, const TcqParams& p, const HostDensity& host);

}  // namespace stego
