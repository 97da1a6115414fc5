#include "stego/tcq.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "stego/scs.hpp"

namespace stego {

Trellis::Trellis(int state_bits, std::vector<std::array<State, 2>> next,
                 std::vector<std::array<double, 2>> dither_fraction)
    : state_bits_(state_bits), next_(std::move(next)), dither_(std::move(dither_fraction)) {
  const std::size_t n = next_.size();
  if (n < 2 || dither_.size() != n)
    throw Error(ErrorKind::InvalidParameter, "trellis tables must cover at least two states");
  std::vector<std::size_t> fill(n, 0);
  incoming_.assign(n, {Branch{0, 0}, Branch{0, 0}});
  for (State e = 0; e < n; ++e) {
    if (next_[e][0] >= n || next_[e][1] >= n)
      throw Error(ErrorKind::InvalidParameter, "transition leaves the state set");
    if (next_[e][0] == next_[e][1])
      throw Error(ErrorKind::InvalidParameter, "state " + std::to_string(e) + " has indistinguishable branches");
    for (int b = 0; b < 2; ++b) {
      if (!(std::abs(dither_[e][b]) <= 0.5))
        throw Error(ErrorKind::InvalidParameter, "dither outside [-delta/2, delta/2]");
      const State to = next_[e][b];
      if (fill[to] == 2)
        throw Error(ErrorKind::InvalidParameter, "state " + std::to_string(to) + " has more than two incoming branches");
      incoming_[to][fill[to]++] = Branch{e, static_cast<std::uint8_t>(b)};
    }
  }
  for (State e = 0; e < n; ++e) {
    if (fill[e] != 2)
      throw Error(ErrorKind::InvalidParameter, "state " + std::to_string(e) + " lacks two incoming branches");
  }
}

Trellis build_trellis(int state_bits) {
  if (state_bits < 2 || state_bits > 20)
    throw Error(ErrorKind::InvalidParameter, "trellis needs 2 <= r <= 20 state bits");
  const State n = State{1} << state_bits;
  std::vector<std::array<State, 2>> next(n);
  std::vector<std::array<double, 2>> dither(n);
  for (State e = 0; e < n; ++e) {
    next[e] = {(2 * e) % n, (2 * e + 1) % n};
    // 1-based index folded onto the lower half of the states.
    const State i = (e % (n / 2)) + 1;
    const double shift = static_cast<double>(i) / static_cast<double>(n);
    dither[e] = {0.0 - shift, 0.5 - shift};
  }
  return Trellis(state_bits, std::move(next), std::move(dither));
}

TcqParams::TcqParams(double alpha_, LatticeStep delta_, Trellis trellis_, State initial_state_)
    : alpha(alpha_), delta(delta_), trellis(std::move(trellis_)), initial_state(initial_state_) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidParameter, "alpha must lie in (0, 1]");
  if (initial_state >= trellis.states()) throw Error(ErrorKind::InvalidParameter, "initial state out of range");
}

TcqParams TcqParams::from_dwr(double alpha, DbRatio dwr, double sigma_s, int state_bits) {
  return TcqParams(alpha, delta_for_dwr(alpha, dwr, sigma_s), build_trellis(state_bits));
}

double nearest_codeword(double v, double offset, LatticeStep delta) noexcept {
  const double d = delta.value();
  const double n0 = std::floor((v - offset) / d);
  const double lo = n0 * d + offset;
  const double hi = (n0 + 1.0) * d + offset;
  return (v - lo) * (v - lo) <= (v - hi) * (v - hi) ? lo : hi;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared forward pass. labels == nullptr means both branch labels are allowed.
TrellisPath run_viterbi(std::span<const double> observed, const Trellis& trellis, LatticeStep delta,
                        const BitMessage* labels, const State* initial) {
  const std::size_t n = trellis.states();
  const std::size_t steps = observed.size();
  const std::size_t words = (n + 63) / 64;

  std::vector<double> cost(n, initial ? kInf : 0.0);
  if (initial) cost[*initial] = 0.0;
  std::vector<double> next_cost(n);
  std::vector<std::array<double, 2>> metric(n);
  std::vector<std::uint64_t> decisions(steps * words, 0);

  for (std::size_t j = 0; j < steps; ++j) {
    const double v = observed[j];
    for (State e = 0; e < n; ++e) {
      for (int b = 0; b < 2; ++b) {
        if (labels && (*labels)[j] != b) {
          metric[e][b] = kInf;
          continue;
        }
        const double diff = v - nearest_codeword(v, trellis.dither(e, b, delta), delta);
        metric[e][b] = diff * diff;
      }
    }
    std::uint64_t* row = decisions.data() + j * words;
    for (State to = 0; to < n; ++to) {
      const auto in = trellis.incoming(to);
      const double c0 = cost[in[0].from] + metric[in[0].from][in[0].bit];
      const double c1 = cost[in[1].from] + metric[in[1].from][in[1].bit];
      if (c1 < c0) {
        next_cost[to] = c1;
        row[to / 64] |= std::uint64_t{1} << (to % 64);
      } else {
        next_cost[to] = c0;
      }
    }
    cost.swap(next_cost);
  }

  State best = 0;
  for (State e = 1; e < n; ++e)
    if (cost[e] < cost[best]) best = e;

  TrellisPath path;
  path.cost = cost[best];
  path.states.resize(steps + 1);
  path.bits.resize(steps);
  path.codewords.resize(steps);
  State e = best;
  path.states[steps] = e;
  for (std::size_t j = steps; j-- > 0;) {
    const bool second = (decisions[j * words + e / 64] >> (e % 64)) & 1U;
    const auto& branch = trellis.incoming(e)[second ? 1 : 0];
    path.bits[j] = branch.bit;
    e = branch.from;
    path.states[j] = e;
    path.codewords[j] = nearest_codeword(observed[j], trellis.dither(e, branch.bit, delta), delta);
  }
  return path;
}

}  // namespace

TrellisPath viterbi_constrained(std::span<const double> observed, const Trellis& trellis,
                                LatticeStep delta, const BitMessage& labels, State initial) {
  if (labels.size() != observed.size())
    throw Error(ErrorKind::LengthMismatch, "one branch label per observation required");
  if (initial >= trellis.states()) throw Error(ErrorKind::InvalidParameter, "initial state out of range");
  return run_viterbi(observed, trellis, delta, &labels, &initial);
}

TrellisPath viterbi_free(std::span<const double> observed, const Trellis& trellis, LatticeStep delta) {
  return run_viterbi(observed, trellis, delta, nullptr, nullptr);
}

Signal tcq_embed(const Signal& host, const BitMessage& message, const TcqParams& p) {
  if (message.size() != host.size())
    throw Error(ErrorKind::LengthMismatch, "TCQ needs one message bit per host sample");
  const auto path = viterbi_constrained(host.samples(), p.trellis, p.delta, message, p.initial_state);
  std::vector<double> out(host.size());
  for (std::size_t j = 0; j < host.size(); ++j)
    out[j] = (1.0 - p.alpha) * host[j] + p.alpha * path.codewords[j];
  return Signal(std::move(out));
}

BitMessage tcq_extract(std::span<const double> received, const TcqParams& p) {
  if (received.size() < static_cast<std::size_t>(p.trellis.state_bits()))
    throw Error(ErrorKind::InvalidParameter, "TCQ extraction needs at least r samples");
  auto path = viterbi_free(received, p.trellis, p.delta);
  return BitMessage(std::move(path.bits));
}

double tcq_theoretical_pdf(double x, const TcqParams& p, const HostDensity& host) {
  const double width = p.alpha * p.delta.value();
  double a = x - 0.5 * width, total = 0.0;
  const double b = x + 0.5 * width;
  for (double k : host.kinks)
    if (k > a && k < b) {
      total += integrate(host.pdf, a, k);
      a = k;
    }
  return (total + integrate(host.pdf, a, b)) / width;
}

}  // namespace stego
