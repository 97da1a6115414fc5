#include <cmath>
#include <limits>

#include "doctest.h"
#include "stego/analysis.hpp"
#include "stego/density.hpp"
#include "stego/tcq.hpp"

using namespace stego;

namespace {

// Squared distance to {n delta + f delta}, scanning n over a wide window.
double brute_metric(double v, double f, double delta) {
  const long c = static_cast<long>(std::floor(v / delta));
  double best = std::numeric_limits<double>::infinity();
  for (long n = c - 4; n <= c + 4; ++n) {
    const double diff = v - (static_cast<double>(n) * delta + f * delta);
    best = std::min(best, diff * diff);
  }
  return best;
}

double path_cost(const std::vector<double>& obs, const Trellis& t, double delta, State start, unsigned labels) {
  double cost = 0.0;
  State e = start;
  for (std::size_t j = 0; j < obs.size(); ++j) {
    const int b = (labels >> j) & 1U;
    cost += brute_metric(obs[j], t.dither_fraction(e, b), delta);
    e = t.next(e, b);
  }
  return cost;
}

}  // namespace

TEST_CASE("shift-register trellis with r = 2") {
  const auto t = build_trellis(2);
  CHECK(t.states() == 4);
  for (State e = 0; e < 4; ++e)
    for (int b = 0; b < 2; ++b) CHECK(t.next(e, b) == (2 * e + b) % 4);
  const LatticeStep d(1.0);
  CHECK(t.dither(0, 0, d) == -0.25);
  CHECK(t.dither(1, 0, d) == -0.5);
  CHECK(t.dither(2, 0, d) == -0.25);
  CHECK(t.dither(3, 0, d) == -0.5);
  for (State e = 0; e < 4; ++e) CHECK(t.dither(e, 1, d) - t.dither(e, 0, d) == 0.5);
}

TEST_CASE("trellis invariants for every supported size") {
  for (int r = 2; r <= 10; ++r) {
    const auto t = build_trellis(r);
    REQUIRE(t.states() == (std::size_t{1} << r));
    std::vector<int> incoming(t.states(), 0);
    for (State e = 0; e < t.states(); ++e)
      for (int b = 0; b < 2; ++b) {
        ++incoming[t.next(e, b)];
        REQUIRE(std::abs(t.dither_fraction(e, b)) <= 0.5);
      }
    for (int c : incoming) REQUIRE(c == 2);
  }
  CHECK_THROWS_AS(build_trellis(1), Error);
  CHECK_THROWS_AS(build_trellis(21), Error);
}

TEST_CASE("trellis constructor rejects bad tables") {
  using Next = std::vector<std::array<State, 2>>;
  using Dither = std::vector<std::array<double, 2>>;
  CHECK_THROWS_AS(Trellis(1, Next{{0, 0}, {1, 0}}, Dither{{0, 0}, {0, 0}}), Error);
  CHECK_THROWS_AS(Trellis(1, Next{{0, 1}, {0, 2}}, Dither{{0, 0}, {0, 0}}), Error);
  CHECK_THROWS_AS(Trellis(1, Next{{0, 1}, {0, 1}}, Dither{{0, 0.7}, {0, 0}}), Error);
  CHECK_NOTHROW(Trellis(1, Next{{0, 1}, {0, 1}}, Dither{{0, 0.5}, {-0.5, 0}}));
}

TEST_CASE("nearest codeword checks both neighbours") {
  const LatticeStep d(1.0);
  CHECK(nearest_codeword(0.3, 0.0, d) == 0.0);
  CHECK(nearest_codeword(0.7, 0.0, d) == 1.0);
  CHECK(nearest_codeword(0.7, 0.25, d) == 0.25);
  CHECK(nearest_codeword(-0.7, -0.25, d) == -0.25);
  CHECK(nearest_codeword(-0.9, 0.25, d) == -0.75);
}

TEST_CASE("viterbi cost equals exhaustive enumeration") {
  const auto t = build_trellis(2);
  const KeyedStream rng(Key{31}, Stream::Host);
  std::uint64_t draw = 0;
  for (int instance = 0; instance < 1000; ++instance) {
    const std::size_t g = 1 + instance % 12;
    const double delta = 0.2 + 2.0 * rng.uniform(draw++);
    std::vector<double> obs(g);
    for (auto& v : obs) v = 3.0 * rng.gaussian(draw++);
    const auto labels_word = static_cast<unsigned>(rng.bits(draw++) & ((1U << g) - 1));
    std::vector<std::uint8_t> bits(g);
    for (std::size_t j = 0; j < g; ++j) bits[j] = (labels_word >> j) & 1U;
    const State start = static_cast<State>(rng.bits(draw++) % 4);

    const auto constrained = viterbi_constrained(obs, t, LatticeStep(delta), BitMessage(bits), start);
    REQUIRE(constrained.cost == path_cost(obs, t, delta, start, labels_word));

    double best = std::numeric_limits<double>::infinity();
    for (State s = 0; s < 4; ++s)
      for (unsigned w = 0; w < (1U << g); ++w) best = std::min(best, path_cost(obs, t, delta, s, w));
    const auto free = viterbi_free(obs, t, LatticeStep(delta));
    REQUIRE(free.cost == best);

    // The traceback is a valid path with that cost.
    unsigned w = 0;
    for (std::size_t j = 0; j < g; ++j) {
      REQUIRE(t.next(free.states[j], free.bits[j]) == free.states[j + 1]);
      w |= unsigned(free.bits[j]) << j;
    }
    REQUIRE(path_cost(obs, t, delta, free.states[0], w) == best);
  }
}

TEST_CASE("constrained viterbi validates input") {
  const auto t = build_trellis(3);
  const std::vector<double> obs{0.1, 0.2};
  CHECK_THROWS_AS(viterbi_constrained(obs, t, LatticeStep(1.0), BitMessage({0}), 0), Error);
  CHECK_THROWS_AS(viterbi_constrained(obs, t, LatticeStep(1.0), BitMessage({0, 1}), 8), Error);
}

TEST_CASE("alpha = 1 round trip and the no-attack regime") {
  const auto host = gen_gaussian_host(100000, 1.0, Key{2});
  const auto msg = BitMessage::random(host.size(), Key{2});
  const auto p = TcqParams::from_dwr(1.0, DbRatio{13}, 1.0, 6);
  const auto x = tcq_embed(host, msg, p);
  CHECK(tcq_extract(x.samples(), p) == msg);
  const auto q = TcqParams::from_dwr(0.7, DbRatio{13}, 1.0, 6);
  CHECK(bit_error_rate(msg, tcq_extract(tcq_embed(host, msg, q).samples(), q)) < 1e-3);
}

TEST_CASE("embedding distortion follows alpha^2 delta^2 / 12") {
  const auto host = gen_gaussian_host(200000, 1.0, Key{3});
  const auto msg = BitMessage::random(host.size(), Key{3});
  const auto p = TcqParams::from_dwr(0.5, DbRatio{13}, 1.0, 6);
  const auto w = difference(tcq_embed(host, msg, p).samples(), host.samples());
  const double d = p.delta.value();
  CHECK(empirical_power(w) == doctest::Approx(0.25 * d * d / 12).epsilon(0.02));
}

TEST_CASE("embedding path visits states uniformly") {
  const int r = 4;
  const auto host = gen_gaussian_host(160000, 1.0, Key{4});
  const auto msg = BitMessage::random(host.size(), Key{4});
  const auto p = TcqParams::from_dwr(0.5, DbRatio{13}, 1.0, r);
  const auto path = viterbi_constrained(host.samples(), p.trellis, p.delta, msg, 0);
  std::vector<double> count(1 << r, 0.0);
  for (std::size_t j = r; j < path.states.size(); ++j) count[path.states[j]] += 1;
  const double expected = static_cast<double>(path.states.size() - r) / (1 << r);
  double chi2 = 0;
  for (double c : count) chi2 += (c - expected) * (c - expected) / expected;
  // 15 degrees of freedom; 0.001 upper quantile is 37.7.
  CHECK(chi2 < 37.7);
}

TEST_CASE("extraction needs r samples and matching lengths") {
  const auto p = TcqParams::from_dwr(0.5, DbRatio{13}, 1.0, 6);
  CHECK_THROWS_AS(tcq_extract(std::vector<double>{0.0, 1.0}, p), Error);
  const auto host = gen_gaussian_host(10, 1.0, Key{1});
  CHECK_THROWS_AS(tcq_embed(host, BitMessage::random(9, Key{1}), p), Error);
  CHECK_THROWS_AS(TcqParams(0.0, LatticeStep(1.0), build_trellis(2)), Error);
  CHECK_THROWS_AS(TcqParams(0.5, LatticeStep(1.0), build_trellis(2), 4), Error);
}

TEST_CASE("oracle equals the uniform-kernel convolution of the host") {
  for (double alpha : {0.3, 0.7}) {
    const auto p = TcqParams::from_dwr(alpha, DbRatio{13}, 1.0, 6);
    const double w = alpha * p.delta.value();
    const auto host = HostDensity::gaussian(1.0);
    double worst = 0;
    for (double x = -5; x <= 5; x += 0.01) {
      const double closed = (gaussian_cdf(x + w / 2, 1.0) - gaussian_cdf(x - w / 2, 1.0)) / w;
      worst = std::max(worst, std::abs(tcq_theoretical_pdf(x, p, host) - closed));
    }
    CHECK(worst < 1e-6);
  }
  // A uniform host on [-1, 1] convolved with a width-w box is a trapezoid.
  const auto p = TcqParams(1.0, LatticeStep(0.5), build_trellis(2));
  const auto host = HostDensity::uniform(-1.0, 1.0);
  const double w = 0.5;
  for (double x = -2; x <= 2; x += 0.01) {
    const double overlap = std::max(0.0, std::min(1.0, x + w / 2) - std::max(-1.0, x - w / 2));
    REQUIRE(tcq_theoretical_pdf(x, p, host) == doctest::Approx(0.5 * overlap / w).epsilon(1e-6));
  }
}

TEST_CASE("empirical density matches the oracle") {
  const auto host = gen_gaussian_host(1000000, 1.0, Key{5});
  const auto msg = BitMessage::random(host.size(), Key{5});
  for (double alpha : {0.3, 0.7}) {
    const auto p = TcqParams::from_dwr(alpha, DbRatio{13}, 1.0, 6);
    const auto x = tcq_embed(host, msg, p);
    const auto h = HostDensity::gaussian(1.0);
    const auto oracle = oracle_histogram([&](double v) { return tcq_theoretical_pdf(v, p, h); }, -5, 5, 200);
    CHECK(l1_distance(build_histogram(x.samples(), -5, 5, 200), oracle) < 0.02);
  }
}
