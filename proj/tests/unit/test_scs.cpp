#include <cmath>

#include "doctest.h"
#include "stego/analysis.hpp"
#include "stego/density.hpp"
#include "stego/scs.hpp"

using namespace stego;

namespace {

// Bin masses of the SCS stego signal from the host CDF. With equiprobable
// coset offsets c in {0, delta/2}, host cell [u - delta/2, u + delta/2) maps
// monotonically onto [u - (1-a)delta/2, u + (1-a)delta/2) by x = (1-a)s + a u.
std::vector<double> scs_bins_from_cdf(double alpha, double delta, double sigma, double lo, double hi, int bins) {
  std::vector<double> mass(bins, 0.0);
  const double w = (hi - lo) / bins;
  const double half = (1 - alpha) * delta / 2;
  for (int c = 0; c < 2; ++c) {
    const double offset = c * delta / 2;
    const long n0 = static_cast<long>(std::floor((lo - 2 * delta - offset) / delta));
    const long n1 = static_cast<long>(std::ceil((hi + 2 * delta - offset) / delta));
    for (long n = n0; n <= n1; ++n) {
      const double u = n * delta + offset;
      for (int b = 0; b < bins; ++b) {
        const double a = std::max(lo + b * w, u - half);
        const double z = std::min(lo + (b + 1) * w, u + half);
        if (z <= a) continue;
        const double sa = (a - alpha * u) / (1 - alpha);
        const double sz = (z - alpha * u) / (1 - alpha);
        mass[b] += 0.5 * (gaussian_cdf(sz, sigma) - gaussian_cdf(sa, sigma));
      }
    }
  }
  return mass;
}

}  // namespace

TEST_CASE("step from DWR matches the uniform error model") {
  // sigma_w = alpha delta / sqrt(12) and DWR = 10 log10(sigma_s^2 / sigma_w^2).
  for (double alpha : {0.3, 0.7, 1.0})
    for (double dwr : {0.0, 13.0, 30.0}) {
      const double delta = delta_for_dwr(alpha, DbRatio{dwr}, 2.0).value();
      const double sigma_w = alpha * delta / std::sqrt(12.0);
      CHECK(10 * std::log10(4.0 / (sigma_w * sigma_w)) == doctest::Approx(dwr).epsilon(1e-12));
    }
  CHECK_THROWS_AS(delta_for_dwr(0.0, DbRatio{13}, 1.0), Error);
  CHECK_THROWS_AS(delta_for_dwr(0.5, DbRatio{13}, -1.0), Error);
}

TEST_CASE("params validate alpha") {
  CHECK_THROWS_AS(ScsParams(0.0, LatticeStep(1.0), Key{}), Error);
  CHECK_THROWS_AS(ScsParams(1.5, LatticeStep(1.0), Key{}), Error);
  CHECK_NOTHROW(ScsParams(1.0, LatticeStep(1.0), Key{}));
}

TEST_CASE("dither takes the values 0 and delta/2 equally often") {
  const ScsParams p(0.5, LatticeStep(2.0), Key{4});
  int half = 0;
  for (std::size_t i = 0; i < 100000; ++i) {
    const double d = scs_dither(p, i);
    REQUIRE((d == 0.0 || d == 1.0));
    half += d == 1.0;
  }
  CHECK(std::abs(half - 50000) < 5 * std::sqrt(25000.0));
}

TEST_CASE("alpha = 1 lands exactly on the message coset and decodes") {
  const auto host = gen_gaussian_host(100000, 1.0, Key{1});
  const auto msg = BitMessage::random(host.size(), Key{1});
  const auto p = ScsParams::from_dwr(1.0, DbRatio{13}, 1.0, Key{77});
  const auto x = scs_embed(host, msg, p);
  const double delta = p.delta.value();
  for (std::size_t i = 0; i < x.size(); ++i) {
    // Coset offset is (m xor k) delta/2 with k the dither bit.
    const double offset = msg[i] * delta / 2 + scs_dither(p, i);
    const double k = (x[i] - offset) / delta;
    REQUIRE(std::abs(k - std::round(k)) < 1e-9);
    REQUIRE(std::abs(x[i] - host[i]) <= delta / 2 + 1e-12);
  }
  CHECK(scs_extract(x.samples(), p) == msg);
}

TEST_CASE("no attack and alpha > 1/2 decodes without error") {
  const auto host = gen_gaussian_host(100000, 1.0, Key{2});
  const auto msg = BitMessage::random(host.size(), Key{2});
  for (double alpha : {0.6, 0.8}) {
    const auto p = ScsParams::from_dwr(alpha, DbRatio{13}, 1.0, Key{5});
    CHECK(bit_error_rate(msg, scs_extract(scs_embed(host, msg, p).samples(), p)) == 0.0);
  }
}

TEST_CASE("wrong key gives coin-flip decoding") {
  const auto host = gen_gaussian_host(100000, 1.0, Key{3});
  const auto msg = BitMessage::random(host.size(), Key{3});
  const auto p = ScsParams::from_dwr(1.0, DbRatio{13}, 1.0, Key{5});
  const auto q = ScsParams::from_dwr(1.0, DbRatio{13}, 1.0, Key{6});
  const double ber = bit_error_rate(msg, scs_extract(scs_embed(host, msg, p).samples(), q));
  CHECK(ber == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("embedding distortion") {
  const auto host = gen_gaussian_host(1000000, 1.0, Key{4});
  const auto msg = BitMessage::random(host.size(), Key{4});
  for (double alpha : {0.3, 0.7}) {
    const auto p = ScsParams::from_dwr(alpha, DbRatio{13}, 1.0, Key{8});
    const auto x = scs_embed(host, msg, p);
    const auto w = difference(x.samples(), host.samples());
    const double bound = alpha * p.delta.value() / 2;
    double worst = 0;
    for (double v : w) worst = std::max(worst, std::abs(v));
    CHECK(worst <= bound + 1e-12);
    const double expected = alpha * alpha * p.delta.value() * p.delta.value() / 12;
    CHECK(empirical_power(w) == doctest::Approx(expected).epsilon(0.02));
  }
  // Tiny alpha barely moves the host.
  const auto p = ScsParams(1e-6, LatticeStep(1.0), Key{8});
  const auto x = scs_embed(host, msg, p);
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - host[i]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("length mismatch") {
  const auto host = gen_gaussian_host(10, 1.0, Key{1});
  const auto msg = BitMessage::random(9, Key{1});
  CHECK_THROWS_AS(scs_embed(host, msg, ScsParams(0.5, LatticeStep(1.0), Key{})), Error);
}

TEST_CASE("residuals lie in [-delta/2, delta/2)") {
  const auto host = gen_gaussian_host(10000, 1.0, Key{1});
  const auto p = ScsParams::from_dwr(0.4, DbRatio{13}, 1.0, Key{2});
  for (double r : scs_residuals(host.samples(), p)) {
    REQUIRE(r >= -p.delta.value() / 2);
    REQUIRE(r < p.delta.value() / 2);
  }
}

TEST_CASE("oracle agrees with the CDF construction bin by bin") {
  for (double alpha : {0.3, 0.7}) {
    const auto p = ScsParams::from_dwr(alpha, DbRatio{13}, 1.0, Key{});
    const auto host = HostDensity::gaussian(1.0);
    const auto bp = scs_pdf_breakpoints(p, -5, 5);
    const auto oracle = integrate_bins([&](double x) { return scs_theoretical_pdf(x, p, host); }, -5, 5, 200, bp, 2);
    const auto cdf = scs_bins_from_cdf(alpha, p.delta.value(), 1.0, -5, 5, 200);
    double worst = 0;
    for (int b = 0; b < 200; ++b) worst = std::max(worst, std::abs(oracle[b] - cdf[b]));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("oracle integrates to one") {
  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.95}) {
    const auto p = ScsParams::from_dwr(alpha, DbRatio{13}, 1.0, Key{});
    const auto bp = scs_pdf_breakpoints(p, -8, 8);
    const auto host = HostDensity::gaussian(1.0);
    const auto mass = integrate_bins([&](double x) { return scs_theoretical_pdf(x, p, host); }, -8, 8, 400, bp, 1);
    double total = 0;
    for (double m : mass) total += m;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("window overlap below alpha 1/2, gaps above") {
  const auto host = HostDensity::gaussian(1.0);
  const auto low = ScsParams::from_dwr(0.3, DbRatio{13}, 1.0, Key{});
  for (double x = -3; x <= 3; x += 0.001) REQUIRE(scs_theoretical_pdf(x, low, host) > 0.0);

  const auto high = ScsParams::from_dwr(0.7, DbRatio{13}, 1.0, Key{});
  const double d = high.delta.value();
  // Midway between neighbouring union-lattice points lies outside every window.
  int zeros = 0;
  for (int n = -10; n <= 10; ++n) {
    const double gap = n * d / 2 + d / 4;
    zeros += scs_theoretical_pdf(gap, high, host) == 0.0;
  }
  CHECK(zeros == 21);
  CHECK_THROWS_AS(scs_theoretical_pdf(0.0, ScsParams(1.0, LatticeStep(1.0), Key{}), host), Error);
}

TEST_CASE("empirical density matches the oracle") {
  const auto host = gen_gaussian_host(1000000, 1.0, Key{21});
  const auto msg = BitMessage::random(host.size(), Key{21});
  const auto p = ScsParams::from_dwr(0.3, DbRatio{13}, 1.0, Key{21});
  const auto x = scs_embed(host, msg, p);
  const auto hist = build_histogram(x.samples(), -5, 5, 200);
  const auto oracle = Histogram(-5, 5, scs_bins_from_cdf(0.3, p.delta.value(), 1.0, -5, 5, 200));
  CHECK(l1_distance(hist, oracle) < 0.02);
}
