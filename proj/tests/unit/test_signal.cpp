#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "stego/signal.hpp"

using namespace stego;

TEST_CASE("signal rejects empty and non-finite input") {
  CHECK_THROWS_AS(Signal(std::vector<double>{}), Error);
  CHECK_THROWS_AS(Signal(std::vector<double>{1.0, std::nan("")}), Error);
  CHECK_THROWS_AS(Signal(std::vector<double>{std::numeric_limits<double>::infinity()}), Error);
  try {
    Signal(std::vector<double>{});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
  const Signal s({1.0, -2.0, 3.5});
  CHECK(s.size() == 3);
  CHECK(s[1] == -2.0);
}

TEST_CASE("keyed stream depends only on key, stream and index") {
  const KeyedStream a(Key{42}, Stream::Host);
  const KeyedStream b(Key{42}, Stream::Host);
  for (std::uint64_t i : {0ull, 1ull, 999ull, 123456789ull}) CHECK(a.bits(i) == b.bits(i));
  // Reverse order gives the same values.
  std::vector<std::uint64_t> fwd, rev;
  for (std::uint64_t i = 0; i < 100; ++i) fwd.push_back(a.bits(i));
  for (std::uint64_t i = 100; i-- > 0;) rev.push_back(a.bits(i));
  std::reverse(rev.begin(), rev.end());
  CHECK(fwd == rev);

  const KeyedStream other_key(Key{43}, Stream::Host);
  const KeyedStream other_stream(Key{42}, Stream::Dither);
  int same_key = 0, same_stream = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    same_key += a.bits(i) == other_key.bits(i);
    same_stream += a.bits(i) == other_stream.bits(i);
  }
  CHECK(same_key == 0);
  CHECK(same_stream == 0);
}

TEST_CASE("derived keys are distinct") {
  const Key root{7};
  std::set<std::uint64_t> seeds{root.seed};
  for (std::uint64_t t = 0; t < 1000; ++t) seeds.insert(root.derive(t).seed);
  CHECK(seeds.size() == 1001);
  CHECK(root.derive(5) == root.derive(5));
}

TEST_CASE("uniform and bit streams are balanced") {
  const KeyedStream rng(Key{9}, Stream::Message);
  const int n = 200000;
  double sum = 0.0;
  int ones = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(static_cast<std::uint64_t>(i));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    ones += rng.bit(static_cast<std::uint64_t>(i));
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  // 5 sigma of a fair binomial.
  CHECK(std::abs(ones - n / 2) < 5 * std::sqrt(n / 4.0));
}

TEST_CASE("gaussian host has the requested moments") {
  const std::size_t n = 400000;
  const auto host = gen_gaussian_host(n, 2.0, Key{11});
  double m1 = 0, m2 = 0, m4 = 0;
  for (double v : host) {
    m1 += v;
    m2 += v * v;
    m4 += v * v * v * v;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(m1) < 5 * 2.0 / std::sqrt(double(n)));
  CHECK(m2 == doctest::Approx(4.0).epsilon(0.01));
  CHECK(m4 / (m2 * m2) == doctest::Approx(3.0).epsilon(0.03));  // kurtosis
  CHECK(empirical_power(host.samples()) == doctest::Approx(m2));
}

TEST_CASE("gaussian host validates its arguments") {
  CHECK_THROWS_AS(gen_gaussian_host(0, 1.0, Key{1}), Error);
  CHECK_THROWS_AS(gen_gaussian_host(10, 0.0, Key{1}), Error);
  CHECK_THROWS_AS(gen_gaussian_host(10, -1.0, Key{1}), Error);
  CHECK(gen_gaussian_host(10, 1.0, Key{1}) == gen_gaussian_host(10, 1.0, Key{1}));
  CHECK_FALSE(gen_gaussian_host(10, 1.0, Key{1}) == gen_gaussian_host(10, 1.0, Key{2}));
}

TEST_CASE("decibel conversions") {
  CHECK(db_to_linear(DbRatio{0}) == 1.0);
  CHECK(db_to_linear(DbRatio{10}) == doctest::Approx(10.0));
  CHECK(db_to_linear(DbRatio{-20}) == doctest::Approx(0.01));
  CHECK(linear_to_db(1000.0).db == doctest::Approx(30.0));
  CHECK(linear_to_db(db_to_linear(DbRatio{13.0})).db == doctest::Approx(13.0));
  CHECK_THROWS_AS(linear_to_db(0.0), Error);
  CHECK_THROWS_AS(linear_to_db(-1.0), Error);
  CHECK(DbRatio::infinite().is_infinite());
  CHECK_FALSE(DbRatio{1e300}.is_infinite());
  CHECK(std::isinf(db_to_linear(DbRatio::infinite())));
}

TEST_CASE("power and difference") {
  const std::vector<double> a{1, 2, 3}, b{1, 1, 1};
  CHECK(empirical_power(a) == doctest::Approx(14.0 / 3.0));
  CHECK(difference(a, b) == std::vector<double>{0, 1, 2});
  CHECK_THROWS_AS(difference(a, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(empirical_power(std::span<const double>{}), Error);
}
