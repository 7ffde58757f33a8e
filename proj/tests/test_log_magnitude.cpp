// Tests for the log-domain magnitude type and its accumulation primitives.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "orlz/log_magnitude.hpp"

using namespace orlz;

namespace {

LogMagnitude p2(long e, int bits = kDefaultBits) {
  return LogMagnitude::from_exp2(Enclosure(e, bits));
}

bool exp2_contains(const LogMagnitude& m, long v) {
  return contains(m.exp2(), Enclosure(v, m.precision_bits()));
}

}  // namespace

TEST_CASE("multiplication and division act on exponents") {
  LogMagnitude a = p2(100), b = p2(30);
  CHECK(exp2_contains(mul(a, b), 130));
  CHECK(exp2_contains(div(a, b), 70));
  CHECK(mul(a, LogMagnitude::zero()).is_zero());
  CHECK_THROWS_AS(div(a, LogMagnitude::zero()), std::domain_error);
}

TEST_CASE("log_sum: 8 + 8 = 16 exactly") {
  LogMagnitude s = log_sum({p2(3), p2(3)});
  CHECK(exp2_contains(s, 4));
  // exact since every step is representable
  CHECK(s.exp2().is_point());
}

TEST_CASE("log_sum: dominant term identity") {
  LogMagnitude s = log_sum({p2(100), p2(0)});
  // exponent is 100 + log2(1 + 2^-100)
  Enclosure expected =
      add(Enclosure(100L), log2_enc(add(Enclosure(1L),
                                        Enclosure::pow2i(-100))));
  CHECK(overlaps(s.exp2(), expected));
  CHECK(mpfr_greater_p(s.exp2().lo(), Enclosure(100L).lo()));
}

TEST_CASE("log_sum: empty and all-zero inputs give exact zero") {
  std::vector<LogMagnitude> empty;
  CHECK(log_sum(std::span<const LogMagnitude>(empty)).is_zero());
  CHECK(log_sum({LogMagnitude::zero(), LogMagnitude::zero()}).is_zero());
}

TEST_CASE("log_diff inverts log_sum") {
  LogMagnitude a = p2(40), b = p2(25);
  LogMagnitude s = log_sum({a, b});
  LogMagnitude back = log_diff(s, b);
  CHECK(overlaps(back.exp2(), a.exp2()));
  CHECK(log_diff(a, a).is_zero());
  CHECK_THROWS_AS(log_diff(b, a), std::domain_error);
}

TEST_CASE("log_sum refines with precision and stays deterministic") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> e(-50, 50);
  std::vector<LogMagnitude> coarse, fine;
  for (int i = 0; i < 20; ++i) {
    long k = e(rng);
    coarse.push_back(LogMagnitude::from_exp2(
        div(Enclosure(3 * k, 64), Enclosure(3L, 64))));
    fine.push_back(LogMagnitude::from_exp2(
        div(Enclosure(3 * k, 256), Enclosure(3L, 256))));
  }
  LogMagnitude s64 = log_sum(std::span<const LogMagnitude>(coarse), 64);
  LogMagnitude s64b = log_sum(std::span<const LogMagnitude>(coarse), 64);
  LogMagnitude s256 = log_sum(std::span<const LogMagnitude>(fine), 256);
  CHECK(contains(s64.exp2(), s256.exp2()));
  CHECK(mpfr_equal_p(s64.exp2().lo(), s64b.exp2().lo()));
  CHECK(mpfr_equal_p(s64.exp2().hi(), s64b.exp2().hi()));
}

TEST_CASE("comparison respects zero tagging") {
  CHECK(compare(LogMagnitude::zero(), p2(-1000)) == Ordering::Less);
  CHECK(compare(LogMagnitude::zero(), LogMagnitude::zero()) == Ordering::Equal);
  CHECK(compare(p2(5), p2(4)) == Ordering::Greater);
}

TEST_CASE("to_enclosure round-trips moderate values") {
  LogMagnitude m = LogMagnitude::from_enclosure(Enclosure(48L));
  CHECK(contains(m.to_enclosure(), Enclosure(48L)));
  CHECK(LogMagnitude::zero().to_enclosure().is_point());
}
