// Unit and property tests for the interval layer: containment under
// refinement, determinism, outward rounding, and the 2^sqrt(n) primitive.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "orlz/enclosure.hpp"

using namespace orlz;

TEST_CASE("point constructions are exact") {
  Enclosure a(3L, 64);
  CHECK(a.is_point());
  CHECK(a.precision_bits() == 64);
  CHECK(a.lo_double() == 3.0);

  Enclosure d = Enclosure::from_double(0.5, 64);
  CHECK(d.is_point());

  Enclosure p = Enclosure::pow2i(-16, 64);
  CHECK(p.is_point());
  CHECK(p.lo_double() == 0x1p-16);
}

TEST_CASE("precision below the floor is rejected") {
  CHECK_THROWS_AS(Enclosure(1L, 4), std::invalid_argument);
  CHECK_THROWS_AS(pow2_sqrt(3, 7), std::invalid_argument);
}

TEST_CASE("compare follows the interval ordering rules") {
  Enclosure one(1L), two(2L);
  CHECK(compare(one, two) == Ordering::Less);
  CHECK(compare(two, one) == Ordering::Greater);
  CHECK(compare(two, two) == Ordering::Equal);

  // [1,3] vs [2,4] overlap
  Enclosure a = hull(Enclosure(1L), Enclosure(3L));
  Enclosure b = hull(Enclosure(2L), Enclosure(4L));
  CHECK(compare(a, b) == Ordering::Undetermined);
  // equal non-point intervals are not Equal
  CHECK(compare(a, a) == Ordering::Undetermined);
}

TEST_CASE("pow2_sqrt at perfect squares is a point") {
  Enclosure s4 = pow2_sqrt(4, 64);
  CHECK(s4.is_point());
  CHECK(s4.lo_double() == 4.0);

  Enclosure s9 = pow2_sqrt(9, 64);
  CHECK(s9.is_point());
  CHECK(s9.lo_double() == 8.0);
}

TEST_CASE("pow2_sqrt(3) meets its width bound and a 256-bit cross-check") {
  Enclosure v = pow2_sqrt(3, 64);
  // 2^sqrt(3) = 3.32199708...
  CHECK(v.lo_double() > 3.3219);
  CHECK(v.hi_double() < 3.3221);
  Enclosure bound = mul(Enclosure::pow2i(-60, 64), v);
  CHECK(mpfr_lessequal_p(v.width().hi(), bound.hi()));

  Enclosure fine = pow2_sqrt(3, 256);
  CHECK(contains(v, fine));
  for (long n : {2L, 3L, 5L, 7L, 10L, 11L, 17L, 39L}) {
    Enclosure coarse = pow2_sqrt(n, 64);
    Enclosure tight = pow2_sqrt(n, 256);
    CHECK(contains(coarse, tight));
    Enclosure b = mul(Enclosure::pow2i(1 - 64, 64), coarse);
    CHECK(mpfr_lessequal_p(coarse.width().hi(), b.hi()));
  }
}

namespace {

// A little deterministic expression workout used by several properties.
Enclosure workout(uint64_t seed, int bits) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-100, 100);
  std::uniform_int_distribution<long> den(1, 50);
  std::uniform_int_distribution<int> op(0, 4);
  Enclosure acc = div(Enclosure(num(rng), bits), Enclosure(den(rng), bits));
  for (int i = 0; i < 25; ++i) {
    Enclosure operand = div(Enclosure(num(rng), bits), Enclosure(den(rng), bits));
    switch (op(rng)) {
      case 0: acc = add(acc, operand); break;
      case 1: acc = sub(acc, operand); break;
      case 2: acc = mul(acc, operand); break;
      case 3: acc = exp2_enc(min_enc(acc, Enclosure(8L, bits))); break;
      default: acc = sqrt_enc(abs_enc(acc)); break;
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("containment: 256-bit results nest inside 64-bit results") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    Enclosure coarse = workout(seed, 64);
    Enclosure fine = workout(seed, 256);
    CHECK(contains(coarse, fine));
  }
}

TEST_CASE("determinism: identical inputs give bit-identical enclosures") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Enclosure a = workout(seed, 128);
    Enclosure b = workout(seed, 128);
    CHECK(mpfr_equal_p(a.lo(), b.lo()));
    CHECK(mpfr_equal_p(a.hi(), b.hi()));
  }
}

TEST_CASE("monotone refinement: width non-increasing in precision") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Enclosure w64 = workout(seed, 64).width();
    Enclosure w128 = workout(seed, 128).width();
    Enclosure w256 = workout(seed, 256).width();
    CHECK(mpfr_lessequal_p(w128.hi(), w64.hi()));
    CHECK(mpfr_lessequal_p(w256.hi(), w128.hi()));
  }
}

TEST_CASE("outward rounding keeps exact rationals inside") {
  // 1/3 * 3 must contain 1, and so on through a few identities.
  Enclosure third = div(Enclosure(1L, 64), Enclosure(3L, 64));
  CHECK(!third.is_point());
  Enclosure one = mul_long(third, 3);
  CHECK(contains(one, Enclosure(1L, 64)));

  Enclosure r = sqrt_enc(Enclosure(2L, 64));
  CHECK(contains(mul(r, r), Enclosure(2L, 64)));

  Enclosure l = log2_enc(Enclosure(8L, 64));
  CHECK(contains(l, Enclosure(3L, 64)));
}

TEST_CASE("division by an interval through zero is rejected") {
  Enclosure z = hull(Enclosure(-1L), Enclosure(1L));
  CHECK_THROWS_AS(div(Enclosure(1L), z), std::domain_error);
}

TEST_CASE("infinity endpoints are supported") {
  Enclosure inf = Enclosure::positive_infinity();
  CHECK(!inf.is_finite());
  CHECK(compare(Enclosure(100L), inf) == Ordering::Less);
}
