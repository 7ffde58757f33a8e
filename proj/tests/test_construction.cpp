// Tests for the block construction: the step density, its integral, F, Phi,
// measures, ratios and dilations. Expected values are either exact by
// construction or cross-checked against the quadrature oracles.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "orlz/construction.hpp"

using namespace orlz;
using orlz::testing::quadrature_f;
using orlz::testing::quadrature_Phi;

namespace {

const CounterexampleModel& model() {
  static CounterexampleModel m;  // default budget and precision
  return m;
}

Enclosure ep(double v, int bits = kDefaultBits) {
  return Enclosure::from_double(v, bits);
}

LogMagnitude mag2(double e) {
  return LogMagnitude::from_exp2(ep(e));
}

}  // namespace

TEST_CASE("phi honors the half-open block conventions") {
  CHECK(model().phi(ep(3)) == PhiValue::One);
  CHECK(model().phi(ep(4)) == PhiValue::One);
  CHECK(model().phi(ep(10)) == PhiValue::One);
  CHECK(model().phi(ep(12)) == PhiValue::One);  // breakpoint of block 4 itself
  CHECK(model().phi(ep(15)) == PhiValue::Two);
  CHECK(model().phi(ep(16)) == PhiValue::Two);  // block end belongs to the zone
  CHECK(model().phi(ep(8)) == PhiValue::Two);
  CHECK(model().phi(ep(8.5)) == PhiValue::One);

  // 8 - 2^sqrt(3) = 4.67800... lies inside [4.6, 4.7]
  CHECK(model().phi(hull(ep(4.6), ep(4.7))) == PhiValue::Undetermined);
  // an interval across a block boundary mixes both slopes
  CHECK(model().phi(hull(ep(15.5), ep(17))) == PhiValue::Undetermined);

  CHECK_THROWS_AS(model().phi(ep(0)), std::domain_error);
  CHECK_THROWS_AS(model().phi(ep(-2)), std::domain_error);
}

TEST_CASE("f at block anchors: telescoped closed forms") {
  CHECK(identical(model().f_eval(Enclosure(4L)), Enclosure(4L)));

  // f(8) = 8 + 2^sqrt(3), f(12) = 12 + 2^sqrt(3), f(16) = 20 + 2^sqrt(3)
  Enclosure s3 = pow2_sqrt(3);
  CHECK(overlaps(model().f_eval(Enclosure(8L)), add_long(s3, 8)));
  CHECK(overlaps(model().f_eval(Enclosure(12L)), add_long(s3, 12)));
  CHECK(overlaps(model().f_eval(Enclosure(16L)), add_long(s3, 20)));
  CHECK_THROWS_AS(model().f_eval(ep(-1)), std::domain_error);
}

TEST_CASE("f agrees with the quadrature oracle") {
  for (double u : {0.5, 3.0, 4.0, 5.5, 8.0, 11.0, 16.25, 30.0, 47.5, 64.0}) {
    Enclosure closed = model().f_eval(ep(u));
    Enclosure quad = quadrature_f(model(), ep(u), -48, 128);
    CAPTURE(u);
    CHECK(overlaps(closed, quad));
    CHECK(mpfr_cmp_d(quad.width().hi(), 0x1p-40) < 0);
  }
}

TEST_CASE("boundary telescoping identity per block") {
  for (int n = 3; n <= model().table().n_max(); ++n) {
    const Block& b = model().table().block(n);
    Enclosure inc = sub(b.f_at_end, b.f_at_start);
    Enclosure expected = add(Enclosure::pow2i(n - 1), pow2_sqrt(n));
    CAPTURE(n);
    CHECK(overlaps(inc, expected));
    CHECK(mpfr_greater_p(b.breakpoint.lo(), b.start.hi()));  // start < breakpoint
    CHECK(mpfr_less_p(b.breakpoint.hi(), b.end.lo()));
  }
}

TEST_CASE("slope dichotomy: difference quotients of f stay in [1, 2]") {
  std::vector<double> us = {0.25, 1,  3.5, 4.5, 5,  6.5, 9,   12.5,
                            14,   18, 27,  29,  40, 59,  60.5, 63};
  // Quotients on pure stretches equal 1 or 2 exactly, so the enclosure may
  // poke out by rounding; allow a sliver far below any real slope defect.
  Enclosure lo_bound = sub(Enclosure(1L), Enclosure::pow2i(-200));
  Enclosure hi_bound = add(Enclosure(2L), Enclosure::pow2i(-200));
  for (size_t i = 0; i + 1 < us.size(); ++i) {
    Enclosure a = ep(us[i]), b = ep(us[i + 1]);
    Enclosure dq = div(sub(model().f_eval(b), model().f_eval(a)), sub(b, a));
    CAPTURE(us[i]);
    CHECK(mpfr_lessequal_p(dq.hi(), hi_bound.lo()));
    CHECK(mpfr_greaterequal_p(dq.lo(), lo_bound.hi()));
  }
}

TEST_CASE("F is the identity below 16 and exponentiates f above") {
  LogMagnitude one = LogMagnitude::from_enclosure(Enclosure(1L));
  CHECK(contains(model().F_eval(one).exp2(), Enclosure(0L)));

  for (double x : {0.03125, 0.4, 1.0, 2.0, 7.5, 15.9}) {
    LogMagnitude m = LogMagnitude::from_enclosure(ep(x));
    Enclosure out = model().F_eval(m).exp2();
    CHECK(overlaps(out, log2_enc(ep(x))));
  }

  // F(2^8) = 2^(8 + 2^sqrt(3))
  Enclosure f8 = model().F_eval(mag2(8)).exp2();
  CHECK(overlaps(f8, add_long(pow2_sqrt(3), 8)));
  CHECK_THROWS_AS(model().F_eval(LogMagnitude::zero()), std::domain_error);
}

TEST_CASE("phi_measure closed forms") {
  auto [a0, b0] = model().phi_measure(Enclosure(0L), Enclosure(4L));
  CHECK(contains(a0, Enclosure(0L)));
  CHECK(contains(b0, Enclosure(4L)));

  auto [a1, b1] = model().phi_measure(Enclosure(8L), Enclosure(16L));
  CHECK(overlaps(a1, Enclosure(4L)));
  CHECK(overlaps(b1, Enclosure(4L)));

  auto [a2, b2] = model().phi_measure(Enclosure(4L), Enclosure(8L));
  CHECK(overlaps(a2, pow2_sqrt(3)));
  CHECK(overlaps(b2, sub(Enclosure(4L), pow2_sqrt(3))));

  // mu_A + mu_B encloses b - a
  Enclosure total = add(a2, b2);
  CHECK(overlaps(total, Enclosure(4L)));

  CHECK_THROWS_AS(model().phi_measure(Enclosure(5L), Enclosure(3L)),
                  std::domain_error);
}

TEST_CASE("structural log-ratios: exact points on zone-free and pure-zone windows") {
  Enclosure r1 = model().f_ratio_log(Enclosure(0L), Enclosure(3L));
  CHECK(identical(r1, Enclosure(3L)));

  Enclosure r2 = model().f_ratio_log(Enclosure(12L), Enclosure(4L));
  CHECK(identical(r2, Enclosure(8L)));

  Enclosure r3 = model().f_ratio_log(Enclosure(6L), Enclosure(2L));
  CHECK(identical(r3, Enclosure(4L)));

  CHECK_THROWS_AS(model().f_ratio_log(ep(-1), Enclosure(2L)), std::domain_error);
}

TEST_CASE("ratio lower bound: increments dominate the window length") {
  // Equivalent statement of F(y)/y nondecreasing.
  for (double y : {0.0, 1.0, 3.0, 4.5, 6.0, 11.0, 12.0, 27.0, 58.0, 200.0}) {
    for (double x : {0.0, 0.5, 2.0, 5.0, 17.0, 40.0}) {
      Enclosure d = sub(model().f_ratio_log(ep(y), ep(x)), ep(x));
      CAPTURE(y);
      CAPTURE(x);
      CHECK(d.is_certainly_nonnegative());
    }
  }
}

TEST_CASE("exact dyadic ratio identity on pure zone windows") {
  const std::pair<int, int> cases[] = {{1, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 10}};
  for (auto [m, n] : cases) {
    Enclosure y = sub(Enclosure::pow2i(n), Enclosure::pow2i(m));
    Enclosure x = Enclosure::pow2i(m);
    Enclosure r = model().f_ratio_log(y, x);
    CAPTURE(m);
    CAPTURE(n);
    CHECK(contains(r, Enclosure::pow2i(m + 1)));
    CHECK(mpfr_cmp_d(r.width().hi(), 0x1p-40) < 0);
  }
}

TEST_CASE("Phi is the identity up to 16 and sandwiched under F") {
  for (double x : {0.25, 1.0, 2.0, 9.0, 16.0}) {
    LogMagnitude v = LogMagnitude::from_enclosure(ep(x));
    Enclosure out = model().Phi_eval(v).exp2();
    CHECK(overlaps(out, log2_enc(ep(x))));
  }

  for (double e : {2.0, 4.0, 4.7, 6.0, 8.0, 13.0, 16.0, 25.0, 31.0, 64.0,
                   200.0, 1024.0}) {
    LogMagnitude x = mag2(e);
    auto phi_v = model().Phi_eval(x);
    auto f_v = model().F_eval(x);
    CAPTURE(e);
    CHECK(compare(phi_v, f_v) != Ordering::Greater);
  }

  // Phi(256) >= F(128): the integral over the top octave already beats F(x/2).
  CHECK(compare(model().Phi_eval(mag2(8)), model().F_eval(mag2(7))) ==
        Ordering::Greater);
  CHECK_THROWS_AS(model().Phi_eval(LogMagnitude::zero()), std::domain_error);
}

TEST_CASE("Phi agrees with the quadrature oracle") {
  for (double v : {2.0, 5.0, 6.0, 9.5, 16.0}) {
    LogMagnitude closed = model().Phi_eval(mag2(v));
    Enclosure quad = quadrature_Phi(model(), ep(v), -24, 128);
    CAPTURE(v);
    CHECK(overlaps(closed.to_enclosure(), quad));
    CHECK(mpfr_less_p(quad.width().hi(),
                      mul(quad, Enclosure::pow2i(-20, 128)).hi()));
  }
}

TEST_CASE("Phi block prefixes are monotone") {
  for (int n = 3; n <= model().table().n_max(); ++n) {
    CHECK(compare(model().table().phi_prefix(n - 1),
                  model().table().phi_prefix(n)) == Ordering::Less);
  }
}

TEST_CASE("dilations: range, monotonicity, quadratic envelope") {
  // nondecreasing in x and bounded by 1
  Enclosure prev(0L);
  for (int i = 1; i <= 8; ++i) {
    Enclosure x = div(Enclosure(i, kDefaultBits), Enclosure(16L));
    Enclosure d = model().dilation_eval(6, x);
    CHECK(mpfr_cmp_si(d.hi(), 1) <= 0);
    CHECK(mpfr_greaterequal_p(d.hi(), prev.lo()));
    prev = d;
  }

  // quadratic envelope with the sandwich constant 1/4:
  // dilation(n, 2^-2^m) <= 4 * (2^-2^m)^2
  Enclosure d3 = model().dilation_eval(3, ep(0.25));
  CHECK(mpfr_cmp_d(d3.hi(), 4 * 0x1p-4) < 0);
  Enclosure d5 = model().dilation_eval(5, ep(0.0625));
  CHECK(mpfr_cmp_d(d5.hi(), 4 * 0x1p-8) < 0);

  CHECK_THROWS_AS(model().dilation_eval(0, ep(0.25)), std::invalid_argument);
  CHECK_THROWS_AS(model().dilation_eval(6, ep(0.75)), std::invalid_argument);
}

TEST_CASE("budget overflow is a distinct resource error") {
  CounterexampleModel small(4, 128);
  CHECK_THROWS_AS(small.f_eval(Enclosure(40L, 128)), BudgetError);
  CHECK_THROWS_AS(small.dilation_eval(9, ep(0.25, 128)), BudgetError);
  // within budget works
  CHECK(small.f_eval(Enclosure(16L, 128)).is_certainly_positive());
}

TEST_CASE("refinement and determinism of the construction") {
  CounterexampleModel coarse(10, 64);
  CounterexampleModel fine(10, 256);
  for (double u : {5.0, 13.0, 29.5, 100.0, 1000.0}) {
    CHECK(contains(coarse.f_eval(ep(u, 64)), fine.f_eval(ep(u, 256))));
  }
  CounterexampleModel again(10, 64);
  for (double u : {5.0, 13.0, 29.5}) {
    Enclosure a = coarse.f_eval(ep(u, 64));
    Enclosure b = again.f_eval(ep(u, 64));
    CHECK(mpfr_equal_p(a.lo(), b.lo()));
    CHECK(mpfr_equal_p(a.hi(), b.hi()));
  }
}
