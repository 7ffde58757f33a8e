#include "orlz/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>
#include <vector>

namespace orlz {

namespace {

void check_bits(int bits) {
  if (bits < kMinBits) {
    throw std::invalid_argument("precision request below " +
                                std::to_string(kMinBits) + " bits");
  }
}

int pick_bits(const Enclosure& a, const Enclosure& b, int override_bits) {
  if (override_bits != 0) {
    check_bits(override_bits);
    return override_bits;
  }
  return std::max(a.precision_bits(), b.precision_bits());
}

int pick_bits(const Enclosure& a, int override_bits) {
  if (override_bits != 0) {
    check_bits(override_bits);
    return override_bits;
  }
  return a.precision_bits();
}

}  // namespace

const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Greater: return "Greater";
    case Ordering::Equal: return "Equal";
    case Ordering::Undetermined: return "Undetermined";
  }
  return "?";
}

namespace detail {

Real::Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); }

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);  // same precision: exact
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (!init_) {
      mpfr_init2(v_, mpfr_get_prec(other.v_));
      init_ = true;
    } else {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    }
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    if (!init_) {
      mpfr_init2(v_, mpfr_get_prec(other.v_));
      init_ = true;
    }
    mpfr_swap(v_, other.v_);
  }
  return *this;
}

Real::~Real() {
  if (init_) mpfr_clear(v_);
}

}  // namespace detail

using detail::Real;

Enclosure::Enclosure(long v, int bits) : lo_(1), hi_(1), bits_(bits) {
  check_bits(bits);
  Real lo(bits), hi(bits);
  mpfr_set_si(lo.get(), v, MPFR_RNDD);
  mpfr_set_si(hi.get(), v, MPFR_RNDU);
  lo_ = std::move(lo);
  hi_ = std::move(hi);
}

Enclosure Enclosure::from_long(long v, int bits) { return Enclosure(v, bits); }

Enclosure Enclosure::from_double(double v, int bits) {
  check_bits(bits);
  if (!std::isfinite(v)) throw std::invalid_argument("from_double: non-finite");
  Real lo(bits), hi(bits);
  mpfr_set_d(lo.get(), v, MPFR_RNDD);
  mpfr_set_d(hi.get(), v, MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi), bits);
}

Enclosure Enclosure::from_decimal(const std::string& s, int bits) {
  check_bits(bits);
  Real lo(bits), hi(bits);
  if (mpfr_set_str(lo.get(), s.c_str(), 10, MPFR_RNDD) != 0) {
    throw std::invalid_argument("from_decimal: cannot parse '" + s + "'");
  }
  mpfr_set_str(hi.get(), s.c_str(), 10, MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi), bits);
}

Enclosure Enclosure::pow2i(long k, int bits) {
  check_bits(bits);
  Real lo(bits), hi(bits);
  mpfr_set_si(lo.get(), 1, MPFR_RNDN);
  mpfr_mul_2si(lo.get(), lo.get(), k, MPFR_RNDN);  // exact
  mpfr_set(hi.get(), lo.get(), MPFR_RNDN);
  return Enclosure(std::move(lo), std::move(hi), bits);
}

Enclosure Enclosure::positive_infinity(int bits) {
  check_bits(bits);
  Real lo(bits), hi(bits);
  mpfr_set_inf(lo.get(), +1);
  mpfr_set_inf(hi.get(), +1);
  return Enclosure(std::move(lo), std::move(hi), bits);
}

Enclosure Enclosure::from_endpoints(Real lo, Real hi, int bits) {
  check_bits(bits);
  if (mpfr_greater_p(lo.get(), hi.get())) {
    throw std::invalid_argument("from_endpoints: lo > hi");
  }
  return Enclosure(std::move(lo), std::move(hi), bits);
}

bool Enclosure::is_point() const { return mpfr_equal_p(lo(), hi()) != 0; }

bool Enclosure::contains_zero() const {
  return mpfr_sgn(lo()) <= 0 && mpfr_sgn(hi()) >= 0;
}

bool Enclosure::is_certainly_positive() const { return mpfr_sgn(lo()) > 0; }

bool Enclosure::is_certainly_nonnegative() const {
  return mpfr_sgn(lo()) >= 0 || mpfr_zero_p(lo());
}

bool Enclosure::is_finite() const {
  return mpfr_number_p(lo()) && mpfr_number_p(hi());
}

double Enclosure::lo_double() const { return mpfr_get_d(lo(), MPFR_RNDD); }
double Enclosure::hi_double() const { return mpfr_get_d(hi(), MPFR_RNDU); }

Enclosure Enclosure::width() const {
  Real w(bits_);
  mpfr_sub(w.get(), hi(), lo(), MPFR_RNDU);
  Real w2 = w;
  return Enclosure(std::move(w), std::move(w2), bits_);
}

Enclosure Enclosure::midpoint() const {
  Real m(bits_);
  if (!is_finite()) {
    mpfr_set(m.get(), lo(), MPFR_RNDN);
  } else {
    mpfr_add(m.get(), lo(), hi(), MPFR_RNDN);
    mpfr_div_2si(m.get(), m.get(), 1, MPFR_RNDN);
  }
  Real m2 = m;
  return Enclosure(std::move(m), std::move(m2), bits_);
}

Enclosure Enclosure::rounded_to(int bits) const {
  check_bits(bits);
  Real lo(bits), hi(bits);
  mpfr_set(lo.get(), this->lo(), MPFR_RNDD);
  mpfr_set(hi.get(), this->hi(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi), bits);
}

std::string Enclosure::str(int digits) const {
  char* s1 = nullptr;
  char* s2 = nullptr;
  mpfr_asprintf(&s1, "%.*Rg", digits, lo());
  mpfr_asprintf(&s2, "%.*Rg", digits, hi());
  std::string out = std::string("[") + s1 + ", " + s2 + "]";
  mpfr_free_str(s1);
  mpfr_free_str(s2);
  return out;
}

Ordering compare(const Enclosure& a, const Enclosure& b) {
  if (mpfr_less_p(a.hi(), b.lo())) return Ordering::Less;
  if (mpfr_greater_p(a.lo(), b.hi())) return Ordering::Greater;
  if (a.is_point() && b.is_point() && mpfr_equal_p(a.lo(), b.lo())) {
    return Ordering::Equal;
  }
  return Ordering::Undetermined;
}

bool contains(const Enclosure& outer, const Enclosure& inner) {
  return mpfr_lessequal_p(outer.lo(), inner.lo()) &&
         mpfr_greaterequal_p(outer.hi(), inner.hi());
}

bool overlaps(const Enclosure& a, const Enclosure& b) {
  return !mpfr_less_p(a.hi(), b.lo()) && !mpfr_less_p(b.hi(), a.lo());
}

bool identical(const Enclosure& a, const Enclosure& b) {
  return a.precision_bits() == b.precision_bits() && a.is_point() &&
         b.is_point() && mpfr_equal_p(a.lo(), b.lo());
}

Enclosure add(const Enclosure& a, const Enclosure& b, int bits) {
  int p = pick_bits(a, b, bits);
  Real lo(p), hi(p);
  mpfr_add(lo.get(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi(), b.hi(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure sub(const Enclosure& a, const Enclosure& b, int bits) {
  int p = pick_bits(a, b, bits);
  Real lo(p), hi(p);
  mpfr_sub(lo.get(), a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.hi(), b.lo(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure mul(const Enclosure& a, const Enclosure& b, int bits) {
  int p = pick_bits(a, b, bits);
  // Four candidate products, each rounded both ways.
  mpfr_srcptr as[2] = {a.lo(), a.hi()};
  mpfr_srcptr bs[2] = {b.lo(), b.hi()};
  Real lo(p), hi(p), t(p);
  bool first = true;
  for (auto* x : as) {
    for (auto* y : bs) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure div(const Enclosure& a, const Enclosure& b, int bits) {
  int p = pick_bits(a, b, bits);
  if (b.contains_zero()) {
    throw std::domain_error("div: divisor encloses zero");
  }
  mpfr_srcptr as[2] = {a.lo(), a.hi()};
  mpfr_srcptr bs[2] = {b.lo(), b.hi()};
  Real lo(p), hi(p), t(p);
  bool first = true;
  for (auto* x : as) {
    for (auto* y : bs) {
      mpfr_div(t.get(), x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), lo.get())) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_div(t.get(), x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), hi.get())) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure neg(const Enclosure& a) {
  int p = a.precision_bits();
  Real lo(p), hi(p);
  mpfr_neg(lo.get(), a.hi(), MPFR_RNDD);
  mpfr_neg(hi.get(), a.lo(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure abs_enc(const Enclosure& a) {
  if (a.is_certainly_nonnegative()) return a;
  if (mpfr_sgn(a.hi()) <= 0) return neg(a);
  // straddles zero
  Enclosure n = neg(a);
  int p = a.precision_bits();
  Real lo(p), hi(p);
  mpfr_set_zero(lo.get(), +1);
  if (mpfr_greater_p(a.hi(), n.hi())) {
    mpfr_set(hi.get(), a.hi(), MPFR_RNDU);
  } else {
    mpfr_set(hi.get(), n.hi(), MPFR_RNDU);
  }
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure add_long(const Enclosure& a, long v) {
  int p = a.precision_bits();
  Real lo(p), hi(p);
  mpfr_add_si(lo.get(), a.lo(), v, MPFR_RNDD);
  mpfr_add_si(hi.get(), a.hi(), v, MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure mul_long(const Enclosure& a, long v) {
  return mul(a, Enclosure::from_long(v, a.precision_bits()));
}

Enclosure min_enc(const Enclosure& a, const Enclosure& b) {
  int p = std::max(a.precision_bits(), b.precision_bits());
  Real lo(p), hi(p);
  mpfr_min(lo.get(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(hi.get(), a.hi(), b.hi(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure max_enc(const Enclosure& a, const Enclosure& b) {
  int p = std::max(a.precision_bits(), b.precision_bits());
  Real lo(p), hi(p);
  mpfr_max(lo.get(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(hi.get(), a.hi(), b.hi(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure clamp_nonneg(const Enclosure& a) {
  return max_enc(a, Enclosure::from_long(0, a.precision_bits()));
}

Enclosure hull(const Enclosure& a, const Enclosure& b) {
  int p = std::max(a.precision_bits(), b.precision_bits());
  Real lo(p), hi(p);
  mpfr_min(lo.get(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(hi.get(), a.hi(), b.hi(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure intersect(const Enclosure& a, const Enclosure& b) {
  if (!overlaps(a, b)) throw std::domain_error("intersect: empty intersection");
  int p = std::max(a.precision_bits(), b.precision_bits());
  Real lo(p), hi(p);
  mpfr_max(lo.get(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(hi.get(), a.hi(), b.hi(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

namespace {

// Applies an increasing one-argument mpfr function endpoint-wise.
template <typename F>
Enclosure monotone_map(const Enclosure& a, int bits, F&& f) {
  Real lo(bits), hi(bits);
  f(lo.get(), a.lo(), MPFR_RNDD);
  f(hi.get(), a.hi(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), bits);
}

}  // namespace

Enclosure sqrt_enc(const Enclosure& a, int bits) {
  int p = pick_bits(a, bits);
  if (mpfr_sgn(a.lo()) < 0) throw std::domain_error("sqrt_enc: negative input");
  return monotone_map(a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rnd) {
    mpfr_sqrt(r, x, rnd);
  });
}

Enclosure exp2_enc(const Enclosure& a, int bits) {
  int p = pick_bits(a, bits);
  return monotone_map(a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rnd) {
    mpfr_exp2(r, x, rnd);
  });
}

Enclosure log2_enc(const Enclosure& a, int bits) {
  int p = pick_bits(a, bits);
  if (mpfr_sgn(a.lo()) < 0) throw std::domain_error("log2_enc: negative input");
  return monotone_map(a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rnd) {
    mpfr_log2(r, x, rnd);
  });
}

Enclosure expm1_enc(const Enclosure& a, int bits) {
  int p = pick_bits(a, bits);
  return monotone_map(a, p, [](mpfr_ptr r, mpfr_srcptr x, mpfr_rnd_t rnd) {
    mpfr_expm1(r, x, rnd);
  });
}

Enclosure ln2_enclosure(int bits) {
  check_bits(bits);
  Real lo(bits), hi(bits);
  mpfr_const_log2(lo.get(), MPFR_RNDD);
  mpfr_const_log2(hi.get(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), bits);
}

Enclosure pow2_sqrt(long n, int bits) {
  check_bits(bits);
  if (n < 1) throw std::invalid_argument("pow2_sqrt: n must be >= 1");

  long r = static_cast<long>(std::lround(std::floor(std::sqrt(static_cast<double>(n)))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  if (r * r == n) return Enclosure::pow2i(r, bits);

  // Irrational exponent: no bits-precision float equals 2^sqrt(n), so with
  // enough guard bits the outward rounding collapses to one ulp, which is
  // within the documented width bound. Retry until the bound is certified.
  for (int guard = 32; guard <= 1 << 16; guard *= 2) {
    int work = bits + guard;
    Real slo(work), shi(work);
    mpfr_sqrt_ui(slo.get(), static_cast<unsigned long>(n), MPFR_RNDD);
    mpfr_sqrt_ui(shi.get(), static_cast<unsigned long>(n), MPFR_RNDU);
    Real lo(bits), hi(bits);
    {
      Real t(work);
      mpfr_exp2(t.get(), slo.get(), MPFR_RNDD);
      mpfr_set(lo.get(), t.get(), MPFR_RNDD);
      mpfr_exp2(t.get(), shi.get(), MPFR_RNDU);
      mpfr_set(hi.get(), t.get(), MPFR_RNDU);
    }
    // width <= 2^(1-bits) * value?
    Real w(bits), bound(bits);
    mpfr_sub(w.get(), hi.get(), lo.get(), MPFR_RNDU);
    mpfr_mul_2si(bound.get(), lo.get(), 1 - bits, MPFR_RNDD);
    if (mpfr_lessequal_p(w.get(), bound.get())) {
      return Enclosure::from_endpoints(std::move(lo), std::move(hi), bits);
    }
  }
  throw std::runtime_error("pow2_sqrt: width bound not reached");
}

}  // namespace orlz
