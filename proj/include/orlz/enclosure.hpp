// enclosure.hpp
//
// Outward-rounded interval arithmetic on MPFR big floats. An Enclosure is a
// pair [lo, hi] of arbitrary-precision floats that is guaranteed to contain
// the exact mathematical value of the expression it was computed from: every
// operation rounds its lower endpoint toward -inf and its upper endpoint
// toward +inf. Values are immutable after construction and all operations
// are pure, so Enclosures can be shared freely between threads.

#pragma once

#include <mpfr.h>

#include <cstdint>
#include <span>
#include <string>

namespace orlz {

inline constexpr int kDefaultBits = 256;
inline constexpr int kMinBits = 8;

// Result of comparing two enclosures. Overlapping intervals compare as
// Undetermined; that is a value, not an error, and callers are expected to
// record it and continue.
enum class Ordering { Less, Greater, Equal, Undetermined };

const char* to_string(Ordering o);

namespace detail {

// RAII wrapper for a single mpfr_t.
class Real {
 public:
  explicit Real(mpfr_prec_t prec);
  Real(const Real& other);
  Real& operator=(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
  bool init_ = true;
};

}  // namespace detail

class Enclosure {
 public:
  // Default: exact zero at default precision.
  Enclosure() : Enclosure(0L, kDefaultBits) {}
  explicit Enclosure(long v, int bits = kDefaultBits);

  // Exact point constructions. from_double is exact because doubles are
  // dyadic rationals; from_decimal rounds the decimal string outward.
  static Enclosure from_long(long v, int bits = kDefaultBits);
  static Enclosure from_double(double v, int bits = kDefaultBits);
  static Enclosure from_decimal(const std::string& s, int bits = kDefaultBits);
  static Enclosure pow2i(long k, int bits = kDefaultBits);  // exact 2^k
  static Enclosure positive_infinity(int bits = kDefaultBits);

  // Takes ownership of endpoint values; requires lo <= hi.
  static Enclosure from_endpoints(detail::Real lo, detail::Real hi, int bits);

  int precision_bits() const { return bits_; }
  mpfr_srcptr lo() const { return lo_.get(); }
  mpfr_srcptr hi() const { return hi_.get(); }

  bool is_point() const;
  bool contains_zero() const;
  bool is_certainly_positive() const;   // lo > 0
  bool is_certainly_nonnegative() const;  // lo >= 0
  bool is_finite() const;

  double lo_double() const;  // rounded down
  double hi_double() const;  // rounded up

  // Upper bound on hi - lo, as a point enclosure.
  Enclosure width() const;
  // A representable point inside the interval (arithmetic mean, rounded).
  Enclosure midpoint() const;

  // Same value re-rounded outward at a different working precision.
  Enclosure rounded_to(int bits) const;

  std::string str(int digits = 20) const;

 private:
  Enclosure(detail::Real lo, detail::Real hi, int bits)
      : lo_(std::move(lo)), hi_(std::move(hi)), bits_(bits) {}

  detail::Real lo_;
  detail::Real hi_;
  int bits_;
};

Ordering compare(const Enclosure& a, const Enclosure& b);

// True iff inner is contained in outer (endpoint-wise).
bool contains(const Enclosure& outer, const Enclosure& inner);
// True iff the two intervals have a common point.
bool overlaps(const Enclosure& a, const Enclosure& b);
// True iff both are point intervals with bitwise-equal endpoints and equal
// precision. Stronger than compare() == Equal.
bool identical(const Enclosure& a, const Enclosure& b);

// Arithmetic. Result precision is max of the operands' unless overridden.
Enclosure add(const Enclosure& a, const Enclosure& b, int bits = 0);
Enclosure sub(const Enclosure& a, const Enclosure& b, int bits = 0);
Enclosure mul(const Enclosure& a, const Enclosure& b, int bits = 0);
// Divisor must not contain zero.
Enclosure div(const Enclosure& a, const Enclosure& b, int bits = 0);
Enclosure neg(const Enclosure& a);
Enclosure abs_enc(const Enclosure& a);
Enclosure add_long(const Enclosure& a, long v);
Enclosure mul_long(const Enclosure& a, long v);

Enclosure min_enc(const Enclosure& a, const Enclosure& b);
Enclosure max_enc(const Enclosure& a, const Enclosure& b);
// max(a, 0) endpoint-wise.
Enclosure clamp_nonneg(const Enclosure& a);
// Smallest interval containing both.
Enclosure hull(const Enclosure& a, const Enclosure& b);
// Intersection; requires overlap.
Enclosure intersect(const Enclosure& a, const Enclosure& b);

// Monotone elementary functions, outward-rounded.
Enclosure sqrt_enc(const Enclosure& a, int bits = 0);   // requires a >= 0
Enclosure exp2_enc(const Enclosure& a, int bits = 0);
Enclosure log2_enc(const Enclosure& a, int bits = 0);   // requires a >= 0; log2(0) = -inf
Enclosure expm1_enc(const Enclosure& a, int bits = 0);

// Enclosure of ln 2 at the given precision.
Enclosure ln2_enclosure(int bits = kDefaultBits);

// Enclosure of 2^sqrt(n) for integer n >= 1. Point interval when n is a
// perfect square; otherwise the width is at most 2^(1-bits) * 2^sqrt(n),
// which is enforced internally by retrying with more guard bits.
Enclosure pow2_sqrt(long n, int bits = kDefaultBits);

inline Enclosure operator+(const Enclosure& a, const Enclosure& b) { return add(a, b); }
inline Enclosure operator-(const Enclosure& a, const Enclosure& b) { return sub(a, b); }
inline Enclosure operator*(const Enclosure& a, const Enclosure& b) { return mul(a, b); }
inline Enclosure operator/(const Enclosure& a, const Enclosure& b) { return div(a, b); }
inline Enclosure operator-(const Enclosure& a) { return neg(a); }

}  // namespace orlz
