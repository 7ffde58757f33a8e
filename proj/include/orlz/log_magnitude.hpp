// log_magnitude.hpp
//
// A nonnegative real stored as an enclosure of its base-2 exponent, so that
// quantities like 2^(2^11) stay representable and multiplication/division
// reduce to exponent addition/subtraction. Zero carries a dedicated tag.

#pragma once

#include <span>
#include <vector>

#include "orlz/enclosure.hpp"

namespace orlz {

class LogMagnitude {
 public:
  // Exact zero.
  static LogMagnitude zero(int bits = kDefaultBits);
  // The value 2^e for an enclosed exponent e.
  static LogMagnitude from_exp2(Enclosure e);
  // From a positive linear-domain enclosure (takes log2).
  static LogMagnitude from_enclosure(const Enclosure& v);
  static LogMagnitude one(int bits = kDefaultBits);

  bool is_zero() const { return zero_; }
  // Base-2 exponent; only meaningful for nonzero values.
  const Enclosure& exp2() const;
  int precision_bits() const { return bits_; }

  // Linear-domain enclosure of the value (2^exp2). May overflow to infinity
  // for extreme exponents; callers at risk should stay in the log domain.
  Enclosure to_enclosure(int bits = 0) const;

  std::string str(int digits = 20) const;

 private:
  LogMagnitude(bool zero, Enclosure e, int bits)
      : zero_(zero), exp2_(std::move(e)), bits_(bits) {}

  bool zero_;
  Enclosure exp2_;
  int bits_;
};

LogMagnitude mul(const LogMagnitude& a, const LogMagnitude& b);
LogMagnitude div(const LogMagnitude& a, const LogMagnitude& b);
// Division by a positive linear-domain constant.
LogMagnitude div_enc(const LogMagnitude& a, const Enclosure& d);

// Enclosure of the sum of the terms, accumulated in the given order after
// factoring out the maximal exponent. Empty input (or all zeros) gives zero.
LogMagnitude log_sum(std::span<const LogMagnitude> terms, int bits = kDefaultBits);
LogMagnitude log_sum(std::initializer_list<LogMagnitude> terms, int bits = kDefaultBits);

// a - b for a >= b; the difference is computed as 2^b * (2^(a-b) - 1) to
// avoid cancellation. Requires the exponent gap to be certainly nonnegative;
// an exactly-zero gap yields zero.
LogMagnitude log_diff(const LogMagnitude& a, const LogMagnitude& b, int bits = kDefaultBits);

// Compare the represented values.
Ordering compare(const LogMagnitude& a, const LogMagnitude& b);

}  // namespace orlz
