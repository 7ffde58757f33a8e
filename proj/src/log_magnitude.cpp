#include "orlz/log_magnitude.hpp"

#include <stdexcept>
#include <utility>

namespace orlz {

using detail::Real;

LogMagnitude LogMagnitude::zero(int bits) {
  return LogMagnitude(true, Enclosure(0L, bits), bits);
}

LogMagnitude LogMagnitude::from_exp2(Enclosure e) {
  int bits = e.precision_bits();
  return LogMagnitude(false, std::move(e), bits);
}

LogMagnitude LogMagnitude::from_enclosure(const Enclosure& v) {
  if (!v.is_certainly_positive()) {
    throw std::domain_error("LogMagnitude: value not certainly positive");
  }
  return from_exp2(log2_enc(v));
}

LogMagnitude LogMagnitude::one(int bits) {
  return from_exp2(Enclosure(0L, bits));
}

const Enclosure& LogMagnitude::exp2() const {
  if (zero_) throw std::logic_error("LogMagnitude: exponent of zero");
  return exp2_;
}

Enclosure LogMagnitude::to_enclosure(int bits) const {
  int p = bits != 0 ? bits : bits_;
  if (zero_) return Enclosure(0L, p);
  return exp2_enc(exp2_, p);
}

std::string LogMagnitude::str(int digits) const {
  if (zero_) return "0";
  return "2^" + exp2_.str(digits);
}

LogMagnitude mul(const LogMagnitude& a, const LogMagnitude& b) {
  int p = std::max(a.precision_bits(), b.precision_bits());
  if (a.is_zero() || b.is_zero()) return LogMagnitude::zero(p);
  return LogMagnitude::from_exp2(add(a.exp2(), b.exp2(), p));
}

LogMagnitude div(const LogMagnitude& a, const LogMagnitude& b) {
  int p = std::max(a.precision_bits(), b.precision_bits());
  if (b.is_zero()) throw std::domain_error("LogMagnitude div: zero divisor");
  if (a.is_zero()) return LogMagnitude::zero(p);
  return LogMagnitude::from_exp2(sub(a.exp2(), b.exp2(), p));
}

LogMagnitude div_enc(const LogMagnitude& a, const Enclosure& d) {
  if (!d.is_certainly_positive()) {
    throw std::domain_error("LogMagnitude div_enc: divisor not positive");
  }
  if (a.is_zero()) return LogMagnitude::zero(a.precision_bits());
  return LogMagnitude::from_exp2(sub(a.exp2(), log2_enc(d)));
}

LogMagnitude log_sum(std::span<const LogMagnitude> terms, int bits) {
  const LogMagnitude* only = nullptr;
  size_t live = 0;
  for (const auto& t : terms) {
    if (!t.is_zero()) {
      only = &t;
      ++live;
    }
  }
  if (live == 0) return LogMagnitude::zero(bits);
  if (live == 1) return LogMagnitude::from_exp2(only->exp2().rounded_to(bits));

  // Pivot: the largest upper exponent, as an exact representable point.
  Real pivot(bits);
  bool first = true;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    if (first || mpfr_greater_p(t.exp2().hi(), pivot.get())) {
      mpfr_set_prec(pivot.get(), mpfr_get_prec(t.exp2().hi()));
      mpfr_set(pivot.get(), t.exp2().hi(), MPFR_RNDN);  // exact copy
      first = false;
    }
  }
  Real pivot_hi = pivot;
  Enclosure pivot_enc =
      Enclosure::from_endpoints(std::move(pivot), std::move(pivot_hi), bits);

  // Residuals are all <= 1, so the plain interval sum is stable.
  Enclosure acc(0L, bits);
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    acc = add(acc, exp2_enc(sub(t.exp2(), pivot_enc, bits)), bits);
  }
  return LogMagnitude::from_exp2(add(pivot_enc, log2_enc(acc), bits));
}

LogMagnitude log_sum(std::initializer_list<LogMagnitude> terms, int bits) {
  return log_sum(std::span<const LogMagnitude>(terms.begin(), terms.size()), bits);
}

LogMagnitude log_diff(const LogMagnitude& a, const LogMagnitude& b, int bits) {
  if (b.is_zero()) {
    if (a.is_zero()) return LogMagnitude::zero(bits);
    return LogMagnitude::from_exp2(a.exp2().rounded_to(bits));
  }
  if (a.is_zero()) throw std::domain_error("log_diff: negative difference");
  Enclosure gap = sub(a.exp2(), b.exp2(), bits);
  if (gap.is_point() && gap.contains_zero()) return LogMagnitude::zero(bits);
  if (!gap.is_certainly_nonnegative()) {
    throw std::domain_error("log_diff: gap not certainly nonnegative");
  }
  // a - b = 2^b * (2^gap - 1); 2^gap - 1 = expm1(gap * ln 2).
  Enclosure t = expm1_enc(mul(gap, ln2_enclosure(bits), bits), bits);
  return LogMagnitude::from_exp2(add(b.exp2(), log2_enc(t, bits), bits));
}

Ordering compare(const LogMagnitude& a, const LogMagnitude& b) {
  if (a.is_zero() && b.is_zero()) return Ordering::Equal;
  if (a.is_zero()) return Ordering::Less;
  if (b.is_zero()) return Ordering::Greater;
  return compare(a.exp2(), b.exp2());
}

}  // namespace orlz
