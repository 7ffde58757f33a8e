#include "orlz/construction.hpp"

#include <algorithm>
#include <cmath>

namespace orlz {

using detail::Real;

namespace {

Enclosure point_from(mpfr_srcptr v, int bits) {
  int p = std::max<int>(bits, static_cast<int>(mpfr_get_prec(v)));
  Real lo(p), hi(p);
  mpfr_set(lo.get(), v, MPFR_RNDD);
  mpfr_set(hi.get(), v, MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), p);
}

Enclosure unit_interval(int bits) {
  Real lo(bits), hi(bits);
  mpfr_set_si(lo.get(), 0, MPFR_RNDD);
  mpfr_set_si(hi.get(), 1, MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(lo), std::move(hi), bits);
}

}  // namespace

const char* to_string(PhiValue v) {
  switch (v) {
    case PhiValue::One: return "1";
    case PhiValue::Two: return "2";
    case PhiValue::Undetermined: return "Undetermined";
  }
  return "?";
}

Enclosure ZoneShape::zone_slope(int bits) const {
  Enclosure s = Enclosure::from_long(slope_num, bits);
  return mul(s, Enclosure::pow2i(-slope_den_log2, bits));
}

Enclosure ZoneShape::zone_width(int n, int bits) const {
  switch (width) {
    case Width::SqrtN: return pow2_sqrt(n, bits);
    case Width::HalfBlock: return Enclosure::pow2i(n - 1, bits);
  }
  throw std::logic_error("zone_width: bad shape");
}

BlockTable::BlockTable(int n_max, int bits, ZoneShape shape)
    : n_max_(n_max), bits_(bits), shape_(shape), u_limit_(0L, bits) {
  if (n_max < 3) throw std::invalid_argument("BlockTable: n_max must be >= 3");
  if (n_max > 1000) throw std::invalid_argument("BlockTable: n_max too large");
  u_limit_ = Enclosure::pow2i(n_max, bits);

  const Enclosure slope = shape_.zone_slope(bits);
  const Enclosure slope_m1 = sub(slope, Enclosure(1L, bits));

  prefix_.reserve(n_max - 1);
  prefix_.push_back(LogMagnitude::from_exp2(Enclosure(4L, bits)));  // Phi(16)

  Enclosure f_prev(4L, bits);  // f(4) = 4
  for (int n = 3; n <= n_max; ++n) {
    Block b;
    b.n = n;
    b.start = Enclosure::pow2i(n - 1, bits);
    b.end = Enclosure::pow2i(n, bits);
    b.zone_width = shape_.zone_width(n, bits);
    b.breakpoint = sub(b.end, b.zone_width);
    b.f_at_start = f_prev;
    // Increment over the block: 1 * (len - w) + slope * w = len + (slope-1)w.
    Enclosure inc = add(b.start, mul(slope_m1, b.zone_width));
    b.f_at_end = add(b.f_at_start, inc);
    f_prev = b.f_at_end;
    blocks_.push_back(std::move(b));

    const Block& blk = blocks_.back();
    Enclosure f_at_bp = add(blk.f_at_start, sub(blk.breakpoint, blk.start));
    LogMagnitude seg1 = log_diff(LogMagnitude::from_exp2(f_at_bp),
                                 LogMagnitude::from_exp2(blk.f_at_start), bits);
    LogMagnitude seg2 = div_enc(log_diff(LogMagnitude::from_exp2(blk.f_at_end),
                                         LogMagnitude::from_exp2(f_at_bp), bits),
                                slope);
    prefix_.push_back(log_sum({prefix_.back(), seg1, seg2}, bits));
  }
}

const Block& BlockTable::block(int n) const {
  if (n < 3 || n > n_max_) throw std::out_of_range("BlockTable::block");
  return blocks_[static_cast<size_t>(n - 3)];
}

const LogMagnitude& BlockTable::phi_prefix(int n) const {
  if (n < 2 || n > n_max_) throw std::out_of_range("BlockTable::phi_prefix");
  return prefix_[static_cast<size_t>(n - 2)];
}

CounterexampleModel::CounterexampleModel(int n_max, int bits, ZoneShape shape)
    : bits_(bits), table_(n_max, bits, shape) {}

void CounterexampleModel::check_u_budget(mpfr_srcptr u, const char* where) const {
  if (mpfr_greater_p(u, table_.u_limit().lo())) {
    throw BudgetError(std::string(where) + ": log2-argument exceeds 2^" +
                      std::to_string(table_.n_max()) + " block budget");
  }
}

int CounterexampleModel::block_index_of(mpfr_srcptr u) const {
  // 2^{E-1} <= u < 2^E for E = mpfr_get_exp; block n covers (2^{n-1}, 2^n].
  long e = mpfr_get_exp(u);
  int n = static_cast<int>(e);
  Real p(mpfr_get_prec(u));
  mpfr_set_si_2exp(p.get(), 1, e - 1, MPFR_RNDN);
  if (mpfr_equal_p(u, p.get())) --n;  // u is exactly 2^{n-1}
  return std::max(n, 3);
}

Enclosure CounterexampleModel::f_point(mpfr_srcptr u) const {
  if (mpfr_sgn(u) < 0) throw std::domain_error("f: negative argument");
  if (mpfr_cmp_si(u, 4) <= 0) return point_from(u, bits_);
  check_u_budget(u, "f");

  const Block& blk = table_.block(block_index_of(u));
  const Enclosure pt = point_from(u, bits_);
  const Enclosure slope = table_.shape().zone_slope(bits_);

  bool left_ok = mpfr_lessequal_p(u, blk.breakpoint.lo());
  bool right_ok = mpfr_greater_p(u, blk.breakpoint.hi());
  if (left_ok) return add(blk.f_at_start, sub(pt, blk.start));
  Enclosure right = sub(blk.f_at_end, mul(slope, sub(blk.end, pt)));
  if (right_ok) return right;
  // Straddles the breakpoint enclosure: take the hull of both branches.
  return hull(add(blk.f_at_start, sub(pt, blk.start)), right);
}

Enclosure CounterexampleModel::f_eval(const Enclosure& u) const {
  if (mpfr_sgn(u.lo()) < 0) throw std::domain_error("f_eval: negative argument");
  if (u.is_point()) return f_point(u.lo());
  // f is increasing: evaluate at the endpoints.
  Enclosure flo = f_point(u.lo());
  Enclosure fhi = f_point(u.hi());
  return hull(flo, fhi);
}

Enclosure CounterexampleModel::log2F_point(mpfr_srcptr v) const {
  if (mpfr_sgn(v) <= 0) return point_from(v, bits_);
  return f_point(v);
}

Enclosure CounterexampleModel::log2F(const Enclosure& v) const {
  if (v.is_point()) return log2F_point(v.lo());
  return hull(log2F_point(v.lo()), log2F_point(v.hi()));
}

LogMagnitude CounterexampleModel::F_eval(const LogMagnitude& x) const {
  if (x.is_zero()) throw std::domain_error("F: argument must be positive");
  return LogMagnitude::from_exp2(log2F(x.exp2()));
}

Enclosure CounterexampleModel::f_ratio_log(const Enclosure& y_log,
                                           const Enclosure& x_log) const {
  if (mpfr_sgn(y_log.lo()) < 0 || mpfr_sgn(x_log.lo()) < 0) {
    throw std::domain_error("f_ratio_log: negative log arguments");
  }
  auto [mu_a, mu_b] = phi_measure(y_log, add(y_log, x_log));
  (void)mu_b;
  if (table_.shape().is_production()) return add(x_log, mu_a);
  Enclosure slope_m1 = sub(table_.shape().zone_slope(bits_), Enclosure(1L, bits_));
  return add(x_log, mul(slope_m1, mu_a));
}

std::pair<Enclosure, Enclosure> CounterexampleModel::phi_measure(
    const Enclosure& a, const Enclosure& b) const {
  if (mpfr_sgn(a.lo()) < 0) throw std::domain_error("phi_measure: a < 0");
  if (mpfr_less_p(b.hi(), a.lo())) {
    throw std::domain_error("phi_measure: reversed interval");
  }
  check_u_budget(b.hi(), "phi_measure");

  Enclosure mu_a(0L, bits_);
  for (int n = 3; n <= table_.n_max(); ++n) {
    const Block& blk = table_.block(n);
    if (mpfr_lessequal_p(blk.end.hi(), a.lo())) continue;   // zone left of [a,b]
    if (mpfr_greaterequal_p(blk.breakpoint.lo(), b.hi())) break;  // past b
    Enclosure overlap =
        clamp_nonneg(sub(min_enc(b, blk.end), max_enc(a, blk.breakpoint)));
    mu_a = add(mu_a, overlap);
  }
  Enclosure mu_b = clamp_nonneg(sub(sub(b, a), mu_a));
  return {clamp_nonneg(mu_a), mu_b};
}

PhiValue CounterexampleModel::phi(const Enclosure& t) const {
  if (!t.is_certainly_positive()) {
    throw std::domain_error("phi: argument must be positive");
  }
  check_u_budget(t.hi(), "phi");

  // The head (0, 4] and block 3's slope-1 part are contiguous: phi = 1 on
  // (0, breakpoint_3].
  const Block& b3 = table_.block(3);
  if (mpfr_lessequal_p(t.hi(), b3.breakpoint.lo())) return PhiValue::One;

  for (int n = 3; n <= table_.n_max(); ++n) {
    const Block& blk = table_.block(n);
    if (mpfr_greater_p(blk.start.lo(), t.hi())) break;
    // Entirely inside the slope-1 part (start, breakpoint]?
    if (mpfr_greater_p(t.lo(), blk.start.hi()) &&
        mpfr_lessequal_p(t.hi(), blk.breakpoint.lo())) {
      return PhiValue::One;
    }
    // Entirely inside the zone (breakpoint, end]?
    if (mpfr_greater_p(t.lo(), blk.breakpoint.hi()) &&
        mpfr_lessequal_p(t.hi(), blk.end.lo())) {
      return PhiValue::Two;
    }
  }
  return PhiValue::Undetermined;
}

Enclosure CounterexampleModel::log2Phi_point(mpfr_srcptr v) const {
  if (mpfr_cmp_si(v, 4) <= 0) return point_from(v, bits_);
  check_u_budget(v, "Phi");

  int n = block_index_of(v);
  const Block& blk = table_.block(n);
  const LogMagnitude& base = table_.phi_prefix(n - 1);
  if (mpfr_equal_p(v, blk.end.lo()) && blk.end.is_point()) {
    return table_.phi_prefix(n).exp2();
  }

  const Enclosure pt = point_from(v, bits_);
  const Enclosure slope = table_.shape().zone_slope(bits_);
  const Enclosure f_at_bp = add(blk.f_at_start, sub(blk.breakpoint, blk.start));

  auto left_branch = [&]() {
    Enclosure f_v = add(blk.f_at_start, sub(pt, blk.start));
    LogMagnitude seg = log_diff(LogMagnitude::from_exp2(f_v),
                                LogMagnitude::from_exp2(blk.f_at_start), bits_);
    return log_sum({base, seg}, bits_).exp2();
  };
  auto right_branch = [&]() {
    LogMagnitude seg1 = log_diff(LogMagnitude::from_exp2(f_at_bp),
                                 LogMagnitude::from_exp2(blk.f_at_start), bits_);
    Enclosure f_v = sub(blk.f_at_end, mul(slope, sub(blk.end, pt)));
    LogMagnitude seg2 = div_enc(log_diff(LogMagnitude::from_exp2(f_v),
                                         LogMagnitude::from_exp2(f_at_bp), bits_),
                                slope);
    return log_sum({base, seg1, seg2}, bits_).exp2();
  };

  bool left_ok = mpfr_lessequal_p(v, blk.breakpoint.lo());
  bool right_ok = mpfr_greater_p(v, blk.breakpoint.hi());
  if (left_ok) return left_branch();
  if (right_ok) return right_branch();
  return hull(left_branch(), right_branch());
}

Enclosure CounterexampleModel::log2Phi(const Enclosure& v) const {
  if (v.is_point()) return log2Phi_point(v.lo());
  return hull(log2Phi_point(v.lo()), log2Phi_point(v.hi()));
}

LogMagnitude CounterexampleModel::Phi_eval(const LogMagnitude& x) const {
  if (x.is_zero()) throw std::domain_error("Phi: argument must be positive");
  return LogMagnitude::from_exp2(log2Phi(x.exp2()));
}

Enclosure CounterexampleModel::dilation_eval(int n, const Enclosure& x) const {
  if (n < 1) throw std::invalid_argument("dilation_eval: n must be >= 1");
  if (n > table_.n_max()) {
    throw BudgetError("dilation_eval: n exceeds the block budget " +
                      std::to_string(table_.n_max()));
  }
  if (!x.is_certainly_positive() || mpfr_cmp_d(x.hi(), 0.5) > 0) {
    throw std::invalid_argument("dilation_eval: x must lie in (0, 1/2]");
  }
  Enclosure lx = log2_enc(x, bits_);
  Enclosure u = add(lx, Enclosure::pow2i(n, bits_));
  Enclosure num = log2Phi(u);
  Enclosure den = log2Phi(Enclosure::pow2i(n, bits_));
  Enclosure val = exp2_enc(sub(num, den), bits_);
  return intersect(val, unit_interval(bits_));
}

}  // namespace orlz
