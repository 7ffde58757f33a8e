#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace orlz::testing {

using detail::Real;

namespace {

Enclosure point(double v, int bits) { return Enclosure::from_double(v, bits); }

Enclosure span_times_phi_range(const Enclosure& len, int kmin, int kmax) {
  Enclosure lo = mul_long(len, kmin);
  Enclosure hi = mul_long(len, kmax);
  return hull(lo, hi);
}

// Contribution of phi over [a, b], splitting until classified or too deep.
Enclosure quad_f_segment(const CounterexampleModel& model, double a, double b,
                         int depth, int bits) {
  Enclosure ea = point(a, bits);
  Enclosure eb = point(b, bits);
  Enclosure len = sub(eb, ea);
  PhiValue v = model.phi(hull(ea, eb));
  if (v == PhiValue::One) return len;
  if (v == PhiValue::Two) return mul_long(len, 2);
  if (depth <= 0) return span_times_phi_range(len, 1, 2);
  double m = a + (b - a) / 2;
  return add(quad_f_segment(model, a, m, depth - 1, bits),
             quad_f_segment(model, m, b, depth - 1, bits));
}

Enclosure quad_f_point(const CounterexampleModel& model, double x,
                       double tol_log2, int bits) {
  if (x < 0) throw std::domain_error("quadrature_f: negative argument");
  if (x == 0) return Enclosure(0L, bits);
  // phi rejects intervals touching 0; bound the first sliver by [1,2].
  double eps = std::max(x * 0x1p-55, 0x1p-200);
  int depth = 40 + static_cast<int>(std::fabs(tol_log2));
  Enclosure head = span_times_phi_range(point(eps, bits), 1, 2);
  return add(head, quad_f_segment(model, eps, x, depth, bits));
}

}  // namespace

Enclosure quadrature_f(const CounterexampleModel& model, const Enclosure& u,
                       double tol_log2, int bits) {
  if (u.is_point()) return quad_f_point(model, u.lo_double(), tol_log2, bits);
  return hull(quad_f_point(model, u.lo_double(), tol_log2, bits),
              quad_f_point(model, u.hi_double(), tol_log2, bits));
}

namespace {

// Incremental f oracle: f(x) = f(prev) + quadrature over [prev, x] for the
// nearest already-known node, so the cost per new dyadic node stays small.
class FNodeOracle {
 public:
  FNodeOracle(const CounterexampleModel& model, int depth, int bits)
      : model_(model), depth_(depth), bits_(bits) {
    memo_.emplace(0.0, Enclosure(0L, bits));
  }

  const Enclosure& at(double x) {
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;
    auto prev = memo_.upper_bound(x);
    --prev;  // largest key <= x; key 0 always present
    Enclosure val = prev->first == 0.0
                        ? quad_f_point(model_, x, -depth_, bits_)
                        : add(prev->second, quad_f_segment(model_, prev->first,
                                                           x, depth_, bits_));
    return memo_.emplace(x, std::move(val)).first->second;
  }

 private:
  const CounterexampleModel& model_;
  int depth_;
  int bits_;
  std::map<double, Enclosure> memo_;
};

struct Segment {
  double a, b;
  Enclosure contribution;
  double width_scaled;  // heuristic only; the enclosure stays rigorous
};

struct WiderFirst {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.width_scaled != y.width_scaled) return x.width_scaled > y.width_scaled;
    return x.a < y.a;
  }
};

// Adaptive quadrature of integral of 2^f(u) du over [0, v]. On segments
// where phi is classified the integrand is log-linear, hence convex, and the
// midpoint/trapezoid pair gives second-order certified bounds; straddling
// segments fall back to the monotone bracket and shrink geometrically.
Enclosure quad_exp2f(const CounterexampleModel& model, double v,
                     double tol_log2, int bits) {
  FNodeOracle f(model, 40 + static_cast<int>(std::fabs(tol_log2)), bits);
  const double scale = std::ldexp(1.0, static_cast<int>(-f.at(v).hi_double()));

  auto g = [&](double x) { return exp2_enc(f.at(x), bits); };
  auto make = [&](double a, double b) {
    Enclosure len = sub(point(b, bits), point(a, bits));
    Enclosure ga = g(a), gb = g(b);
    Enclosure c(0L, bits);
    PhiValue cls = model.phi(hull(point(std::max(a, 0x1p-200), bits), point(b, bits)));
    if (cls == PhiValue::Undetermined) {
      c = mul(len, hull(ga, gb));  // 2^f is increasing
    } else {
      Enclosure gm = g(a + (b - a) / 2);
      Enclosure lower = mul(len, gm);                                // Jensen
      Enclosure upper = mul(len, div(add(ga, gb), Enclosure(2L, bits)));  // trapezoid
      c = hull(lower, upper);
    }
    double w = c.width().hi_double() * scale;
    return Segment{a, b, std::move(c), w};
  };

  std::multiset<Segment, WiderFirst> work;
  work.insert(make(0.0, v));
  double total_w = work.begin()->width_scaled;
  const double tol = std::ldexp(1.0, static_cast<int>(tol_log2));
  const size_t max_segments = 300000;

  while (total_w > tol && work.size() < max_segments) {
    Segment s = *work.begin();
    work.erase(work.begin());
    total_w -= s.width_scaled;
    if (s.b - s.a < 0x1p-45) {  // resolution floor
      s.width_scaled = 0;
      work.insert(std::move(s));
      continue;
    }
    double m = s.a + (s.b - s.a) / 2;
    Segment s1 = make(s.a, m);
    Segment s2 = make(m, s.b);
    total_w += s1.width_scaled + s2.width_scaled;
    work.insert(std::move(s1));
    work.insert(std::move(s2));
  }

  Enclosure total(0L, bits);
  for (const auto& s : work) total = add(total, s.contribution);
  return total;
}

}  // namespace

Enclosure quadrature_Phi(const CounterexampleModel& model, const Enclosure& v,
                         double tol_log2, int bits) {
  auto eval_point = [&](double x) {
    if (x < 0) throw std::domain_error("quadrature_Phi: v must be >= 0");
    // Phi(2^v) = 1 + ln2 * integral over [0, v] of 2^f(u) du; the part
    // below u = 0 contributes exactly 1 because F is the identity there.
    Enclosure integral = quad_exp2f(model, x, tol_log2, bits);
    return add(Enclosure(1L, bits), mul(ln2_enclosure(bits), integral));
  };
  if (v.is_point()) return eval_point(v.lo_double());
  return hull(eval_point(v.lo_double()), eval_point(v.hi_double()));
}

Enclosure pow_enc(const Enclosure& base, const Enclosure& e, int bits) {
  return exp2_enc(mul(e, log2_enc(base, bits), bits), bits);
}

Enclosure power_conjugate_reference(double p, const Enclosure& t, int bits) {
  Enclosure pe = Enclosure::from_double(p, bits);
  Enclosure q = div(pe, sub(pe, Enclosure(1L, bits)));
  return div(pow_enc(t, q, bits), q);
}

}  // namespace orlz::testing
