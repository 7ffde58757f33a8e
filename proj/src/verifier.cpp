#include "orlz/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <json.hpp>

namespace orlz {

using detail::Real;

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Verified: return "Verified";
    case CheckStatus::Falsified: return "Falsified";
    case CheckStatus::Undetermined: return "Undetermined";
  }
  return "?";
}

CheckStatus VerificationReport::overall() const {
  CheckStatus out = CheckStatus::Verified;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Falsified) return CheckStatus::Falsified;
    if (c.status == CheckStatus::Undetermined) out = CheckStatus::Undetermined;
  }
  return out;
}

namespace {

std::string enc_str(mpfr_srcptr v) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.40Re", v);
  std::string out = s;
  mpfr_free_str(s);
  return out;
}

std::string point_label(const Enclosure& e) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", e.midpoint().lo_double());
  return buf;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Margin of the monotone-ratio inequality, valid for any real y_log: the
// log2 of F(xy)/(F(y) x). Nonnegative exactly when the inequality holds.
Enclosure margin_impl(const CounterexampleModel& model, const Enclosure& y_log,
                      const Enclosure& x_log) {
  int bits = model.bits();
  Enclosure slope_m1 =
      sub(model.table().shape().zone_slope(bits), Enclosure(1L, bits));
  if (y_log.is_certainly_nonnegative()) {
    return sub(model.f_ratio_log(y_log, x_log), x_log);
  }
  Enclosure v = add(y_log, x_log);
  if (mpfr_sgn(v.hi()) <= 0) return Enclosure(0L, bits);  // pure identity branch
  auto [mu_a, mu_b] = model.phi_measure(Enclosure(0L, bits), clamp_nonneg(v));
  (void)mu_b;
  return mul(slope_m1, mu_a);
}

Enclosure stabilization_bound(int bits) {
  return log2_enc(Enclosure::from_decimal("1.01", bits), bits);
}

std::map<std::string, Enclosure> make_witness(
    std::initializer_list<std::pair<std::string, Enclosure>> kv) {
  return std::map<std::string, Enclosure>(kv.begin(), kv.end());
}

}  // namespace

Verifier::Verifier(CheckConfig cfg)
    : cfg_(std::move(cfg)),
      model_(std::make_shared<const CounterexampleModel>(cfg_.n_max,
                                                         cfg_.precision_bits)) {}

Verifier::Verifier(CheckConfig cfg,
                   std::shared_ptr<const CounterexampleModel> model)
    : cfg_(std::move(cfg)), model_(std::move(model)) {}

std::vector<long> Verifier::range_ladder() const {
  // Five nested ranges ending at the configured maximum.
  std::vector<long> out;
  long e = cfg_.range_exponent_max;
  for (int i = 0; i < 5 && e >= 4; ++i) {
    out.push_back(e);
    e /= 2;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Enclosure> Verifier::landmark_points(long range) const {
  const int bits = cfg_.precision_bits;
  const Enclosure off = Enclosure::pow2i(-16, bits);
  std::vector<Enclosure> pts;
  pts.push_back(Enclosure(0L, bits));
  for (long k = 0; k < 62 && (1L << k) <= range; ++k) {
    pts.push_back(Enclosure::pow2i(k, bits));
  }
  const BlockTable& table = model_->table();
  for (int n = 3; n <= table.n_max() && (1L << n) <= 2 * range; ++n) {
    const Block& b = table.block(n);
    pts.push_back(sub(b.end, off));
    pts.push_back(add(b.end, off));
    if (b.breakpoint.is_point()) {
      pts.push_back(b.breakpoint);
      pts.push_back(add(b.breakpoint, off));
    } else {
      Real t(bits);
      mpfr_mul_2si(t.get(), b.breakpoint.lo(), 16, MPFR_RNDD);
      mpfr_floor(t.get(), t.get());
      mpfr_div_2si(t.get(), t.get(), 16, MPFR_RNDN);  // exact
      Real t2 = t;
      Enclosure below = Enclosure::from_endpoints(std::move(t), std::move(t2), bits);
      pts.push_back(below);
      pts.push_back(add(below, off));
    }
  }
  std::vector<Enclosure> kept;
  for (auto& p : pts) {
    if (mpfr_sgn(p.lo()) >= 0 && mpfr_cmp_si(p.hi(), range) <= 0) {
      kept.push_back(std::move(p));
    }
  }
  std::sort(kept.begin(), kept.end(), [](const Enclosure& a, const Enclosure& b) {
    return mpfr_less_p(a.lo(), b.lo());
  });
  kept.erase(std::unique(kept.begin(), kept.end(),
                         [](const Enclosure& a, const Enclosure& b) {
                           return mpfr_equal_p(a.lo(), b.lo()) &&
                                  mpfr_equal_p(a.hi(), b.hi());
                         }),
             kept.end());
  return kept;
}

Enclosure Verifier::monotone_margin(const Enclosure& y_log,
                                    const Enclosure& x_log) const {
  return margin_impl(*model_, y_log, x_log);
}

CheckResult Verifier::check_monotone_ratio() const {
  Stopwatch watch;
  CheckResult res;
  res.check_id = "eq1_monotone_ratio";
  res.precision_bits = cfg_.precision_bits;
  const int bits = cfg_.precision_bits;
  const long e = cfg_.range_exponent_max;
  const int g = cfg_.grid_points;
  res.range_used = "x,y in [1, 2^" + std::to_string(e) + "], " +
                   std::to_string(g) + "x" + std::to_string(g) +
                   " log grid plus y<1 extension";

  std::vector<Enclosure> axis;
  for (int j = 0; j < g; ++j) {
    axis.push_back(div(mul_long(Enclosure(e, bits), j),
                       Enclosure(static_cast<long>(g - 1), bits)));
  }

  long falsified = 0, undetermined = 0, checked = 0;
  auto judge = [&](const Enclosure& y_log, const Enclosure& x_log) {
    Enclosure m = margin_impl(*model_, y_log, x_log);
    ++checked;
    if (m.is_certainly_nonnegative()) return;
    if (mpfr_sgn(m.hi()) < 0) {
      ++falsified;
      if (!res.witness) {
        res.witness = make_witness({{"y_log", y_log}, {"x_log", x_log}});
      }
    } else {
      ++undetermined;
    }
  };

  for (const auto& y : axis) {
    for (const auto& x : axis) judge(y, x);
  }
  // y < 1 branch through the identity extension of F
  for (double yl : {-0.5, -1.0, -2.0, -8.0, -32.0}) {
    Enclosure y = Enclosure::from_double(yl, bits);
    judge(y, Enclosure(2L, bits));  // boundary equality when xy = 2^(yl+2) <= 1
    for (int j = 1; j < g; j += g / 8) judge(y, axis[static_cast<size_t>(j)]);
  }

  res.points_checked = checked;
  res.undetermined_count = undetermined;
  if (falsified > 0) {
    res.status = CheckStatus::Falsified;
  } else if (undetermined * 200 > checked) {  // > 0.5%
    res.status = CheckStatus::Undetermined;
  } else {
    res.status = CheckStatus::Verified;
  }
  res.note = "falsified=" + std::to_string(falsified) +
             " undetermined=" + std::to_string(undetermined);
  res.wall_time_ms = watch.ms();
  return res;
}

CheckResult Verifier::estimate_Cp() const { return estimate_Cp(cfg_.p); }

CheckResult Verifier::estimate_Cp(const Enclosure& p) const {
  Stopwatch watch;
  CheckResult res;
  res.check_id = "eq2_cp_bound";
  res.precision_bits = cfg_.precision_bits;
  const int bits = cfg_.precision_bits;
  if (mpfr_cmp_si(p.lo(), 1) < 0) {
    throw std::invalid_argument("estimate_Cp: p must be >= 1");
  }

  std::vector<long> ladder = range_ladder();
  res.range_used = "landmark grids up to 2^" + std::to_string(ladder.back());

  std::optional<Enclosure> running;
  std::vector<Enclosure> sups;
  long checked = 0;
  for (long range : ladder) {
    std::vector<Enclosure> pts = landmark_points(range);
    std::optional<Enclosure> best;
    std::string best_label;
    for (const auto& base : pts) {
      for (const auto& len : pts) {
        double reach = base.hi_double() + len.hi_double();
        if (reach > static_cast<double>(range) * (1 + 1e-9)) continue;
        Enclosure stat = sub(model_->f_ratio_log(base, len), mul(p, len));
        ++checked;
        running = running ? max_enc(*running, stat) : stat;
        if (!best || mpfr_greater_p(stat.hi(), best->hi())) {
          best = stat;
          best_label = "y=2^" + point_label(base) + " x=2^" + point_label(len);
        }
      }
    }
    sups.push_back(*running);
    res.extremal_rows.emplace_back("2^" + std::to_string(range), best_label,
                                   *best);
  }
  res.points_checked = checked;
  res.extremal_constant = exp2_enc(sups.back(), bits);

  Enclosure g_last = sub(sups[sups.size() - 1], sups[sups.size() - 2]);
  Enclosure g_prev = sub(sups[sups.size() - 2], sups[sups.size() - 3]);
  Enclosure bound = stabilization_bound(bits);
  bool stable = mpfr_less_p(g_last.hi(), bound.lo());
  bool diverging = mpfr_cmp_si(g_last.lo(), 1) > 0;
  res.note = "sup growth (last doubling) in [" + enc_str(g_last.lo()) + ", " +
             enc_str(g_last.hi()) + "]; previous gap hi " + enc_str(g_prev.hi());
  if (stable) {
    res.status = CheckStatus::Verified;
  } else {
    res.status = CheckStatus::Undetermined;
    res.note += diverging ? "; diverging" : "; not stabilized";
  }
  res.wall_time_ms = watch.ms();
  return res;
}

ThresholdScan Verifier::scan_threshold(const Enclosure& epsilon,
                                       int m_max) const {
  const int bits = cfg_.precision_bits;
  if (m_max < 5) throw std::invalid_argument("scan_threshold: m_max must be >= 5");
  const ZoneShape& shape = model_->table().shape();

  // Prefix sums over i = 3..m_max of zone widths and slope-1 lengths.
  std::vector<Enclosure> w(1, Enclosure(0L, bits));   // W[k] = sum_{i<=k+2}
  std::vector<Enclosure> s(1, Enclosure(0L, bits));
  for (int i = 3; i <= m_max; ++i) {
    Enclosure wi = shape.zone_width(i, bits);
    w.push_back(add(w.back(), wi));
    s.push_back(add(s.back(), sub(Enclosure::pow2i(i - 1, bits), wi)));
  }
  auto wsum = [&](int a, int b) {  // sum_{i=a..b} w_i, needs 3 <= a <= b
    return sub(w[static_cast<size_t>(b - 2)], w[static_cast<size_t>(a - 3)]);
  };
  auto ssum = [&](int a, int b) {
    return sub(s[static_cast<size_t>(b - 2)], s[static_cast<size_t>(a - 3)]);
  };

  ThresholdScan scan;
  for (int n = 3; n + 2 <= m_max; ++n) {
    bool all_hold = true;
    for (int m = n + 2; m <= m_max; ++m) {
      Enclosure lhs = wsum(n, m - 1);
      Enclosure rhs = mul(epsilon, ssum(n + 1, m - 1));
      if (compare(lhs, rhs) != Ordering::Less) {
        scan.failures.emplace_back(n, m);
        all_hold = false;
        break;
      }
    }
    if (all_hold) {
      scan.n0 = n;
      scan.lhs_at_tightest = wsum(n, n + 1);
      scan.rhs_at_tightest = mul(epsilon, ssum(n + 1, n + 1));
      break;
    }
  }
  return scan;
}

CheckResult Verifier::find_n0() const {
  Stopwatch watch;
  CheckResult res;
  res.check_id = "eq3_threshold_n0";
  res.precision_bits = cfg_.precision_bits;
  res.range_used = "m <= " + std::to_string(cfg_.m_max);
  ThresholdScan scan = scan_threshold(cfg_.epsilon, cfg_.m_max);
  res.points_checked = static_cast<long>(scan.failures.size()) + 1;
  if (scan.n0) {
    res.status = CheckStatus::Verified;
    res.extremal_constant = Enclosure(static_cast<long>(*scan.n0),
                                      cfg_.precision_bits);
    res.note = "n0=" + std::to_string(*scan.n0) + " margin at (n0, n0+2): lhs " +
               enc_str(scan.lhs_at_tightest->hi()) + " < rhs " +
               enc_str(scan.rhs_at_tightest->lo());
  } else {
    res.status = CheckStatus::Undetermined;
    res.note = "no threshold found with m_max=" + std::to_string(cfg_.m_max) +
               " (existence not decidable on a finite scan)";
  }
  res.wall_time_ms = watch.ms();
  return res;
}

CheckResult Verifier::check_measure_bound() const {
  Stopwatch watch;
  CheckResult res;
  res.check_id = "eq4_measure_bound";
  res.precision_bits = cfg_.precision_bits;
  const int bits = cfg_.precision_bits;
  const Enclosure& eps = cfg_.epsilon;

  ThresholdScan scan = scan_threshold(eps, cfg_.m_max);
  if (!scan.n0) {
    res.status = CheckStatus::Undetermined;
    res.note = "no summation threshold; samples cannot be made admissible";
    res.wall_time_ms = watch.ms();
    return res;
  }
  const int n0 = *scan.n0;
  const int m_cap = static_cast<int>(
      std::min<long>(static_cast<long>(std::log2(static_cast<double>(
                         cfg_.range_exponent_max))),
                     model_->table().n_max()));
  res.range_used = "x,y >= 2^2^" + std::to_string(n0) + ", window up to 2^2^" +
                   std::to_string(m_cap) + ", " + std::to_string(cfg_.samples) +
                   " samples";
  if (n0 + 3 > m_cap) {
    res.status = CheckStatus::Undetermined;
    res.note = "threshold n0=" + std::to_string(n0) +
               " leaves no admissible (n, m) pairs within the range budget";
    res.wall_time_ms = watch.ms();
    return res;
  }

  // Zone-width prefix sums for the case bounds.
  const ZoneShape& shape = model_->table().shape();
  std::vector<Enclosure> w(1, Enclosure(0L, bits)), s(1, Enclosure(0L, bits));
  for (int i = 3; i <= m_cap; ++i) {
    Enclosure wi = shape.zone_width(i, bits);
    w.push_back(add(w.back(), wi));
    s.push_back(add(s.back(), sub(Enclosure::pow2i(i - 1, bits), wi)));
  }
  auto wsum = [&](int a, int b) {
    return sub(w[static_cast<size_t>(b - 2)], w[static_cast<size_t>(a - 3)]);
  };
  auto ssum = [&](int a, int b) {
    return sub(s[static_cast<size_t>(b - 2)], s[static_cast<size_t>(a - 3)]);
  };

  std::mt19937_64 rng(cfg_.seed);
  auto dyadic_in_block = [&](int k) {
    // 2^(k-1) * (1 + j/4096), j in [1, 4096]: a point strictly inside
    // (2^(k-1), 2^k], never equal to an irrational breakpoint.
    std::uniform_int_distribution<long> dj(1, 4096);
    Enclosure base = Enclosure::pow2i(k - 1, bits);
    Enclosure frac = div(Enclosure(dj(rng), bits), Enclosure(4096L, bits));
    return mul(base, add(Enclosure(1L, bits), frac));
  };

  long verified = 0, undetermined = 0, falsified = 0, unclassified = 0;
  std::uniform_int_distribution<int> dn(n0 + 1, m_cap - 2);
  for (long it = 0; it < cfg_.samples; ++it) {
    int n = dn(rng);
    std::uniform_int_distribution<int> dm(n + 2, m_cap);
    int m = dm(rng);
    Enclosure y_log = dyadic_in_block(n);
    Enclosure t_log = dyadic_in_block(m);
    Enclosure x_log = sub(t_log, y_log);

    auto [mu_a, mu_b] = model_->phi_measure(y_log, t_log);
    Ordering main = compare(mu_a, mul(eps, mu_b));
    if (main == Ordering::Less) {
      ++verified;
    } else if (main == Ordering::Undetermined) {
      ++undetermined;
      continue;
    } else {
      ++falsified;
      if (!res.witness) {
        res.witness = make_witness(
            {{"y_log", y_log}, {"x_log", x_log}, {"epsilon", eps}});
      }
      continue;
    }

    // Case analysis: position of each endpoint within its block.
    Ordering left = compare(y_log, model_->table().block(n).breakpoint);
    Ordering right = compare(t_log, model_->table().block(m).breakpoint);
    if (left == Ordering::Undetermined || right == Ordering::Undetermined) {
      ++unclassified;  // reported, not resolved
      continue;
    }
    int top = (right == Ordering::Greater) ? m : m - 1;
    Enclosure a_bound = wsum(n, top);
    Enclosure b_bound = ssum(n + 1, top);
    if (mpfr_greater_p(mu_a.lo(), a_bound.hi()) ||
        mpfr_less_p(mu_b.hi(), b_bound.lo())) {
      ++falsified;
      if (!res.witness) {
        res.witness = make_witness(
            {{"y_log", y_log}, {"x_log", x_log}, {"epsilon", eps}});
      }
    }
  }

  res.points_checked = cfg_.samples;
  res.undetermined_count = undetermined;
  res.note = "verified=" + std::to_string(verified) +
             " falsified=" + std::to_string(falsified) +
             " undetermined=" + std::to_string(undetermined) +
             " unclassified_endpoints=" + std::to_string(unclassified) +
             " n0=" + std::to_string(n0);
  if (falsified > 0) {
    res.status = CheckStatus::Falsified;
  } else if (undetermined > 0) {
    res.status = CheckStatus::Undetermined;
  } else {
    res.status = CheckStatus::Verified;
  }
  res.wall_time_ms = watch.ms();
  return res;
}

CheckResult Verifier::estimate_sandwich_c() const {
  Stopwatch watch;
  CheckResult res;
  res.check_id = "eq5_sandwich";
  res.precision_bits = cfg_.precision_bits;
  const int bits = cfg_.precision_bits;
  const long e = cfg_.range_exponent_max;
  const long n_points = 10000;
  res.range_used = "x = 2^v, v in [-4, " + std::to_string(e) + "], " +
                   std::to_string(n_points) + " points";

  long falsified = 0, undetermined = 0;
  std::optional<Enclosure> dmin;
  std::string worst_label;
  for (long j = 0; j < n_points; ++j) {
    Enclosure v = add(Enclosure(-4L, bits),
                      div(mul_long(Enclosure(e + 4, bits), j),
                          Enclosure(n_points - 1, bits)));
    Enclosure d = sub(model_->log2Phi(v), model_->log2F(v));
    if (mpfr_sgn(d.lo()) > 0) {
      ++falsified;
      if (!res.witness) res.witness = make_witness({{"v_log", v}});
    } else if (mpfr_sgn(d.hi()) > 0 && !d.is_point()) {
      // cannot certify <=; exact-equality stretches land here only when the
      // enclosure is non-degenerate on the positive side
      ++undetermined;
    }
    if (!dmin || mpfr_less_p(d.hi(), dmin->hi())) worst_label = "2^" + point_label(v);
    dmin = dmin ? min_enc(*dmin, d) : d;
  }
  Enclosure inf_ratio = exp2_enc(*dmin, bits);
  res.extremal_constant = inf_ratio;
  res.extremal_rows.emplace_back("full", "x=" + worst_label, *dmin);
  res.points_checked = n_points;
  res.undetermined_count = undetermined;

  bool lower_ok = mpfr_cmp_d(inf_ratio.lo(), 0.25) >= 0;
  bool upper_ok = mpfr_cmp_si(inf_ratio.hi(), 1) <= 0;
  res.note = "inf Phi/F in [" + enc_str(inf_ratio.lo()) + ", " +
             enc_str(inf_ratio.hi()) + "]; upper-bound falsified=" +
             std::to_string(falsified);
  if (falsified > 0) {
    res.status = CheckStatus::Falsified;
  } else if (lower_ok && upper_ok) {
    res.status = CheckStatus::Verified;
  } else {
    res.status = CheckStatus::Undetermined;
  }
  res.wall_time_ms = watch.ms();
  return res;
}

CheckResult Verifier::check_exact_ratio(int m, int n) const {
  Stopwatch watch;
  if (m < 1) throw std::invalid_argument("check_exact_ratio: m must be >= 1");
  if (n < std::max(3, m * m + 1)) {
    throw std::invalid_argument(
        "check_exact_ratio: requires n >= max(3, m^2+1); for smaller n the "
        "window [2^n - 2^m, 2^n] is not contained in a phi=2 zone (for n <= 2 "
        "no block exists at all) and the dyadic ratio identity fails");
  }
  CheckResult res;
  char id[64];
  std::snprintf(id, sizeof(id), "eq6_exact_ratio_m%d_n%02d", m, n);
  res.check_id = id;
  res.precision_bits = cfg_.precision_bits;
  res.range_used = "point identity";
  const int bits = cfg_.precision_bits;

  Enclosure y_log = sub(Enclosure::pow2i(n, bits), Enclosure::pow2i(m, bits));
  Enclosure x_log = Enclosure::pow2i(m, bits);
  Enclosure ratio = model_->f_ratio_log(y_log, x_log);
  Enclosure target = Enclosure::pow2i(m + 1, bits);
  res.extremal_constant = ratio;
  res.points_checked = 1;

  Enclosure width = ratio.width();
  bool encloses = contains(ratio, target);
  bool tight = mpfr_cmp_d(width.hi(), 0x1p-40) < 0;
  if (!overlaps(ratio, target)) {
    res.status = CheckStatus::Falsified;
    res.witness = make_witness({{"y_log", y_log},
                                {"x_log", x_log},
                                {"target_log2", target}});
    res.note = "ratio enclosure excludes the dyadic target";
  } else if (encloses && tight) {
    res.status = CheckStatus::Verified;
    res.note = "width " + enc_str(width.hi());
  } else {
    res.status = CheckStatus::Undetermined;
    res.note = "width " + enc_str(width.hi()) + " exceeds 2^-40";
  }
  res.wall_time_ms = watch.ms();
  return res;
}

CheckResult Verifier::check_phi_ratio_bound(int m, int n) const {
  Stopwatch watch;
  if (m < 1) throw std::invalid_argument("check_phi_ratio_bound: m must be >= 1");
  if (n < std::max(3, m * m + 1)) {
    throw std::invalid_argument(
        "check_phi_ratio_bound: requires n >= max(3, m^2+1), as for the exact "
        "dyadic ratio");
  }
  CheckResult res;
  char id[64];
  std::snprintf(id, sizeof(id), "eq7_phi_ratio_m%d_n%02d", m, n);
  res.check_id = id;
  res.precision_bits = cfg_.precision_bits;
  res.range_used = "point bound";
  const int bits = cfg_.precision_bits;

  Enclosure x = Enclosure::pow2i(-(1L << m), bits);
  Enclosure value = model_->dilation_eval(n, x);
  // c^-1 (2^-2^m)^2 with the derived admissible c = 1/4
  Enclosure bound = Enclosure::pow2i(2 - (1L << (m + 1)), bits);
  res.extremal_constant = value;
  res.points_checked = 1;
  res.note = "bound 2^" + std::to_string(2 - (1L << (m + 1)));

  if (mpfr_less_p(value.hi(), bound.lo())) {
    res.status = CheckStatus::Verified;
  } else if (mpfr_greater_p(value.lo(), bound.hi())) {
    res.status = CheckStatus::Falsified;
    res.witness = make_witness({{"x", x}, {"bound", bound},
                                {"n", Enclosure(static_cast<long>(n), bits)}});
  } else {
    res.status = CheckStatus::Undetermined;
  }
  res.wall_time_ms = watch.ms();
  return res;
}

VerificationReport Verifier::run_all() const {
  VerificationReport report;
  report.checks.push_back(check_monotone_ratio());
  report.checks.push_back(estimate_Cp());
  report.checks.push_back(find_n0());
  report.checks.push_back(check_measure_bound());
  report.checks.push_back(estimate_sandwich_c());
  const std::pair<int, int> exact_pairs[] = {
      {1, 3}, {1, 4}, {2, 5}, {2, 6}, {3, 10}};
  for (auto [m, n] : exact_pairs) {
    if (n <= model_->table().n_max()) {
      report.checks.push_back(check_exact_ratio(m, n));
    }
  }
  int n_hi = cfg_.n_list.empty() ? 11 : *std::max_element(cfg_.n_list.begin(),
                                                          cfg_.n_list.end());
  n_hi = std::min(n_hi, model_->table().n_max());
  for (int m : cfg_.m_list) {
    for (int n = std::max(3, m * m + 1); n <= n_hi; ++n) {
      report.checks.push_back(check_phi_ratio_bound(m, n));
    }
  }
  std::stable_sort(report.checks.begin(), report.checks.end(),
                   [](const CheckResult& a, const CheckResult& b) {
                     return a.check_id < b.check_id;
                   });
  return report;
}

bool Verifier::reverify_witness(const CheckResult& result,
                                const CounterexampleModel& model) {
  if (!result.witness) return false;
  const auto& w = *result.witness;
  auto get = [&](const char* key) -> const Enclosure& {
    auto it = w.find(key);
    if (it == w.end()) throw std::invalid_argument("witness lacks field");
    return it->second;
  };
  const std::string& id = result.check_id;
  if (id.rfind("eq1", 0) == 0) {
    Enclosure m = margin_impl(model, get("y_log"), get("x_log"));
    return mpfr_sgn(m.hi()) < 0;
  }
  if (id.rfind("eq4", 0) == 0) {
    Enclosure t = add(get("y_log"), get("x_log"));
    auto [mu_a, mu_b] = model.phi_measure(get("y_log"), t);
    return mpfr_greaterequal_p(mu_a.lo(), mul(get("epsilon"), mu_b).hi());
  }
  if (id.rfind("eq5", 0) == 0) {
    Enclosure d = sub(model.log2Phi(get("v_log")), model.log2F(get("v_log")));
    return mpfr_sgn(d.lo()) > 0;
  }
  if (id.rfind("eq6", 0) == 0) {
    Enclosure ratio = model.f_ratio_log(get("y_log"), get("x_log"));
    return !overlaps(ratio, get("target_log2"));
  }
  if (id.rfind("eq7", 0) == 0) {
    int n = static_cast<int>(get("n").lo_double());
    Enclosure v = model.dilation_eval(n, get("x"));
    return mpfr_greater_p(v.lo(), get("bound").hi());
  }
  return false;
}

namespace {

nlohmann::json enclosure_json(const Enclosure& e) {
  return nlohmann::json{{"lo", enc_str(e.lo())}, {"hi", enc_str(e.hi())}};
}

}  // namespace

std::string report_to_json(const VerificationReport& report, bool timings) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json j;
    j["check_id"] = c.check_id;
    j["status"] = to_string(c.status);
    j["witness"] = nullptr;
    if (c.witness) {
      nlohmann::json w;
      for (const auto& [k, v] : *c.witness) w[k] = enclosure_json(v);
      j["witness"] = w;
    }
    j["extremal_constant"] =
        c.extremal_constant ? enclosure_json(*c.extremal_constant)
                            : nlohmann::json(nullptr);
    j["range_used"] = c.range_used;
    j["precision_bits"] = c.precision_bits;
    j["wall_time_ms"] = timings ? c.wall_time_ms : 0.0;
    j["note"] = c.note;
    j["undetermined_count"] = c.undetermined_count;
    j["points_checked"] = c.points_checked;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string report_to_csv(const VerificationReport& report, bool timings) {
  std::ostringstream out;
  out << "check_id,status,extremal_lo,extremal_hi,range_used,precision_bits,"
         "wall_time_ms,undetermined_count,points_checked,note\n";
  auto clean = [](std::string s) {
    for (auto& ch : s) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    return s;
  };
  for (const auto& c : report.checks) {
    out << c.check_id << ',' << to_string(c.status) << ',';
    if (c.extremal_constant) {
      out << enc_str(c.extremal_constant->lo()) << ','
          << enc_str(c.extremal_constant->hi());
    } else {
      out << ',';
    }
    out << ',' << clean(c.range_used) << ',' << c.precision_bits << ','
        << (timings ? c.wall_time_ms : 0.0) << ',' << c.undetermined_count
        << ',' << c.points_checked << ',' << clean(c.note) << '\n';
  }
  return out.str();
}

std::string extremal_rows_to_csv(const VerificationReport& report) {
  std::ostringstream out;
  out << "check_id,range,point,stat_lo,stat_hi\n";
  auto clean = [](std::string s) {
    for (auto& ch : s) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    return s;
  };
  for (const auto& c : report.checks) {
    for (const auto& [range, label, stat] : c.extremal_rows) {
      out << c.check_id << ',' << clean(range) << ',' << clean(label) << ','
          << enc_str(stat.lo()) << ',' << enc_str(stat.hi()) << '\n';
    }
  }
  return out.str();
}

}  // namespace orlz
