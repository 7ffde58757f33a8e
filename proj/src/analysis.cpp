#include "orlz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace orlz {

using detail::Real;

const char* to_string(TrendVerdict v) {
  switch (v) {
    case TrendVerdict::Stabilizing: return "Stabilizing";
    case TrendVerdict::Diverging: return "Diverging";
    case TrendVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

// 1% growth of 2^sup corresponds to a log2 gap of log2(1.01).
Enclosure stabilization_gap_bound(int bits) {
  return log2_enc(Enclosure::from_decimal("1.01", bits), bits);
}

TrendVerdict classify_trend(const std::vector<Enclosure>& sups, int bits) {
  if (sups.size() < 3) return TrendVerdict::Inconclusive;
  Enclosure bound = stabilization_gap_bound(bits);
  Enclosure g_last = sub(sups[sups.size() - 1], sups[sups.size() - 2]);
  Enclosure g_prev = sub(sups[sups.size() - 2], sups[sups.size() - 3]);
  bool last_small = mpfr_less_p(g_last.hi(), bound.lo());
  bool prev_small = mpfr_less_p(g_prev.hi(), bound.lo());
  if (last_small && prev_small) return TrendVerdict::Stabilizing;
  // at least doubled across the final range step
  if (mpfr_cmp_si(g_last.lo(), 1) > 0) return TrendVerdict::Diverging;
  return TrendVerdict::Inconclusive;
}

}  // namespace

IndexEstimate estimate_indices(const OrliczModel& model,
                               std::span<const Enclosure> p_grid,
                               std::span<const long> range_exponents,
                               int grid_density, int bits) {
  if (p_grid.empty() || range_exponents.empty()) {
    throw std::invalid_argument("estimate_indices: empty grids");
  }
  for (size_t i = 1; i < range_exponents.size(); ++i) {
    if (range_exponents[i] <= range_exponents[i - 1]) {
      throw std::invalid_argument("estimate_indices: ranges must increase");
    }
  }
  if (grid_density < 2) {
    throw std::invalid_argument("estimate_indices: grid_density must be >= 2");
  }

  const long e_max = range_exponents.back();
  const int d = grid_density;

  // One shared axis: u_j = e_max * j / (d-1). Smaller ranges reuse the
  // prefix of the axis that fits, so running suprema are cumulative by
  // construction once merged with their predecessor.
  std::vector<Enclosure> axis;
  std::vector<double> axis_val;
  axis.reserve(d);
  for (int j = 0; j < d; ++j) {
    Enclosure u = div(mul_long(Enclosure(e_max, bits), j),
                      Enclosure(static_cast<long>(d - 1), bits));
    axis_val.push_back(u.hi_double());
    axis.push_back(std::move(u));
  }

  // log M at axis points and at pair sums, memoized by exact double key
  // (axis values fit a double far beyond the needed accuracy).
  std::map<double, Enclosure> logm;
  auto log_at = [&](const Enclosure& u, double key) -> const Enclosure& {
    auto it = logm.find(key);
    if (it == logm.end()) {
      it = logm.emplace(key, model.log_eval(u, bits)).first;
    }
    return it->second;
  };

  struct PairStat {
    double reach;      // max(lx, ly) in exponent units, for range filtering
    Enclosure y_log;
    Enclosure a;       // log M(xy) - log M(x)
  };
  std::vector<PairStat> pairs;
  pairs.reserve(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Enclosure sum = add(axis[i], axis[j]);
      const Enclosure& m_x = log_at(axis[i], axis_val[i]);
      const Enclosure& m_xy = log_at(sum, axis_val[i] + axis_val[j]);
      pairs.push_back(PairStat{std::max(axis_val[i], axis_val[j]), axis[j],
                               sub(m_xy, m_x)});
    }
  }

  IndexEstimate out;
  out.p_grid.assign(p_grid.begin(), p_grid.end());
  out.range_exponents.assign(range_exponents.begin(), range_exponents.end());

  for (const Enclosure& p : p_grid) {
    std::vector<Enclosure> upper_sups, lower_sups;
    std::optional<Enclosure> upper_run, lower_run;
    for (long e : range_exponents) {
      double ed = static_cast<double>(e);
      for (const PairStat& ps : pairs) {
        if (ps.reach > ed * (1 + 1e-12)) continue;
        Enclosure stat_up = sub(ps.a, mul(p, ps.y_log));
        Enclosure stat_dn = neg(stat_up);
        upper_run = upper_run ? max_enc(*upper_run, stat_up) : stat_up;
        lower_run = lower_run ? max_enc(*lower_run, stat_dn) : stat_dn;
      }
      upper_sups.push_back(*upper_run);
      lower_sups.push_back(*lower_run);
    }
    out.upper_verdict.push_back(classify_trend(upper_sups, bits));
    out.lower_verdict.push_back(classify_trend(lower_sups, bits));
    out.upper_sup_log2.push_back(std::move(upper_sups));
    out.lower_sup_log2.push_back(std::move(lower_sups));
  }

  for (size_t i = 0; i < p_grid.size(); ++i) {
    if (out.upper_verdict[i] == TrendVerdict::Stabilizing) {
      out.beta_hat = p_grid[i];
      break;
    }
  }
  for (size_t i = p_grid.size(); i-- > 0;) {
    if (out.lower_verdict[i] == TrendVerdict::Stabilizing) {
      out.alpha_hat = p_grid[i];
      break;
    }
  }
  return out;
}

namespace {

struct ChordContext {
  const OrliczModel& model;
  int bits;
  std::map<double, Enclosure> m_cache;  // u -> M(2^u), linear domain

  const Enclosure& value_at(double u) {
    auto it = m_cache.find(u);
    if (it == m_cache.end()) {
      Enclosure e = exp2_enc(
          model.log_eval(Enclosure::from_double(u, bits), bits), bits);
      it = m_cache.emplace(u, std::move(e)).first;
    }
    return it->second;
  }

  Enclosure s_of(double u) const {
    return exp2_enc(Enclosure::from_double(u, bits), bits);
  }

  // chord slope of M between s(u1) and s(u2), u1 < u2
  Enclosure chord(double u1, double u2) {
    Enclosure num = sub(value_at(u2), value_at(u1));
    Enclosure den = sub(s_of(u2), s_of(u1));
    return div(num, den);
  }

  // g(u) = t * s - M(s)
  Enclosure g(const Enclosure& t, double u) {
    return sub(mul(t, s_of(u)), value_at(u));
  }
};

}  // namespace

ConjugateResult conjugate_eval(const OrliczModel& model, const Enclosure& t,
                               int bits, long max_exponent) {
  if (!model.convexity_certified()) {
    throw std::invalid_argument("conjugate_eval: model '" + model.name() +
                                "' is not convexity-certified");
  }
  if (mpfr_sgn(t.lo()) < 0) {
    throw std::domain_error("conjugate_eval: t must be >= 0");
  }
  ConjugateResult res;
  if (mpfr_sgn(t.hi()) == 0) {  // sup_{s} -M(s) = 0
    res.kind = ConjugateResult::Kind::Finite;
    res.value = Enclosure(0L, bits);
    return res;
  }
  if (auto cap = model.asymptotic_linear_slope(bits)) {
    if (mpfr_greater_p(t.lo(), cap->hi())) {
      res.kind = ConjugateResult::Kind::Infinite;
      return res;
    }
  }

  ChordContext ctx{model, bits, {}};
  const double u_cap = static_cast<double>(max_exponent);

  // Right end: a chord certainly above t certifies that g decreases past it.
  double ub = 1;
  while (!(mpfr_greater_p(ctx.chord(ub, ub + 1).lo(), t.hi()))) {
    ub = ub * 2;
    if (ub > u_cap) {
      if (model.asymptotic_linear_slope(bits)) {
        res.kind = ConjugateResult::Kind::Infinite;  // slope stays capped below t
      } else {
        res.kind = ConjugateResult::Kind::BudgetExhausted;
      }
      return res;
    }
  }
  ub = ub + 1;

  // Left end: a right-chord at ua certainly below t certifies that the
  // subgradient stays below t on (0, ua], so g is nondecreasing there.
  double ua = 0;
  bool have_left = false;
  for (double step = 1; ; step *= 2) {
    if (mpfr_lessequal_p(ctx.chord(ua, ua + 1).hi(), t.lo())) {
      have_left = true;
      break;
    }
    ua -= step;
    if (ua <= -u_cap) {
      ua = -u_cap;
      break;
    }
  }

  // Shrink the bracket with certified slope probes. The split point uses a
  // non-dyadic fraction so it can never land exactly on a kink of the
  // piecewise models (their kinks sit at dyadic or irrational arguments),
  // hence some probe scale always certifies a side.
  for (int iter = 0; iter < 500; ++iter) {
    double width = ub - ua;
    if (width <= std::max(1.0, std::fabs(ub)) * 0x1p-45) break;
    double mid = ua + width * (5.0 / 11.0);
    bool moved = false;
    for (double h = width / 16; h > width * 0x1p-34; h /= 4) {
      if (mpfr_lessequal_p(ctx.chord(mid, mid + h).hi(), t.lo())) {
        ua = mid;
        have_left = true;
        moved = true;
        break;
      }
      if (mpfr_greaterequal_p(ctx.chord(mid - h, mid).lo(), t.hi())) {
        ub = mid;
        moved = true;
        break;
      }
    }
    if (!moved) break;  // kink not separable at working precision
  }

  // Bounds. Lower: best evaluated point (and 0, since g -> 0 at s -> 0).
  Enclosure lb(0L, bits);
  for (double u : {ua, ua + (ub - ua) / 2, ub}) {
    lb = max_enc(lb, ctx.g(t, u));
  }
  Real lbr(bits);
  mpfr_set(lbr.get(), lb.lo(), MPFR_RNDD);

  // Upper: tangent caps through the bracket ends, using outer chords as
  // certified one-sided slope bounds, plus the unbracketed left tail t*s.
  double h_out = std::max((ub - ua), 0x1p-60 * std::max(1.0, std::fabs(ub)));
  Enclosure lam_a = ctx.chord(ua - h_out, ua);
  Enclosure lam_b = ctx.chord(ub, ub + h_out);
  Enclosure ds = sub(ctx.s_of(ub), ctx.s_of(ua));
  Enclosure cap_left =
      add(ctx.g(t, ua), mul(clamp_nonneg(sub(t, lam_a)), ds));
  Enclosure cap_right =
      add(ctx.g(t, ub), mul(clamp_nonneg(sub(lam_b, t)), ds));
  Enclosure ub_enc = min_enc(cap_left, cap_right);
  ub_enc = max_enc(ub_enc, ctx.g(t, ua));
  ub_enc = max_enc(ub_enc, ctx.g(t, ub));
  if (!have_left) {
    // everything below s = 2^-u_cap is bounded by t * s
    ub_enc = max_enc(ub_enc, mul(t, ctx.s_of(-u_cap)));
  }
  ub_enc = max_enc(ub_enc, Enclosure(0L, bits));

  Real ubr(bits);
  mpfr_set(ubr.get(), ub_enc.hi(), MPFR_RNDU);
  if (mpfr_less_p(ubr.get(), lbr.get())) {
    // numerical caps crossed below the witness; keep the honest hull
    mpfr_set(ubr.get(), lb.hi(), MPFR_RNDU);
  }
  res.kind = ConjugateResult::Kind::Finite;
  res.value = Enclosure::from_endpoints(std::move(lbr), std::move(ubr), bits);
  return res;
}

Nabla3Report nabla3_probe(const OrliczModel& model, const Enclosure& C,
                          std::span<const Enclosure> t_grid, int bits,
                          long max_exponent) {
  if (mpfr_cmp_si(C.lo(), 1) <= 0) {
    throw std::invalid_argument("nabla3_probe: C must be > 1");
  }
  Nabla3Report rep;
  for (const Enclosure& t : t_grid) {
    ConjugateResult den = conjugate_eval(model, t, bits, max_exponent);
    ConjugateResult num = conjugate_eval(model, mul(C, t), bits, max_exponent);
    if (den.kind != ConjugateResult::Kind::Finite ||
        num.kind != ConjugateResult::Kind::Finite ||
        !den.value->is_certainly_positive()) {
      ++rep.skipped;
      continue;
    }
    rep.table.emplace_back(t, div(*num.value, *den.value));
  }
  if (rep.table.size() < 6) return rep;

  size_t half = rep.table.size() / 2;
  // top-half running minimum vs bottom-half maximum
  Enclosure top_min = rep.table[half].second;
  bool increasing = true;
  for (size_t i = half; i < rep.table.size(); ++i) {
    top_min = min_enc(top_min, rep.table[i].second);
    if (i > half &&
        mpfr_less_p(rep.table[i].second.hi(), rep.table[i - 1].second.lo())) {
      increasing = false;
    }
  }
  Enclosure bot_max = rep.table[0].second;
  for (size_t i = 0; i < half; ++i) bot_max = max_enc(bot_max, rep.table[i].second);

  if (increasing &&
      mpfr_greater_p(top_min.lo(), mul_long(bot_max, 10).hi())) {
    rep.verdict = TrendVerdict::Diverging;
    return rep;
  }

  // per-octave minima within a fixed band -> bounded-likely
  size_t buckets = std::min<size_t>(6, rep.table.size() / 3);
  size_t per = rep.table.size() / buckets;
  std::vector<Enclosure> mins;
  for (size_t b = 0; b < buckets; ++b) {
    Enclosure m = rep.table[b * per].second;
    for (size_t i = b * per; i < std::min((b + 1) * per, rep.table.size()); ++i) {
      m = min_enc(m, rep.table[i].second);
    }
    mins.push_back(m);
  }
  Enclosure band_lo = mins[0], band_hi = mins[0];
  for (const auto& m : mins) {
    band_lo = min_enc(band_lo, m);
    band_hi = max_enc(band_hi, m);
  }
  if (band_lo.is_certainly_positive() &&
      mpfr_lessequal_p(band_hi.hi(), mul_long(band_lo, 8).lo())) {
    rep.verdict = TrendVerdict::Stabilizing;
  }
  return rep;
}

namespace {

LimitCandidate sample_dilations_common(const OrliczModel& model,
                                       std::vector<int> n_list,
                                       std::span<const Enclosure> y_logs,
                                       std::span<const Enclosure> grid,
                                       int bits) {
  LimitCandidate out;
  out.grid.assign(grid.begin(), grid.end());
  out.n_list = std::move(n_list);
  for (const Enclosure& x : grid) {
    if (!x.is_certainly_positive() || mpfr_cmp_d(x.hi(), 0.5) > 0) {
      throw std::invalid_argument("sample_dilations: grid point outside (0, 1/2]");
    }
  }
  Enclosure unit = hull(Enclosure(0L, bits), Enclosure(1L, bits));
  for (const Enclosure& y_log : y_logs) {
    Enclosure m_y = model.log_eval(y_log, bits);
    std::vector<Enclosure> row;
    row.reserve(grid.size());
    for (const Enclosure& x : grid) {
      Enclosure u = add(log2_enc(x, bits), y_log);
      Enclosure v = exp2_enc(sub(model.log_eval(u, bits), m_y), bits);
      row.push_back(intersect(v, unit));
    }
    out.samples.push_back(std::move(row));
  }
  for (size_t k = 0; k + 1 < out.samples.size(); ++k) {
    Enclosure gap(0L, bits);
    for (size_t i = 0; i < grid.size(); ++i) {
      gap = max_enc(gap, abs_enc(sub(out.samples[k + 1][i], out.samples[k][i])));
    }
    out.cauchy_gaps.push_back(gap);
  }
  return out;
}

}  // namespace

LimitCandidate sample_dilations(const OrliczModel& model,
                                std::span<const int> n_list,
                                std::span<const Enclosure> grid, int bits) {
  std::vector<Enclosure> y_logs;
  std::vector<int> ns(n_list.begin(), n_list.end());
  for (size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1 || (i > 0 && ns[i] <= ns[i - 1])) {
      throw std::invalid_argument("sample_dilations: n_list must be increasing and >= 1");
    }
    y_logs.push_back(Enclosure::pow2i(ns[i], bits));
  }
  return sample_dilations_common(model, std::move(ns), y_logs, grid, bits);
}

LimitCandidate sample_dilations_at(const OrliczModel& model,
                                   std::span<const Enclosure> y_log_list,
                                   std::span<const Enclosure> grid, int bits) {
  std::vector<int> tags(y_log_list.size());
  for (size_t i = 0; i < tags.size(); ++i) tags[i] = static_cast<int>(i);
  return sample_dilations_common(model, std::move(tags), y_log_list, grid, bits);
}

EquivalenceProbe equivalence_at_zero_probe(const LimitCandidate& candidate,
                                           std::span<const int> m_list,
                                           int bits) {
  if (candidate.samples.empty()) {
    throw std::invalid_argument("equivalence_at_zero_probe: empty candidate");
  }
  const auto& last = candidate.samples.back();

  EquivalenceProbe out;
  for (int m : m_list) {
    if (m < 1 || m > 62) {
      throw std::invalid_argument("equivalence_at_zero_probe: bad m");
    }
    Enclosure x = Enclosure::pow2i(-(1L << m), bits);
    size_t idx = candidate.grid.size();
    for (size_t i = 0; i < candidate.grid.size(); ++i) {
      if (candidate.grid[i].is_point() &&
          mpfr_equal_p(candidate.grid[i].lo(), x.lo())) {
        idx = i;
        break;
      }
    }
    if (idx == candidate.grid.size()) {
      throw std::invalid_argument(
          "equivalence_at_zero_probe: grid lacks the point 2^-2^" +
          std::to_string(m));
    }
    out.ratios.emplace_back(m, div(last[idx], x, bits));
  }

  bool halving = out.ratios.size() >= 2;
  for (size_t i = 0; i + 1 < out.ratios.size(); ++i) {
    // next ratio certifiably at most half the previous
    if (!mpfr_lessequal_p(mul_long(out.ratios[i + 1].second, 2).hi(),
                          out.ratios[i].second.lo())) {
      halving = false;
      break;
    }
  }
  bool small_tail =
      !out.ratios.empty() &&
      mpfr_less_p(out.ratios.back().second.hi(), Enclosure::pow2i(-8, bits).lo());
  if (halving && small_tail) {
    out.verdict = EquivalenceProbe::Verdict::NotEquivalentToH;
  }
  return out;
}

LogMagnitude luxemburg_modular(const OrliczModel& model, const StepFunction& x,
                               const Enclosure& lambda, int bits) {
  if (!lambda.is_certainly_positive()) {
    throw std::domain_error("luxemburg_modular: lambda must be positive");
  }
  std::vector<LogMagnitude> terms;
  Enclosure l_log = log2_enc(lambda, bits);
  for (const auto& piece : x.pieces) {
    if (mpfr_sgn(piece.value.hi()) == 0 || mpfr_sgn(piece.measure.hi()) == 0) {
      continue;  // M(0) = 0
    }
    Enclosure u = sub(log2_enc(piece.value, bits), l_log);
    Enclosure term = add(model.log_eval(u, bits), log2_enc(piece.measure, bits));
    terms.push_back(LogMagnitude::from_exp2(term));
  }
  return log_sum(std::span<const LogMagnitude>(terms), bits);
}

Enclosure luxemburg_norm(const OrliczModel& model, const StepFunction& x,
                         int bits) {
  Enclosure total(0L, bits);
  Enclosure vmax(0L, bits);
  bool all_zero = true;
  for (const auto& piece : x.pieces) {
    if (mpfr_sgn(piece.value.lo()) < 0 || mpfr_sgn(piece.measure.lo()) < 0) {
      throw std::invalid_argument("luxemburg_norm: negative value or measure");
    }
    total = add(total, piece.measure);
    vmax = max_enc(vmax, piece.value);
    if (mpfr_sgn(piece.value.hi()) > 0 && mpfr_sgn(piece.measure.hi()) > 0) {
      all_zero = false;
    }
  }
  if (mpfr_cmp_si(total.lo(), 1) > 0) {
    throw std::invalid_argument("luxemburg_norm: total measure exceeds 1");
  }
  if (all_zero) return Enclosure(0L, bits);

  LogMagnitude one = LogMagnitude::one(bits);
  auto mod_at = [&](const Enclosure& lam) {
    return compare(luxemburg_modular(model, x, lam, bits), one);
  };

  // Bracket the crossing of the decreasing modular.
  Enclosure hi = max_enc(vmax, Enclosure(1L, bits));
  for (int i = 0; i < 256 && mod_at(hi) == Ordering::Greater; ++i) {
    hi = mul_long(hi, 2);
  }
  Enclosure lo = hi;
  for (int i = 0; i < 512 && mod_at(lo) != Ordering::Greater; ++i) {
    lo = div(lo, Enclosure(2L, bits));
  }
  // lo has modular > 1 (or is microscopic), hi has modular <= 1

  Enclosure tol = exp2_enc(Enclosure(-(bits / 4), bits));
  for (int i = 0; i < 4 * bits; ++i) {
    Enclosure width = sub(hi, lo);
    if (mpfr_less_p(width.hi(), mul(tol, lo).lo())) break;
    Enclosure mid = add(lo, div(width, Enclosure(2L, bits))).midpoint();
    Ordering o = mod_at(mid);
    if (o == Ordering::Greater) {
      lo = mid;
    } else if (o == Ordering::Less || o == Ordering::Equal) {
      hi = mid;
    } else {
      break;  // precision exhausted at the crossing
    }
  }
  Real a(bits), b(bits);
  mpfr_set(a.get(), lo.lo(), MPFR_RNDD);
  mpfr_set(b.get(), hi.hi(), MPFR_RNDU);
  return Enclosure::from_endpoints(std::move(a), std::move(b), bits);
}

}  // namespace orlz
