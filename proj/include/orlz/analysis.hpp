// analysis.hpp
//
// Generic analysis over any OrliczModel: Matuszewska-Orlicz index estimation
// by running grid suprema, Young conjugates by bracketed subgradient search,
// a heuristic probe for the nabla_3 conjugate-ratio divergence, dilation
// sampling with Cauchy gaps, an equivalence-at-zero probe, and Luxemburg
// norms of step functions. All operations are pure; per-point work can be
// distributed freely as long as results are merged by key.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "orlz/log_magnitude.hpp"
#include "orlz/models.hpp"

namespace orlz {

enum class TrendVerdict { Stabilizing, Diverging, Inconclusive };
const char* to_string(TrendVerdict v);

struct IndexEstimate {
  std::vector<Enclosure> p_grid;
  std::vector<long> range_exponents;
  // Running sup of log2[ M(xy) / (M(x) y^p) ] per p (row) and range (col);
  // finite suprema of this statistic characterize the upper index.
  std::vector<std::vector<Enclosure>> upper_sup_log2;
  // Dual statistic log2[ M(x) y^p / M(xy) ] for the lower index.
  std::vector<std::vector<Enclosure>> lower_sup_log2;
  std::vector<TrendVerdict> upper_verdict;
  std::vector<TrendVerdict> lower_verdict;
  std::optional<Enclosure> beta_hat;   // smallest p with a stabilizing upper sup
  std::optional<Enclosure> alpha_hat;  // largest p with a stabilizing lower sup
};

IndexEstimate estimate_indices(const OrliczModel& model,
                               std::span<const Enclosure> p_grid,
                               std::span<const long> range_exponents,
                               int grid_density, int bits);

struct ConjugateResult {
  enum class Kind {
    Finite,
    Infinite,         // detected unbounded: slope of M certified below t
    BudgetExhausted,  // search hit the exponent budget undecided
  };
  Kind kind = Kind::BudgetExhausted;
  std::optional<Enclosure> value;  // set iff Finite
};

// Young conjugate sup{ts - M(s) : s >= 0}. Requires a convexity-certified
// model. max_exponent bounds the log2 of probed s.
ConjugateResult conjugate_eval(const OrliczModel& model, const Enclosure& t,
                               int bits, long max_exponent = 1 << 14);

struct Nabla3Report {
  TrendVerdict verdict = TrendVerdict::Inconclusive;  // DivergesLikely <-> Diverging
  // (t, conjugate-ratio) rows; rows with non-finite conjugates are dropped
  // and counted.
  std::vector<std::pair<Enclosure, Enclosure>> table;
  int skipped = 0;
  // The verdict is a finite-sample heuristic, never a proof; kept in the
  // report so downstream serializers can say so.
  bool heuristic = true;
};

// Ratio table of conj(C t)/conj(t) over t_grid with a heuristic verdict:
// Diverging when the top-half running minimum dominates the bottom-half
// maximum tenfold and keeps rising; Stabilizing ("bounded") when per-octave
// minima stay inside a fixed band; Inconclusive otherwise.
Nabla3Report nabla3_probe(const OrliczModel& model, const Enclosure& C,
                          std::span<const Enclosure> t_grid, int bits,
                          long max_exponent = 1 << 14);

struct LimitCandidate {
  std::vector<Enclosure> grid;   // sample points in (0, 1/2]
  std::vector<int> n_list;       // scales y = 2^(2^n)
  std::vector<std::vector<Enclosure>> samples;  // [n_index][grid_index]
  std::vector<Enclosure> cauchy_gaps;  // sup|row k+1 - row k|, length n-1
};

// Samples x -> M(x y)/M(y) at the scales y = 2^(2^n), n in n_list.
LimitCandidate sample_dilations(const OrliczModel& model,
                                std::span<const int> n_list,
                                std::span<const Enclosure> grid, int bits);

// Exploration variant with arbitrary scales y = 2^y_log.
LimitCandidate sample_dilations_at(const OrliczModel& model,
                                   std::span<const Enclosure> y_log_list,
                                   std::span<const Enclosure> grid, int bits);

struct EquivalenceProbe {
  enum class Verdict { NotEquivalentToH, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::pair<int, Enclosure>> ratios;  // (m, N(2^-2^m) / 2^-2^m)
};

// Uses the last sampled dilation as the limit candidate N and tabulates
// N(2^-2^m)/2^-2^m; NotEquivalentToH when the ratios certifiably halve at
// every step and the final one is certifiably below 2^-8. The grid must
// contain the points 2^-2^m exactly.
EquivalenceProbe equivalence_at_zero_probe(const LimitCandidate& candidate,
                                           std::span<const int> m_list,
                                           int bits);

struct StepFunction {
  struct Piece {
    Enclosure value;
    Enclosure measure;
  };
  std::vector<Piece> pieces;  // values >= 0, measures >= 0, total measure <= 1
};

// Luxemburg norm inf{lambda > 0 : sum_i mu_i M(v_i / lambda) <= 1} by
// bisection on the monotone modular; exact zero for the zero function.
Enclosure luxemburg_norm(const OrliczModel& model, const StepFunction& x,
                         int bits);

// The modular sum_i mu_i M(v_i / lambda) as a log magnitude (helper shared
// with tests).
LogMagnitude luxemburg_modular(const OrliczModel& model, const StepFunction& x,
                               const Enclosure& lambda, int bits);

}  // namespace orlz
