// construction.hpp
//
// The piecewise-dyadic construction: a step density phi on (0, inf) that is
// 1 everywhere except on thin zones (2^n - 2^sqrt(n), 2^n] where it is 2,
// its integral f, the function F(x) = 2^f(log2 x) (identity below 1), and
// Phi(x) = integral of F(t)/t. Everything is evaluated in the log2 domain
// with per-block closed forms; block data is materialized eagerly up to a
// configured budget and immutable afterwards, so a model can be shared
// across threads.

#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "orlz/enclosure.hpp"
#include "orlz/log_magnitude.hpp"

namespace orlz {

// Exceeding the configured exponent budget is a resource error, reported
// distinctly from domain errors and never truncated silently.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

enum class PhiValue { One, Two, Undetermined };

const char* to_string(PhiValue v);

// Shape of the zone family. The default is the production construction;
// tests substitute broken variants to exercise the verifier's failure paths.
struct ZoneShape {
  enum class Width {
    SqrtN,     // zone width 2^sqrt(n)
    HalfBlock  // zone is the whole block (2^{n-1}, 2^n]
  };
  Width width = Width::SqrtN;
  // Exact dyadic slope on the zone: slope_num / 2^slope_den_log2.
  long slope_num = 2;
  int slope_den_log2 = 0;

  Enclosure zone_slope(int bits) const;
  Enclosure zone_width(int n, int bits) const;
  bool is_production() const {
    return width == Width::SqrtN && slope_num == 2 && slope_den_log2 == 0;
  }
};

// One dyadic block (2^{n-1}, 2^n] of the log-argument domain, n >= 3.
struct Block {
  int n = 0;
  Enclosure start;       // exact 2^{n-1}
  Enclosure end;         // exact 2^n
  Enclosure zone_width;  // 2^sqrt(n) for the production shape
  Enclosure breakpoint;  // end - zone_width; point interval iff n is a square
  Enclosure f_at_start;
  Enclosure f_at_end;
};

class BlockTable {
 public:
  BlockTable(int n_max, int bits, ZoneShape shape = {});

  int n_max() const { return n_max_; }
  int bits() const { return bits_; }
  const ZoneShape& shape() const { return shape_; }
  const Block& block(int n) const;

  // Phi(2^(2^n)), i.e. the cumulative integral at the end of block n.
  // n = 2 is the base of the recursion: Phi(16) = 16.
  const LogMagnitude& phi_prefix(int n) const;

  // Largest admissible log2-argument (the point 2^n_max).
  const Enclosure& u_limit() const { return u_limit_; }

 private:
  int n_max_;
  int bits_;
  ZoneShape shape_;
  std::vector<Block> blocks_;        // index 0 -> n = 3
  std::vector<LogMagnitude> prefix_;  // index 0 -> n = 2
  Enclosure u_limit_;
};

class CounterexampleModel {
 public:
  static constexpr int kDefaultMaxBlock = 16;

  explicit CounterexampleModel(int n_max = kDefaultMaxBlock,
                               int bits = kDefaultBits, ZoneShape shape = {});

  const BlockTable& table() const { return table_; }
  int bits() const { return bits_; }

  // The step density at t (log-domain argument). Requires t > 0. Returns
  // Undetermined when the enclosure straddles a zone boundary.
  PhiValue phi(const Enclosure& t) const;

  // f(u) = integral of phi over (0, u]. Requires u >= 0.
  Enclosure f_eval(const Enclosure& u) const;

  // F at a positive magnitude: log2 F(2^v) = f(v) for v >= 0 and v below.
  LogMagnitude F_eval(const LogMagnitude& x) const;

  // log2 of F(xy)/F(y) for y = 2^y_log, x = 2^x_log; computed structurally
  // as x_log + (zone slope - 1) * mu(zone part of [y_log, y_log + x_log]),
  // which cancels exactly on zone-free windows. Requires both args >= 0.
  Enclosure f_ratio_log(const Enclosure& y_log, const Enclosure& x_log) const;

  // Lebesgue measures of the phi=2 and phi=1 parts of [a, b], 0 <= a <= b.
  std::pair<Enclosure, Enclosure> phi_measure(const Enclosure& a,
                                              const Enclosure& b) const;

  // Phi(x) = integral of F(t)/t over (0, x].
  LogMagnitude Phi_eval(const LogMagnitude& x) const;

  // Phi(x * 2^(2^n)) / Phi(2^(2^n)) for x in (0, 1/2], clamped into [0, 1].
  Enclosure dilation_eval(int n, const Enclosure& x) const;

  // Log-domain profiles (any real v): log2 F(2^v) and log2 Phi(2^v).
  Enclosure log2F(const Enclosure& v) const;
  Enclosure log2Phi(const Enclosure& v) const;

 private:
  Enclosure f_point(mpfr_srcptr u) const;      // u >= 0
  Enclosure log2F_point(mpfr_srcptr v) const;  // any v
  Enclosure log2Phi_point(mpfr_srcptr v) const;
  LogMagnitude F_of_point(const Enclosure& u) const;
  int block_index_of(mpfr_srcptr u) const;  // block n with 2^{n-1} < u <= 2^n
  void check_u_budget(mpfr_srcptr u, const char* where) const;

  int bits_;
  BlockTable table_;
};

}  // namespace orlz
