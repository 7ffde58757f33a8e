// verifier.hpp
//
// Certified checks for the displayed inequalities of the block construction.
// Every check compares enclosures: Verified needs the inequality to hold
// with interval strictness, Falsified needs a certified violation (and then
// carries a witness), anything else is Undetermined and counted, never
// dropped. Raising precision can only turn Undetermined into Verified.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orlz/construction.hpp"
#include "orlz/enclosure.hpp"

namespace orlz {

enum class CheckStatus { Verified, Falsified, Undetermined };
const char* to_string(CheckStatus s);

struct CheckConfig {
  int precision_bits = kDefaultBits;
  int n_max = CounterexampleModel::kDefaultMaxBlock;
  // Grids cover log2-arguments in [0, range_exponent_max].
  long range_exponent_max = 1024;
  int grid_points = 200;  // per axis, uniform grids
  Enclosure p = Enclosure(2L);
  Enclosure epsilon = Enclosure::from_double(0.25);
  std::vector<int> m_list = {1, 2, 3};
  std::vector<int> n_list = {3, 4, 5, 6, 7, 8, 9, 10, 11};
  int m_max = 40;        // scan limit for the summation threshold
  long samples = 1000;   // admissible samples for the measure bound
  std::uint64_t seed = 20200127;  // deterministic sampler
  bool timings = false;  // emit measured wall times instead of zeros
};

struct CheckResult {
  std::string check_id;
  CheckStatus status = CheckStatus::Undetermined;
  // Violating point, present iff status == Falsified.
  std::optional<std::map<std::string, Enclosure>> witness;
  std::optional<Enclosure> extremal_constant;
  std::string range_used;
  int precision_bits = 0;
  double wall_time_ms = 0;
  std::string note;
  long undetermined_count = 0;
  long points_checked = 0;
  // Per-range extremal rows (range label, coordinates, statistic).
  std::vector<std::tuple<std::string, std::string, Enclosure>> extremal_rows;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  CheckStatus overall() const;
};

// Scan result for the zone-sum threshold inequality.
struct ThresholdScan {
  std::optional<int> n0;
  // Tightest admissible pair (n0, n0+2): both sides of the inequality.
  std::optional<Enclosure> lhs_at_tightest;
  std::optional<Enclosure> rhs_at_tightest;
  // (n, m) pairs that failed while scanning below n0.
  std::vector<std::pair<int, int>> failures;
};

class Verifier {
 public:
  explicit Verifier(CheckConfig cfg);
  Verifier(CheckConfig cfg, std::shared_ptr<const CounterexampleModel> model);

  const CounterexampleModel& model() const { return *model_; }
  const CheckConfig& config() const { return cfg_; }

  // F(xy)/F(y) >= x over the grid, including the y < 1 extension.
  CheckResult check_monotone_ratio() const;
  // Running sup of F(xy)/(F(y) x^p) over nested landmark grids.
  CheckResult estimate_Cp() const;
  CheckResult estimate_Cp(const Enclosure& p) const;
  // Existence threshold for the zone-sum inequality.
  CheckResult find_n0() const;
  ThresholdScan scan_threshold(const Enclosure& epsilon, int m_max) const;
  // mu(A) < eps mu(B) on admissible samples, with the four case bounds.
  CheckResult check_measure_bound() const;
  // c F <= Phi <= F with the derived c = 1/4.
  CheckResult estimate_sandwich_c() const;
  // F(2^-2^m t_n)/F(t_n) = 2^-2^(m+1), exact dyadic ratio.
  CheckResult check_exact_ratio(int m, int n) const;
  // Phi-ratio quadratic envelope with c = 1/4.
  CheckResult check_phi_ratio_bound(int m, int n) const;

  VerificationReport run_all() const;

  // Re-evaluates a Falsified witness standalone on the given model (meant to
  // be built at doubled precision); true iff the violation still certifies.
  static bool reverify_witness(const CheckResult& result,
                               const CounterexampleModel& model);

  // log2 F(xy)/F(y) - log2 x for any real y_log (the x<1 extension included).
  Enclosure monotone_margin(const Enclosure& y_log, const Enclosure& x_log) const;

 private:
  std::vector<long> range_ladder() const;
  std::vector<Enclosure> landmark_points(long range) const;

  CheckConfig cfg_;
  std::shared_ptr<const CounterexampleModel> model_;
};

// Serialization. Enclosure endpoints are emitted as decimal strings; wall
// times are zeroed unless timings were requested, keeping outputs
// byte-identical for identical configurations.
std::string report_to_json(const VerificationReport& report, bool timings);
std::string report_to_csv(const VerificationReport& report, bool timings);
std::string extremal_rows_to_csv(const VerificationReport& report);

}  // namespace orlz
