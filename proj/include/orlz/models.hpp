// models.hpp
//
// The evaluable Orlicz-function abstraction used by the analysis layer: a
// model maps u = log2(x) to an enclosure of log2 M(2^u). Instances: power
// functions, normalized powers s^p/p, s*log2(2+s), the block-construction
// profiles F and Phi, and piecewise-linear tabulated models from files.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orlz/construction.hpp"
#include "orlz/enclosure.hpp"

namespace orlz {

class OrliczModel {
 public:
  virtual ~OrliczModel() = default;

  // Enclosure of log2 M(2^u).
  virtual Enclosure log_eval(const Enclosure& u, int bits) const = 0;
  virtual const std::string& name() const = 0;
  // True only when convexity of M is proven for the instance; consumers that
  // need convexity (the conjugate) must reject uncertified models.
  virtual bool convexity_certified() const = 0;
  // For models whose slope is bounded (M asymptotically linear): an upper
  // enclosure of lim M'(s). Lets the conjugate certify +infinity.
  virtual std::optional<Enclosure> asymptotic_linear_slope(int bits) const {
    (void)bits;
    return std::nullopt;
  }

  // Linear-domain value M(s) for s > 0.
  Enclosure eval(const Enclosure& s, int bits) const;
};

// M(x) = x^p, p >= 1.
class PowerModel : public OrliczModel {
 public:
  explicit PowerModel(const Enclosure& p);
  Enclosure log_eval(const Enclosure& u, int bits) const override;
  const std::string& name() const override { return name_; }
  bool convexity_certified() const override { return true; }
  std::optional<Enclosure> asymptotic_linear_slope(int bits) const override;
  const Enclosure& exponent() const { return p_; }

 private:
  Enclosure p_;
  std::string name_;
};

// M(s) = s^p / p, p > 1 (the classical Young pair with t^q / q).
class NormalizedPowerModel : public OrliczModel {
 public:
  explicit NormalizedPowerModel(const Enclosure& p);
  Enclosure log_eval(const Enclosure& u, int bits) const override;
  const std::string& name() const override { return name_; }
  bool convexity_certified() const override { return true; }

 private:
  Enclosure p_;
  std::string name_;
};

// M(s) = s * log2(2 + s); conjugate grows exponentially.
class SLogModel : public OrliczModel {
 public:
  SLogModel() : name_("slog") {}
  Enclosure log_eval(const Enclosure& u, int bits) const override;
  const std::string& name() const override { return name_; }
  bool convexity_certified() const override { return true; }

 private:
  std::string name_;
};

// Profile of F from the block construction. Not convex: the slope of F
// drops when a zone ends, so the certificate is withheld.
class FProfileModel : public OrliczModel {
 public:
  explicit FProfileModel(std::shared_ptr<const CounterexampleModel> core);
  Enclosure log_eval(const Enclosure& u, int bits) const override;
  const std::string& name() const override { return name_; }
  bool convexity_certified() const override { return false; }
  const CounterexampleModel& core() const { return *core_; }

 private:
  std::shared_ptr<const CounterexampleModel> core_;
  std::string name_;
};

// Profile of Phi; convex because Phi'(x) = F(x)/x is nondecreasing.
class PhiProfileModel : public OrliczModel {
 public:
  explicit PhiProfileModel(std::shared_ptr<const CounterexampleModel> core);
  Enclosure log_eval(const Enclosure& u, int bits) const override;
  const std::string& name() const override { return name_; }
  bool convexity_certified() const override { return true; }
  const CounterexampleModel& core() const { return *core_; }

 private:
  std::shared_ptr<const CounterexampleModel> core_;
  std::string name_;
};

// Piecewise-linear model in (u, log2 M) coordinates, loaded from a JSON
// file: {"name": ..., "convex": bool, "points": [[u, log2M], ...]} with
// strictly increasing u and nondecreasing log2M. Evaluation outside the
// tabulated range is a domain error.
class TabulatedModel : public OrliczModel {
 public:
  static TabulatedModel load(const std::string& path);
  TabulatedModel(std::string name, bool convex,
                 std::vector<std::pair<Enclosure, Enclosure>> pts);
  Enclosure log_eval(const Enclosure& u, int bits) const override;
  const std::string& name() const override { return name_; }
  bool convexity_certified() const override { return convex_; }

 private:
  Enclosure log_eval_point(mpfr_srcptr u, int bits) const;
  std::string name_;
  bool convex_;
  std::vector<std::pair<Enclosure, Enclosure>> pts_;
};

// Resolves "power:<p>", "pnorm:<p>", "slog", "F", "Phi", or "file:<path>".
// F and Phi share one lazily-built construction at the given budget.
std::shared_ptr<const OrliczModel> make_model(const std::string& spec,
                                              int n_max, int bits);

}  // namespace orlz
