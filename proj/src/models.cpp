#include "orlz/models.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace orlz {

Enclosure OrliczModel::eval(const Enclosure& s, int bits) const {
  return exp2_enc(log_eval(log2_enc(s, bits), bits), bits);
}

PowerModel::PowerModel(const Enclosure& p) : p_(p) {
  if (mpfr_cmp_si(p.lo(), 1) < 0) {
    throw std::invalid_argument("PowerModel: exponent must be >= 1");
  }
  name_ = "power:" + std::string(p.is_point() ? "" : "~") +
          std::to_string(p.lo_double());
}

Enclosure PowerModel::log_eval(const Enclosure& u, int bits) const {
  return mul(p_, u, bits);
}

std::optional<Enclosure> PowerModel::asymptotic_linear_slope(int bits) const {
  // Only the linear case has a bounded slope.
  if (p_.is_point() && mpfr_cmp_si(p_.lo(), 1) == 0) {
    return Enclosure(1L, bits);
  }
  return std::nullopt;
}

NormalizedPowerModel::NormalizedPowerModel(const Enclosure& p) : p_(p) {
  if (mpfr_cmp_si(p.lo(), 1) <= 0) {
    throw std::invalid_argument("NormalizedPowerModel: exponent must be > 1");
  }
  name_ = "pnorm:" + std::to_string(p.lo_double());
}

Enclosure NormalizedPowerModel::log_eval(const Enclosure& u, int bits) const {
  return sub(mul(p_, u, bits), log2_enc(p_, bits), bits);
}

Enclosure SLogModel::log_eval(const Enclosure& u, int bits) const {
  // u + log2(log2(2 + 2^u)); the inner log2 is >= 1 - eps... it is >= 1
  // whenever 2^u >= 0, so the outer log2 is safe.
  Enclosure inner = log2_enc(add(Enclosure(2L, bits), exp2_enc(u, bits)), bits);
  return add(u, log2_enc(inner, bits), bits);
}

FProfileModel::FProfileModel(std::shared_ptr<const CounterexampleModel> core)
    : core_(std::move(core)), name_("F") {}

Enclosure FProfileModel::log_eval(const Enclosure& u, int bits) const {
  return core_->log2F(u).rounded_to(bits);
}

PhiProfileModel::PhiProfileModel(std::shared_ptr<const CounterexampleModel> core)
    : core_(std::move(core)), name_("Phi") {}

Enclosure PhiProfileModel::log_eval(const Enclosure& u, int bits) const {
  return core_->log2Phi(u).rounded_to(bits);
}

TabulatedModel::TabulatedModel(std::string name, bool convex,
                               std::vector<std::pair<Enclosure, Enclosure>> pts)
    : name_(std::move(name)), convex_(convex), pts_(std::move(pts)) {
  if (pts_.size() < 2) {
    throw std::invalid_argument("TabulatedModel: need at least two points");
  }
  for (size_t i = 1; i < pts_.size(); ++i) {
    if (!mpfr_less_p(pts_[i - 1].first.hi(), pts_[i].first.lo())) {
      throw std::invalid_argument("TabulatedModel: u column must increase");
    }
    if (mpfr_less_p(pts_[i].second.hi(), pts_[i - 1].second.lo())) {
      throw std::invalid_argument("TabulatedModel: log2M column must not decrease");
    }
  }
}

TabulatedModel TabulatedModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("TabulatedModel: cannot open " + path);
  nlohmann::json j;
  in >> j;
  std::vector<std::pair<Enclosure, Enclosure>> pts;
  for (const auto& row : j.at("points")) {
    pts.emplace_back(Enclosure::from_decimal(row.at(0).dump()),
                     Enclosure::from_decimal(row.at(1).dump()));
  }
  return TabulatedModel(j.value("name", std::string("tabulated")),
                        j.value("convex", false), std::move(pts));
}

Enclosure TabulatedModel::log_eval_point(mpfr_srcptr u, int bits) const {
  if (mpfr_less_p(u, pts_.front().first.lo()) ||
      mpfr_greater_p(u, pts_.back().first.hi())) {
    throw std::domain_error("TabulatedModel: argument outside tabulated range");
  }
  detail::Real lo(bits), hi(bits);
  mpfr_set(lo.get(), u, MPFR_RNDD);
  mpfr_set(hi.get(), u, MPFR_RNDU);
  Enclosure pu = Enclosure::from_endpoints(std::move(lo), std::move(hi), bits);
  for (size_t i = 1; i < pts_.size(); ++i) {
    if (mpfr_greater_p(u, pts_[i].first.hi())) continue;
    const auto& [u0, v0] = pts_[i - 1];
    const auto& [u1, v1] = pts_[i];
    Enclosure w = div(sub(pu, u0), sub(u1, u0), bits);
    return add(v0, mul(w, sub(v1, v0), bits), bits);
  }
  return pts_.back().second;
}

Enclosure TabulatedModel::log_eval(const Enclosure& u, int bits) const {
  if (u.is_point()) return log_eval_point(u.lo(), bits);
  return hull(log_eval_point(u.lo(), bits), log_eval_point(u.hi(), bits));
}

std::shared_ptr<const OrliczModel> make_model(const std::string& spec,
                                              int n_max, int bits) {
  auto starts_with = [&](const char* prefix) {
    return spec.rfind(prefix, 0) == 0;
  };
  if (spec == "F" || spec == "Phi") {
    auto core = std::make_shared<const CounterexampleModel>(n_max, bits);
    if (spec == "F") return std::make_shared<FProfileModel>(core);
    return std::make_shared<PhiProfileModel>(core);
  }
  if (starts_with("power:")) {
    return std::make_shared<PowerModel>(
        Enclosure::from_decimal(spec.substr(6), bits));
  }
  if (starts_with("pnorm:")) {
    return std::make_shared<NormalizedPowerModel>(
        Enclosure::from_decimal(spec.substr(6), bits));
  }
  if (spec == "slog") return std::make_shared<SLogModel>();
  if (starts_with("file:")) {
    return std::make_shared<TabulatedModel>(TabulatedModel::load(spec.substr(5)));
  }
  throw std::invalid_argument("unknown model '" + spec +
                              "' (expected power:<p>, pnorm:<p>, slog, F, Phi, "
                              "or file:<path>)");
}

}  // namespace orlz
