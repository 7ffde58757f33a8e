// orlz: command-line front end for the certified Orlicz-function toolkit.
//
// Subcommands:
//   eval     evaluate phi, f, F, Phi, or a dilation Phi_n at given points
//   verify   run the inequality check suite and write a report
//   analyze  index estimation, conjugates, nabla3 ratios, dilation tables,
//            Luxemburg norms
//
// Outputs are byte-identical for identical configurations: wall times are
// zeroed unless --timings is given, numbers are printed from the enclosure
// endpoints, and all grids are deterministic.
//
// Exit codes: 0 success/all verified, 1 falsified, 2 undetermined,
// 3 usage error, 4 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orlz/analysis.hpp"
#include "orlz/construction.hpp"
#include "orlz/models.hpp"
#include "orlz/verifier.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using orlz::Enclosure;

struct GlobalOpts {
  int bits = orlz::kDefaultBits;
  int n_max = orlz::CounterexampleModel::kDefaultMaxBlock;
  std::string out;
  std::string format = "json";
  bool timings = false;
};

std::string enc_field(mpfr_srcptr v) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.40Re", v);
  std::string out = s;
  mpfr_free_str(s);
  return out;
}

// Accepts plain decimals and power towers "2^x" / "2^2^k".
Enclosure parse_point(const std::string& text, int bits) {
  if (text.rfind("2^", 0) == 0) {
    return orlz::exp2_enc(parse_point(text.substr(2), bits), bits);
  }
  return Enclosure::from_decimal(text, bits);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int write_output(const GlobalOpts& g, const std::string& payload) {
  if (g.out.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file " << g.out << "\n";
    return 4;
  }
  f << payload;
  return f.good() ? 0 : 4;
}

nlohmann::json metadata_json(const GlobalOpts& g) {
  return nlohmann::json{{"tool", "orlz"},
                        {"version", kVersion},
                        {"precision_bits", g.bits},
                        {"n_max", g.n_max}};
}

std::string metadata_csv(const GlobalOpts& g) {
  std::ostringstream out;
  out << "# tool=orlz version=" << kVersion << " precision_bits=" << g.bits
      << " n_max=" << g.n_max << "\n";
  return out.str();
}

// ---------------------------------------------------------------- eval ----

int run_eval(const GlobalOpts& g, const std::string& target,
             const std::vector<std::string>& points,
             const std::string& points_file, int dil_n) {
  orlz::CounterexampleModel model(g.n_max, g.bits);

  std::vector<std::string> all_points = points;
  if (!points_file.empty()) {
    std::ifstream f(points_file);
    if (!f) {
      std::cerr << "error: cannot open points file " << points_file << "\n";
      return 4;
    }
    std::string line;
    while (std::getline(f, line)) {
      if (!line.empty()) all_points.push_back(line);
    }
  }
  if (all_points.empty()) {
    std::cerr << "error: no points given\n";
    return 3;
  }

  const bool csv = g.format == "csv";
  std::ostringstream out;
  if (csv) {
    out << metadata_csv(g);
    out << "target,point,kind,lo,hi";
    if (target == "Phi_n") out << ",envelope_bound";
    out << "\n";
  }
  nlohmann::json rows = nlohmann::json::array();

  for (const auto& ptext : all_points) {
    Enclosure x = parse_point(ptext, g.bits);
    std::string kind = "value";
    Enclosure value(0L, g.bits);
    std::optional<Enclosure> bound;
    if (target == "phi") {
      orlz::PhiValue v = model.phi(x);
      if (csv) {
        out << target << ',' << ptext << ",phi," << orlz::to_string(v) << ','
            << orlz::to_string(v) << "\n";
      } else {
        rows.push_back({{"point", ptext}, {"phi", orlz::to_string(v)}});
      }
      continue;
    } else if (target == "f") {
      value = model.f_eval(x);
    } else if (target == "F") {
      kind = "log2";
      value = model.F_eval(orlz::LogMagnitude::from_enclosure(x)).exp2();
    } else if (target == "Phi") {
      kind = "log2";
      value = model.Phi_eval(orlz::LogMagnitude::from_enclosure(x)).exp2();
    } else if (target == "Phi_n") {
      value = model.dilation_eval(dil_n, x);
      // annotate the quadratic envelope when x = 2^-2^m
      for (int m = 1; m <= 6; ++m) {
        Enclosure ref = Enclosure::pow2i(-(1L << m), g.bits);
        if (x.is_point() && mpfr_equal_p(x.lo(), ref.lo())) {
          bound = Enclosure::pow2i(2 - (1L << (m + 1)), g.bits);
        }
      }
    } else {
      std::cerr << "error: unknown eval target '" << target << "'\n";
      return 3;
    }
    if (csv) {
      out << target << ',' << ptext << ',' << kind << ','
          << enc_field(value.lo()) << ',' << enc_field(value.hi());
      if (target == "Phi_n") {
        out << ',' << (bound ? enc_field(bound->lo()) : std::string());
      }
      out << "\n";
    } else {
      nlohmann::json row{{"point", ptext},
                         {"kind", kind},
                         {"lo", enc_field(value.lo())},
                         {"hi", enc_field(value.hi())}};
      if (bound) row["envelope_bound"] = enc_field(bound->lo());
      rows.push_back(std::move(row));
    }
  }

  if (csv) return write_output(g, out.str());
  nlohmann::json doc{{"metadata", metadata_json(g)},
                     {"target", target},
                     {"rows", rows}};
  return write_output(g, doc.dump(2) + "\n");
}

// -------------------------------------------------------------- verify ----

int run_verify(const GlobalOpts& g, const orlz::CheckConfig& cfg,
               const std::string& which, int m_arg, int n_arg,
               const std::string& points_csv) {
  orlz::Verifier verifier(cfg);
  orlz::VerificationReport report;
  if (which == "all") {
    report = verifier.run_all();
  } else if (which == "monotone_ratio") {
    report.checks.push_back(verifier.check_monotone_ratio());
  } else if (which == "cp_bound") {
    report.checks.push_back(verifier.estimate_Cp());
  } else if (which == "threshold_n0") {
    report.checks.push_back(verifier.find_n0());
  } else if (which == "measure_bound") {
    report.checks.push_back(verifier.check_measure_bound());
  } else if (which == "sandwich") {
    report.checks.push_back(verifier.estimate_sandwich_c());
  } else if (which == "exact_ratio") {
    report.checks.push_back(verifier.check_exact_ratio(m_arg, n_arg));
  } else if (which == "phi_ratio") {
    report.checks.push_back(verifier.check_phi_ratio_bound(m_arg, n_arg));
  } else {
    std::cerr << "error: unknown check '" << which << "'\n";
    return 3;
  }

  std::string payload = g.format == "csv"
                            ? orlz::report_to_csv(report, cfg.timings)
                            : orlz::report_to_json(report, cfg.timings);
  int io = write_output(g, payload);
  if (io != 0) return io;
  if (!points_csv.empty()) {
    std::ofstream f(points_csv, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open " << points_csv << "\n";
      return 4;
    }
    f << orlz::extremal_rows_to_csv(report);
    if (!f.good()) return 4;
  }
  switch (report.overall()) {
    case orlz::CheckStatus::Verified: return 0;
    case orlz::CheckStatus::Falsified: return 1;
    case orlz::CheckStatus::Undetermined: return 2;
  }
  return 2;
}

// ------------------------------------------------------------- analyze ----

int run_analyze_indices(const GlobalOpts& g, const orlz::OrliczModel& model,
                        const std::string& p_grid_s, const std::string& ranges_s,
                        int density) {
  std::vector<Enclosure> p_grid;
  for (const auto& p : split(p_grid_s, ',')) {
    p_grid.push_back(Enclosure::from_decimal(p, g.bits));
  }
  std::vector<long> ranges;
  for (const auto& r : split(ranges_s, ',')) ranges.push_back(std::stol(r));
  orlz::IndexEstimate est =
      orlz::estimate_indices(model, p_grid, ranges, density, g.bits);

  if (g.format == "csv") {
    std::ostringstream out;
    out << metadata_csv(g) << "# model=" << model.name() << " density="
        << density << "\n";
    out << "p,range_exponent,upper_sup_lo,upper_sup_hi,lower_sup_lo,"
           "lower_sup_hi,upper_verdict,lower_verdict\n";
    for (size_t i = 0; i < est.p_grid.size(); ++i) {
      for (size_t r = 0; r < est.range_exponents.size(); ++r) {
        out << enc_field(est.p_grid[i].lo()) << ',' << est.range_exponents[r]
            << ',' << enc_field(est.upper_sup_log2[i][r].lo()) << ','
            << enc_field(est.upper_sup_log2[i][r].hi()) << ','
            << enc_field(est.lower_sup_log2[i][r].lo()) << ','
            << enc_field(est.lower_sup_log2[i][r].hi()) << ','
            << orlz::to_string(est.upper_verdict[i]) << ','
            << orlz::to_string(est.lower_verdict[i]) << "\n";
      }
    }
    out << "# beta_hat="
        << (est.beta_hat ? enc_field(est.beta_hat->lo()) : "none")
        << " alpha_hat="
        << (est.alpha_hat ? enc_field(est.alpha_hat->lo()) : "none") << "\n";
    return write_output(g, out.str());
  }

  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < est.p_grid.size(); ++i) {
    nlohmann::json sups = nlohmann::json::array();
    for (size_t r = 0; r < est.range_exponents.size(); ++r) {
      sups.push_back({{"range_exponent", est.range_exponents[r]},
                      {"upper_sup_lo", enc_field(est.upper_sup_log2[i][r].lo())},
                      {"upper_sup_hi", enc_field(est.upper_sup_log2[i][r].hi())},
                      {"lower_sup_lo", enc_field(est.lower_sup_log2[i][r].lo())},
                      {"lower_sup_hi", enc_field(est.lower_sup_log2[i][r].hi())}});
    }
    rows.push_back({{"p", enc_field(est.p_grid[i].lo())},
                    {"upper_verdict", orlz::to_string(est.upper_verdict[i])},
                    {"lower_verdict", orlz::to_string(est.lower_verdict[i])},
                    {"running_sup", sups}});
  }
  nlohmann::json doc{
      {"metadata", metadata_json(g)},
      {"model", model.name()},
      {"grid_density", density},
      {"rows", rows},
      {"beta_hat",
       est.beta_hat ? nlohmann::json(enc_field(est.beta_hat->lo()))
                    : nlohmann::json(nullptr)},
      {"alpha_hat",
       est.alpha_hat ? nlohmann::json(enc_field(est.alpha_hat->lo()))
                     : nlohmann::json(nullptr)}};
  return write_output(g, doc.dump(2) + "\n");
}

int run_analyze(const GlobalOpts& g, const std::string& target,
                const std::string& model_name, const std::string& p_grid_s,
                const std::string& ranges_s, int density,
                const std::string& t_grid_s, const std::string& c_s,
                const std::string& n_range_s, int grid_count,
                const std::string& pieces_s) {
  std::shared_ptr<const orlz::OrliczModel> model;
  try {
    model = orlz::make_model(model_name, g.n_max, g.bits);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  if (target == "indices") {
    return run_analyze_indices(g, *model, p_grid_s, ranges_s, density);
  }

  if (target == "conjugate" || target == "nabla3") {
    std::vector<Enclosure> ts;
    for (const auto& t : split(t_grid_s, ',')) {
      ts.push_back(parse_point(t, g.bits));
    }
    if (ts.empty()) {
      std::cerr << "error: empty --t-grid\n";
      return 3;
    }
    if (target == "conjugate") {
      std::ostringstream csv;
      nlohmann::json rows = nlohmann::json::array();
      csv << metadata_csv(g) << "# model=" << model->name() << "\n"
          << "t_lo,t_hi,kind,conj_lo,conj_hi\n";
      for (const auto& t : ts) {
        orlz::ConjugateResult r = orlz::conjugate_eval(*model, t, g.bits);
        std::string kind =
            r.kind == orlz::ConjugateResult::Kind::Finite
                ? "finite"
                : (r.kind == orlz::ConjugateResult::Kind::Infinite
                       ? "infinite"
                       : "budget_exhausted");
        csv << enc_field(t.lo()) << ',' << enc_field(t.hi()) << ',' << kind
            << ',';
        if (r.value) {
          csv << enc_field(r.value->lo()) << ',' << enc_field(r.value->hi());
        } else {
          csv << ',';
        }
        csv << "\n";
        nlohmann::json row{{"t_lo", enc_field(t.lo())}, {"kind", kind}};
        if (r.value) {
          row["conj_lo"] = enc_field(r.value->lo());
          row["conj_hi"] = enc_field(r.value->hi());
        }
        rows.push_back(std::move(row));
      }
      if (g.format == "csv") return write_output(g, csv.str());
      nlohmann::json doc{{"metadata", metadata_json(g)},
                         {"model", model->name()},
                         {"rows", rows}};
      return write_output(g, doc.dump(2) + "\n");
    }
    // nabla3
    Enclosure C = Enclosure::from_decimal(c_s, g.bits);
    orlz::Nabla3Report rep = orlz::nabla3_probe(*model, C, ts, g.bits);
    std::ostringstream csv;
    csv << metadata_csv(g) << "# model=" << model->name() << " C=" << c_s
        << " verdict=" << orlz::to_string(rep.verdict)
        << " (heuristic: a finite probe cannot decide a limit)\n"
        << "t_lo,t_hi,ratio_lo,ratio_hi\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [t, ratio] : rep.table) {
      csv << enc_field(t.lo()) << ',' << enc_field(t.hi()) << ','
          << enc_field(ratio.lo()) << ',' << enc_field(ratio.hi()) << "\n";
      rows.push_back({{"t_lo", enc_field(t.lo())},
                      {"ratio_lo", enc_field(ratio.lo())},
                      {"ratio_hi", enc_field(ratio.hi())}});
    }
    if (g.format == "csv") return write_output(g, csv.str());
    nlohmann::json doc{{"metadata", metadata_json(g)},
                       {"model", model->name()},
                       {"C", c_s},
                       {"verdict", orlz::to_string(rep.verdict)},
                       {"heuristic", true},
                       {"skipped", rep.skipped},
                       {"rows", rows}};
    return write_output(g, doc.dump(2) + "\n");
  }

  if (target == "einf") {
    std::vector<int> n_list;
    auto dots = n_range_s.find("..");
    if (dots != std::string::npos) {
      int lo = std::stoi(n_range_s.substr(0, dots));
      int hi = std::stoi(n_range_s.substr(dots + 2));
      for (int n = lo; n <= hi; ++n) n_list.push_back(n);
    } else {
      for (const auto& n : split(n_range_s, ',')) n_list.push_back(std::stoi(n));
    }
    if (n_list.empty()) {
      std::cerr << "error: empty --n range\n";
      return 3;
    }
    // dyadic grid i/(2*grid_count) plus the probe points 2^-2^m
    std::vector<Enclosure> grid;
    for (int i = 1; i <= grid_count; ++i) {
      grid.push_back(orlz::div(Enclosure(static_cast<long>(i), g.bits),
                               Enclosure(static_cast<long>(2 * grid_count), g.bits)));
    }
    for (int m = 1; m <= 4; ++m) {
      grid.push_back(Enclosure::pow2i(-(1L << m), g.bits));
    }
    std::sort(grid.begin(), grid.end(),
              [](const Enclosure& a, const Enclosure& b) {
                return mpfr_less_p(a.lo(), b.lo());
              });
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](const Enclosure& a, const Enclosure& b) {
                             return mpfr_equal_p(a.lo(), b.lo());
                           }),
               grid.end());
    orlz::LimitCandidate cand =
        orlz::sample_dilations(*model, n_list, grid, g.bits);
    std::vector<int> m_list = {1, 2, 3, 4};
    orlz::EquivalenceProbe probe =
        orlz::equivalence_at_zero_probe(cand, m_list, g.bits);
    std::string probe_verdict =
        probe.verdict == orlz::EquivalenceProbe::Verdict::NotEquivalentToH
            ? "NotEquivalentToH"
            : "Inconclusive";

    std::ostringstream csv;
    csv << metadata_csv(g) << "# model=" << model->name()
        << " equivalence_at_zero=" << probe_verdict << "\n";
    csv << "x_lo,x_hi";
    for (int n : n_list) csv << ",dil_n" << n << "_lo,dil_n" << n << "_hi";
    csv << "\n";
    for (size_t i = 0; i < cand.grid.size(); ++i) {
      csv << enc_field(cand.grid[i].lo()) << ',' << enc_field(cand.grid[i].hi());
      for (size_t k = 0; k < cand.n_list.size(); ++k) {
        csv << ',' << enc_field(cand.samples[k][i].lo()) << ','
            << enc_field(cand.samples[k][i].hi());
      }
      csv << "\n";
    }
    csv << "# cauchy_gaps:";
    for (const auto& gap : cand.cauchy_gaps) csv << ' ' << enc_field(gap.hi());
    csv << "\n";
    if (g.format == "csv") return write_output(g, csv.str());

    nlohmann::json rows = nlohmann::json::array();
    for (size_t i = 0; i < cand.grid.size(); ++i) {
      nlohmann::json row{{"x_lo", enc_field(cand.grid[i].lo())}};
      nlohmann::json vals = nlohmann::json::array();
      for (size_t k = 0; k < cand.n_list.size(); ++k) {
        vals.push_back({{"n", cand.n_list[k]},
                        {"lo", enc_field(cand.samples[k][i].lo())},
                        {"hi", enc_field(cand.samples[k][i].hi())}});
      }
      row["dilations"] = vals;
      rows.push_back(std::move(row));
    }
    nlohmann::json gaps = nlohmann::json::array();
    for (const auto& gap : cand.cauchy_gaps) gaps.push_back(enc_field(gap.hi()));
    nlohmann::json ratios = nlohmann::json::array();
    for (const auto& [m, r] : probe.ratios) {
      ratios.push_back({{"m", m},
                        {"ratio_lo", enc_field(r.lo())},
                        {"ratio_hi", enc_field(r.hi())}});
    }
    nlohmann::json doc{{"metadata", metadata_json(g)},
                       {"model", model->name()},
                       {"rows", rows},
                       {"cauchy_gaps", gaps},
                       {"equivalence_at_zero", probe_verdict},
                       {"equivalence_ratios", ratios}};
    return write_output(g, doc.dump(2) + "\n");
  }

  if (target == "norm") {
    orlz::StepFunction sf;
    for (const auto& piece : split(pieces_s, ',')) {
      auto vm = split(piece, ':');
      if (vm.size() != 2) {
        std::cerr << "error: --pieces expects value:measure pairs\n";
        return 3;
      }
      sf.pieces.push_back({parse_point(vm[0], g.bits),
                           Enclosure::from_decimal(vm[1], g.bits)});
    }
    if (sf.pieces.empty()) {
      std::cerr << "error: empty step function\n";
      return 3;
    }
    Enclosure norm = orlz::luxemburg_norm(*model, sf, g.bits);
    if (g.format == "csv") {
      std::ostringstream csv;
      csv << metadata_csv(g) << "# model=" << model->name() << "\n"
          << "norm_lo,norm_hi\n"
          << enc_field(norm.lo()) << ',' << enc_field(norm.hi()) << "\n";
      return write_output(g, csv.str());
    }
    nlohmann::json doc{{"metadata", metadata_json(g)},
                       {"model", model->name()},
                       {"norm_lo", enc_field(norm.lo())},
                       {"norm_hi", enc_field(norm.hi())}};
    return write_output(g, doc.dump(2) + "\n");
  }

  std::cerr << "error: unknown analyze target '" << target << "'\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified Orlicz-function numerics"};
  app.require_subcommand(1);

  GlobalOpts g;
  std::string config_path;
  app.add_option("--bits", g.bits, "working precision in bits");
  app.add_option("--n-max", g.n_max,
                 "block budget (log2-arguments up to 2^n_max)");
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--format", g.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", config_path, "JSON config file; flags override");
  app.add_flag("--timings", g.timings,
               "emit measured wall times (breaks byte determinism)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate construction functions");
  eval_cmd->fallthrough();
  std::string eval_target;
  std::vector<std::string> eval_points;
  std::string points_file;
  int dil_n = 3;
  eval_cmd->add_option("target", eval_target, "phi|f|F|Phi|Phi_n")->required();
  eval_cmd->add_option("points", eval_points, "points (decimal or 2^x)");
  eval_cmd->add_option("--points-file", points_file,
                       "file with one point per line");
  eval_cmd->add_option("--n", dil_n, "dilation index for Phi_n");
  eval_cmd->add_option("--x", eval_points, "point (alias)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run certified checks");
  verify_cmd->fallthrough();
  std::string which = "all";
  std::string p_s = "2", eps_s = "0.25", points_csv;
  int m_arg = 1, n_arg = 3, m_max = 40, grid_points = 200;
  long range_exp = 1024, samples = 1000;
  std::uint64_t seed = 20200127;
  verify_cmd->add_option("--check", which,
                         "all|monotone_ratio|cp_bound|threshold_n0|"
                         "measure_bound|sandwich|exact_ratio|phi_ratio");
  verify_cmd->add_option("--p", p_s, "exponent for cp_bound");
  verify_cmd->add_option("--epsilon", eps_s, "epsilon for the measure checks");
  verify_cmd->add_option("--m", m_arg, "m for exact_ratio/phi_ratio");
  verify_cmd->add_option("--n", n_arg, "n for exact_ratio/phi_ratio");
  verify_cmd->add_option("--m-max", m_max, "scan limit for threshold_n0");
  verify_cmd->add_option("--range-exp", range_exp, "largest log2-range");
  verify_cmd->add_option("--grid-points", grid_points,
                         "uniform grid points per axis");
  verify_cmd->add_option("--samples", samples, "measure-bound sample count");
  verify_cmd->add_option("--seed", seed, "sampler seed");
  verify_cmd->add_option("--points-csv", points_csv,
                         "write per-point extremal data CSV");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "model analysis tables");
  an_cmd->fallthrough();
  std::string an_target, model_name = "Phi";
  std::string p_grid_s = "1.0,1.1,1.2,1.5,2.0";
  std::string ranges_s = "64,128,256,512,1024";
  std::string t_grid_s = "2^1,2^2,2^3,2^4,2^5,2^6,2^7,2^8,2^9,2^10,2^11,2^12";
  std::string c_s = "2", n_range_s = "6..11", pieces_s;
  int density = 48, grid_count = 64;
  an_cmd->add_option("target", an_target, "indices|conjugate|nabla3|einf|norm")
      ->required();
  an_cmd->add_option("--model", model_name,
                     "power:<p>|pnorm:<p>|slog|F|Phi|file:<path>");
  an_cmd->add_option("--p-grid", p_grid_s, "comma-separated exponents");
  an_cmd->add_option("--ranges", ranges_s, "comma-separated range exponents");
  an_cmd->add_option("--density", density, "index grid density per axis");
  an_cmd->add_option("--t-grid", t_grid_s, "comma-separated t values");
  an_cmd->add_option("--C", c_s, "dilation constant for nabla3");
  an_cmd->add_option("--n", n_range_s, "dilation indices, a..b or list");
  an_cmd->add_option("--grid", grid_count, "dyadic dilation grid size");
  an_cmd->add_option("--pieces", pieces_s, "step function value:measure,...");

  // Config file first, so explicit flags override its values.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  if (!config_path.empty()) {
    std::ifstream f(config_path);
    if (!f) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return 4;
    }
    try {
      nlohmann::json j;
      f >> j;
      g.bits = j.value("bits", g.bits);
      g.n_max = j.value("n_max", g.n_max);
      g.format = j.value("format", g.format);
      g.out = j.value("out", g.out);
      g.timings = j.value("timings", g.timings);
      if (j.contains("verify")) {
        const auto& v = j["verify"];
        p_s = v.value("p", p_s);
        eps_s = v.value("epsilon", eps_s);
        m_max = v.value("m_max", m_max);
        range_exp = v.value("range_exponent_max", range_exp);
        grid_points = v.value("grid_points", grid_points);
        samples = v.value(
            "samples", static_cast<nlohmann::json::number_integer_t>(samples));
        seed = v.value("seed",
                       static_cast<nlohmann::json::number_unsigned_t>(seed));
      }
      if (j.contains("analyze")) {
        const auto& a = j["analyze"];
        model_name = a.value("model", model_name);
        p_grid_s = a.value("p_grid", p_grid_s);
        ranges_s = a.value("ranges", ranges_s);
        density = a.value("density", density);
        t_grid_s = a.value("t_grid", t_grid_s);
        c_s = a.value("C", c_s);
        n_range_s = a.value("n", n_range_s);
        grid_count = a.value("grid", grid_count);
        pieces_s = a.value("pieces", pieces_s);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: bad config: " << e.what() << "\n";
      return 3;
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval_cmd->parsed()) {
      return run_eval(g, eval_target, eval_points, points_file, dil_n);
    }
    if (verify_cmd->parsed()) {
      orlz::CheckConfig cfg;
      cfg.precision_bits = g.bits;
      cfg.n_max = g.n_max;
      cfg.range_exponent_max = range_exp;
      cfg.grid_points = grid_points;
      cfg.p = Enclosure::from_decimal(p_s, g.bits);
      cfg.epsilon = Enclosure::from_decimal(eps_s, g.bits);
      cfg.m_max = m_max;
      cfg.samples = samples;
      cfg.seed = seed;
      cfg.timings = g.timings;
      return run_verify(g, cfg, which, m_arg, n_arg, points_csv);
    }
    if (an_cmd->parsed()) {
      return run_analyze(g, an_target, model_name, p_grid_s, ranges_s, density,
                         t_grid_s, c_s, n_range_s, grid_count, pieces_s);
    }
  } catch (const orlz::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 3;
}
