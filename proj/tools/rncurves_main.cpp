#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rncurves/config.hpp"
#include "rncurves/crit.hpp"
#include "rncurves/jsonio.hpp"
#include "rncurves/rnd.hpp"
#include "rncurves/verify.hpp"

namespace {

using namespace rncurves;

cx parse_complex(std::string s) {
  std::erase_if(s, [](char c) { return c == ' '; });
  if (s.empty()) throw InputError("empty complex literal");
  if (s.back() == 'i' || s.back() == 'j') {
    s.pop_back();
    if (s.empty() || s == "+") return cx(0.0, 1.0);
    if (s == "-") return cx(0.0, -1.0);
    // Split at the last sign that is not part of an exponent.
    int split = -1;
    for (int k = static_cast<int>(s.size()) - 1; k > 0; --k) {
      if ((s[static_cast<std::size_t>(k)] == '+' || s[static_cast<std::size_t>(k)] == '-') &&
          s[static_cast<std::size_t>(k - 1)] != 'e' && s[static_cast<std::size_t>(k - 1)] != 'E') {
        split = k;
        break;
      }
    }
    try {
      if (split < 0) return cx(0.0, std::stod(s));
      const double re = std::stod(s.substr(0, static_cast<std::size_t>(split)));
      std::string imp = s.substr(static_cast<std::size_t>(split));
      if (imp == "+") imp = "1";
      if (imp == "-") imp = "-1";
      return cx(re, std::stod(imp));
    } catch (const std::exception&) {
      throw InputError("cannot parse complex literal: " + s);
    }
  }
  try {
    std::size_t pos = 0;
    const double re = std::stod(s, &pos);
    if (pos != s.size()) throw InputError("trailing characters in number: " + s);
    return cx(re, 0.0);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("cannot parse number: " + s);
  }
}

std::vector<cx> parse_complex_list(const std::string& csv) {
  std::vector<cx> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(parse_complex(tok));
  }
  return out;
}

SpectralCurve curve_from_flags(const std::string& coeffs, const std::string& roots) {
  if (!coeffs.empty() && !roots.empty())
    throw InputError("provide either --coeffs or --roots, not both");
  if (!coeffs.empty()) return SpectralCurve::from_coeffs(parse_complex_list(coeffs));
  if (!roots.empty()) return SpectralCurve::from_roots(parse_complex_list(roots));
  throw InputError("a curve is required: pass --coeffs or --roots");
}

BoutrouxFamily family_from_string(const std::string& s) {
  if (s == "i" || s == family_tag(BoutrouxFamily::monic_minus)) return BoutrouxFamily::monic_minus;
  if (s == "ii" || s == family_tag(BoutrouxFamily::monic_plus)) return BoutrouxFamily::monic_plus;
  if (s == "iii" || s == family_tag(BoutrouxFamily::weier_minus)) return BoutrouxFamily::weier_minus;
  if (s == "iv" || s == family_tag(BoutrouxFamily::weier_plus)) return BoutrouxFamily::weier_plus;
  throw InputError("unknown family tag: " + s + " (use i, ii, iii, iv or the Y2=... tags)");
}

ordered_json cx_json(cx v) { return complex_json(v.real(), v.imag()); }

void emit(const std::string& text, const std::string& json_out) {
  std::cout << text;
  if (!json_out.empty()) {
    std::ofstream f(json_out);
    if (!f) throw InputError("cannot open output file: " + json_out);
    f << text;
  }
}

constexpr double kPaperH = 3.2463822253744278875676;

int cmd_curve_info(const std::string& coeffs, const std::string& roots,
                   const std::string& json_out) {
  const SpectralCurve c = curve_from_flags(coeffs, roots);
  ordered_json j;
  j["curve"] = std::string("genus-") + std::to_string(c.genus()) + " hyperelliptic";
  j["roots"] = ordered_json::array();
  for (const cx& r : c.roots()) j["roots"].push_back(cx_json(r));
  j["coeffs"] = ordered_json::array();
  for (const cx& s : c.coeffs()) j["coeffs"].push_back(cx_json(s));
  j["discriminant"] = cx_json(c.discriminant());
  j["conj_symmetric"] = c.conj_symmetric();
  emit(dump_json17(j), json_out);
  return 0;
}

int cmd_kdv(const std::string& coeffs, const std::string& roots, const RunConfig& cfg,
            const std::string& json_out) {
  const SpectralCurve c = curve_from_flags(coeffs, roots);
  const SeriesCoefficients sc = qde_coefficients(c, cfg.series_order, cfg.quad_tol);
  const OddDifferential dq = quasimomentum(c, cfg.quad_tol);
  const PeriodVector pv = period_vector(c, dq, cfg.quad_tol);

  ordered_json j;
  j["H"] = ordered_json{{"m1", cx_json(sc.H_m1)}, {"p1", cx_json(sc.H_p1)}, {"p3", cx_json(sc.H_p3)}};
  j["T1"] = cx_json(sc.T.at(1));
  ordered_json q2;
  for (const auto& [k, v] : sc.T) q2["T" + std::to_string(k)] = cx_json(v);
  for (const auto& [k, v] : sc.H) {
    if (k > 2 * cfg.series_order) break;
    q2["H" + std::to_string(k)] = cx_json(v);
  }
  j["qde2"] = q2;
  j["im_H"] = ordered_json::array(
      {std::abs(sc.H_m1.imag()), std::abs(sc.H_p1.imag()), std::abs(sc.H_p3.imag())});
  ordered_json dqj;
  dqj["numerator"] = ordered_json::array();
  for (const cx& n : dq.numerator) dqj["numerator"].push_back(cx_json(n));
  dqj["periods"] = ordered_json::array();
  for (const cx& p : pv.values) dqj["periods"].push_back(cx_json(p));
  dqj["est_error"] = pv.est_error;
  j["dq"] = dqj;
  emit(dump_json17(j), json_out);
  return 0;
}

ordered_json boutroux_result_json(const BoutrouxResult& r) {
  ordered_json j;
  j["family"] = r.family;
  j["g2"] = r.g2;
  j["g3"] = r.g3;
  j["residuals"] = ordered_json::array({r.residuals[0], r.residuals[1]});
  j["ratio"] = r.ratio;
  if (r.implied_h) j["implied_h"] = *r.implied_h;
  else j["implied_h"] = nullptr;
  j["iterations"] = r.iterations;
  j["bracket"] = ordered_json::array({r.bracket_lo, r.bracket_hi});
  j["roots"] = ordered_json::array();
  for (const cx& root : r.curve.roots()) j["roots"].push_back(cx_json(root));
  return j;
}

int cmd_boutroux(double g2, const std::string& family, const std::string& bracket, bool scan,
                 const RunConfig& cfg, const std::string& json_out) {
  if (scan) {
    const auto entries = convention_scan(g2, kPaperH, cfg.quad_tol);
    ordered_json j;
    j["g2"] = g2;
    j["h_target"] = kPaperH;
    j["families"] = ordered_json::array();
    for (const auto& e : entries) {
      ordered_json ej;
      ej["family"] = e.family;
      ej["status"] = e.status;
      if (e.status == "solved") {
        ej["g3"] = e.g3;
        ej["ratio"] = e.ratio;
        if (e.implied_h) ej["implied_h"] = *e.implied_h;
        else ej["implied_h"] = nullptr;
        if (e.h_error) ej["h_error"] = *e.h_error;
        else ej["h_error"] = nullptr;
        ej["residuals"] = ordered_json::array({e.residuals[0], e.residuals[1]});
        ej["iterations"] = e.iterations;
      }
      j["families"].push_back(ej);
    }
    emit(dump_json17(j), json_out);
    return 0;  // the scan is a report; per-family failures are recorded, not fatal
  }

  std::optional<std::pair<double, double>> br;
  if (!bracket.empty()) {
    const auto vals = parse_complex_list(bracket);
    if (vals.size() != 2 || vals[0].imag() != 0.0 || vals[1].imag() != 0.0)
      throw InputError("--bracket expects lo,hi (real)");
    br = std::make_pair(vals[0].real(), vals[1].real());
  }
  const BoutrouxFamily fam = family_from_string(family.empty() ? "ii" : family);
  const BoutrouxResult r = solve_boutroux(fam, g2, br, cfg.quad_tol);
  emit(dump_json17(boutroux_result_json(r)), json_out);
  return 0;
}

int cmd_verify(const std::string& suite, double g2, double g3, const RunConfig& cfg,
               const std::string& json_out) {
  std::ostringstream out;
  ordered_json j;
  bool pass = false;
  if (suite == "triple-consistency") {
    const auto rep = verify_triple_consistency(g2, g3);
    pass = rep.pass;
    auto triple = [](const std::array<double, 3>& t) {
      return ordered_json::array({t[0], t[1], t[2]});
    };
    j["suite"] = suite;
    j["quadrature"] = triple(rep.quadrature);
    j["floquet_fit"] = triple(rep.floquet_fit);
    j["series"] = triple(rep.series);
    j["band_edges"] = triple(rep.band_edge);
    j["s1_defect"] = rep.s1_defect;
    j["max_rel_dev_quadrature_series"] = triple(rep.max_rel_dev_ac);
    j["max_rel_dev_fit"] = triple(rep.max_rel_dev_fit);
    out << (pass ? "PASS" : "FAIL") << " triple-consistency: quadrature vs fit vs series\n";
    const char* names[3] = {"H_-1", "H_1", "H_3"};
    for (int i = 0; i < 3; ++i) {
      const std::size_t k = static_cast<std::size_t>(i);
      out << "  " << names[k] << ": a=" << rep.quadrature[k] << " b=" << rep.floquet_fit[k]
          << " c=" << rep.series[k] << " (dev ac=" << rep.max_rel_dev_ac[k]
          << ", fit=" << rep.max_rel_dev_fit[k] << ")\n";
    }
  } else if (suite == "gradient") {
    const auto rep = verify_gradient();
    pass = rep.pass;
    j["suite"] = suite;
    j["boutroux"] = boutroux_result_json(*rep.boutroux);
    j["critical_raw_norm"] = rep.critical_raw_norm;
    j["critical_projected_norm"] = rep.critical_projected_norm;
    j["reference_raw_norm"] = rep.reference_raw_norm;
    j["reference_projected_norm"] = rep.reference_projected_norm;
    j["y_expansion_defect"] = rep.y_expansion_defect;
    out << (rep.forward_pass ? "PASS" : "FAIL")
        << " gradient forward: projected=" << rep.critical_projected_norm
        << " raw=" << rep.critical_raw_norm << " at the Boutroux curve\n";
    out << (rep.contrapositive_pass ? "PASS" : "FAIL")
        << " gradient contrapositive: projected=" << rep.reference_projected_norm
        << " raw=" << rep.reference_raw_norm << " at (0,-1,0)\n";
  } else if (suite == "obstruction") {
    const auto rep = verify_obstruction(20, 20, cfg.seed);
    pass = rep.pass;
    j["suite"] = suite;
    j["curves_tested"] = rep.curves_tested;
    j["min_curve_residual"] = rep.min_curve_residual;
    j["potentials_tested"] = rep.potentials_tested;
    j["min_mean_ux2"] = rep.min_mean_ux2;
    out << (pass ? "PASS" : "FAIL") << " obstruction: min residual/scale^(5/2)="
        << rep.min_curve_residual << ", min (1/T)int u'^2/scale=" << rep.min_mean_ux2 << "\n";
  } else {
    throw InputError("unknown verify suite: " + suite +
                     " (expected triple-consistency | gradient | obstruction)");
  }
  j["pass"] = pass;
  std::cout << out.str();
  if (!json_out.empty()) {
    std::ofstream f(json_out);
    if (!f) throw InputError("cannot open output file: " + json_out);
    f << dump_json17(j);
  }
  return pass ? 0 : 1;
}

int cmd_sweep(double g2, const std::string& family, const std::string& range, int count,
              const RunConfig& cfg, const std::string& json_out) {
  if (count < 2) throw InputError("--count must be at least 2");
  const auto vals = parse_complex_list(range);
  if (vals.size() != 2) throw InputError("--param-range expects lo,hi");
  const double lo = vals[0].real(), hi = vals[1].real();
  const BoutrouxFamily fam = family_from_string(family.empty() ? "ii" : family);

  struct Row {
    double g3, rA, rB, ratio;
  };
  std::vector<Row> rows;
  for (int i = 0; i < count; ++i) {
    const double g3 = lo + (hi - lo) * i / (count - 1);
    const SpectralCurve c = family_curve(fam, g2, g3);
    const auto res = boutroux_residual(c, cfg.quad_tol);
    rows.push_back({g3, res[0], res[1], g3 / std::pow(g2, 1.5)});
  }

  if (cfg.format == "csv") {
    std::ostringstream out;
    out << "g3,residual_A,residual_B,ratio\n";
    char buf[256];
    for (const Row& r : rows) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", r.g3, r.rA, r.rB, r.ratio);
      out << buf;
    }
    emit(out.str(), json_out);
    return 0;
  }
  ordered_json j;
  j["family"] = family_tag(fam);
  j["g2"] = g2;
  j["points"] = ordered_json::array();
  for (const Row& r : rows) {
    ordered_json p;
    p["g3"] = r.g3;
    p["residuals"] = ordered_json::array({r.rA, r.rB});
    p["ratio"] = r.ratio;
    j["points"].push_back(p);
  }
  emit(dump_json17(j), json_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-normalized differentials on genus-1 spectral curves: KdV Hamiltonians,"
               " Boutroux curves, and variational checks"};
  app.require_subcommand(1);

  std::string config_path, json_out;
  double opt_tol = -1.0;
  int opt_order = -1;
  app.add_option("--config", config_path, "JSON config file mirroring RunConfig");
  app.add_option("--json-out", json_out, "also write the report to this file");
  app.add_option("--tol", opt_tol, "quadrature tolerance");
  app.add_option("--order", opt_order, "series truncation order (<= 40)");

  std::string coeffs, roots;
  auto add_curve_flags = [&](CLI::App* sub) {
    sub->add_option("--coeffs", coeffs, "curve coefficients s1,s2,s3 (complex: a+bi)");
    sub->add_option("--roots", roots, "branch points r1,r2,r3 (complex: a+bi)");
  };

  CLI::App* info = app.add_subcommand("curve-info", "roots, coefficients, discriminant, symmetry");
  add_curve_flags(info);

  CLI::App* kdv = app.add_subcommand("kdv", "KdV Hamiltonians and QdE coefficients");
  add_curve_flags(kdv);

  double g2 = 1.0, g3 = 0.5;
  std::string family, bracket;
  bool scan = false;
  CLI::App* bx = app.add_subcommand("boutroux", "solve Im oint Y dE = 0 in a coefficient family");
  bx->add_option("--g2", g2, "real g2 > 0")->required();
  bx->add_option("--family", family, "i | ii | iii | iv or a Y2=... tag (default ii)");
  bx->add_option("--bracket", bracket, "g3 bracket lo,hi");
  bx->add_flag("--scan", scan, "run all registered families against the reference h");

  std::string suite;
  CLI::App* vf = app.add_subcommand("verify", "acceptance experiments");
  vf->add_option("suite", suite, "triple-consistency | gradient | obstruction")->required();
  vf->add_option("--g2", g2, "Weierstrass g2 (triple-consistency)");
  vf->add_option("--g3", g3, "Weierstrass g3 (triple-consistency)");

  std::string range;
  int count = 11;
  bool csv = false;
  CLI::App* sw = app.add_subcommand("sweep", "Boutroux residuals over a g3 grid");
  sw->add_option("--g2", g2, "real g2 > 0")->required();
  sw->add_option("--family", family, "family tag (default ii)");
  sw->add_option("--param-range", range, "g3 range lo,hi")->required();
  sw->add_option("--count", count, "grid points (default 11)");
  sw->add_flag("--csv", csv, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    RunConfig cfg;
    if (config_path.empty()) {
      if (const char* env = std::getenv("RNCURVES_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) cfg = load_config(config_path);
    if (opt_tol > 0.0) cfg.quad_tol = opt_tol;
    if (opt_order >= 0) cfg.series_order = opt_order;
    if (csv) cfg.format = "csv";
    cfg.validate();

    if (*info) return cmd_curve_info(coeffs, roots, json_out);
    if (*kdv) return cmd_kdv(coeffs, roots, cfg, json_out);
    if (*bx) return cmd_boutroux(g2, family, bracket, scan, cfg, json_out);
    if (*vf) return cmd_verify(suite, g2, g3, cfg, json_out);
    if (*sw) return cmd_sweep(g2, family, range, count, cfg, json_out);
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
