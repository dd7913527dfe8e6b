// Acceptance suite: one check per criterion, one PASS/FAIL line each, exit
// code equal to the number of failures. Tolerances are pinned here and do not
// drift with configuration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "rncurves/crit.hpp"
#include "rncurves/rnd.hpp"
#include "rncurves/series.hpp"
#include "rncurves/verify.hpp"

using namespace rncurves;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int criterion, bool pass, const char* what, double seconds, double limit) {
  const bool ok = pass && seconds < limit;
  if (!ok) ++failures;
  std::printf("%s criterion-%d: %s (%.1fs, limit %.0fs)\n", ok ? "PASS" : "FAIL", criterion, what,
              seconds, limit);
}

constexpr double kPaperH = 3.2463822253744278875676;
constexpr double kLemniscate = 2.62205755429211981;

void criterion1_boutroux_scan() {
  Timer t;
  bool pass = true;
  const auto entries = convention_scan(1.0, kPaperH);
  int solved = 0, matched = 0;
  for (const auto& e : entries) {
    if (e.status != "solved") {
      std::printf("  family %-14s %s\n", e.family.c_str(), e.status.c_str());
      continue;
    }
    ++solved;
    std::printf("  family %-14s g3=%.12g ratio=%.12g implied_h=%s h_error=%s\n", e.family.c_str(),
                e.g3, e.ratio, e.implied_h ? std::to_string(*e.implied_h).c_str() : "n/a",
                e.h_error ? std::to_string(*e.h_error).c_str() : "n/a");
    if (e.h_error && *e.h_error < 1e-6) ++matched;
    if (std::abs(e.residuals[0]) > 1e-9 || std::abs(e.residuals[1]) > 1e-9) pass = false;
  }
  if (solved == 0) pass = false;

  // Solution structure and uniqueness-in-bracket for the solved families.
  for (BoutrouxFamily f : all_families()) {
    try {
      const BoutrouxResult r = solve_boutroux(f, 1.0);
      if (r.curve.real_root_count() != 1 || !r.curve.conj_symmetric()) pass = false;
      // Scale invariance of the dimensionless ratio.
      const BoutrouxResult r16 = solve_boutroux(f, 16.0);
      if (std::abs(r.ratio - r16.ratio) > 1e-8 * std::max(1.0, std::abs(r.ratio))) pass = false;
    } catch (const NoSolutionInBracket&) {
    } catch (const MultipleSignChanges&) {
      pass = false;  // default brackets must isolate a single sign change
    }
  }
  std::printf("  h-match diagnostic: %d of %d solved families match h to 1e-6 (expected 1)\n",
              matched, solved);
  report(1, pass, "Boutroux solution exists; residuals < 1e-9; scan report emitted", t.seconds(),
         30.0);
}

void criterion2_gradient() {
  Timer t;
  const GradientReport rep = verify_gradient();
  std::printf("  Boutroux curve: projected=%.3e raw=%.3e | reference (0,-1,0): projected=%.3e raw=%.3e\n",
              rep.critical_projected_norm, rep.critical_raw_norm, rep.reference_projected_norm,
              rep.reference_raw_norm);
  report(2, rep.pass, "Theorem 2.2 B: projected gradient vanishes exactly at the Boutroux curve",
         t.seconds(), 60.0);
}

void criterion3_triple_consistency() {
  Timer t;
  const TripleConsistencyReport rep = verify_triple_consistency(4.0, 0.5, 1e-5, 1e-4);
  const char* names[3] = {"H_-1", "H_1 ", "H_3 "};
  for (int i = 0; i < 3; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    std::printf("  %s quad=%.10g fit=%.10g series=%.10g (dev ac=%.2e fit=%.2e)\n", names[k],
                rep.quadrature[k], rep.floquet_fit[k], rep.series[k], rep.max_rel_dev_ac[k],
                rep.max_rel_dev_fit[k]);
  }
  report(3, rep.pass, "triple consistency of the KdV integrals at (g2,g3)=(4,0.5)", t.seconds(),
         60.0);
}

void criterion4_normalization_suite() {
  Timer t;
  bool pass = true;
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> ur(0.0, 3.0);
  std::uniform_real_distribution<double> uang(0.0, 2.0 * 3.14159265358979323846);

  int built = 0;
  double worst_im = 0.0;
  while (built < 50) {
    auto rand_c = [&] { return std::polar(ur(rng), uang(rng)); };
    try {
      const SpectralCurve c = SpectralCurve::from_cubic(rand_c(), rand_c(), rand_c());
      PrincipalPartSpec spec;
      spec.fixed = {cx(0.5)};
      const OddDifferential d = build_real_normalized(c, spec);
      const PeriodVector pv = period_vector(c, d);
      double pscale = 1.0;
      for (const cx& v : pv.values) pscale = std::max(pscale, std::abs(v));
      for (const cx& v : pv.values) {
        worst_im = std::max(worst_im, std::abs(v.imag()) / pscale);
        if (std::abs(v.imag()) > 1e-10 * pscale) pass = false;
      }
      // Zero principal part: zero differential.
      PrincipalPartSpec zero;
      const OddDifferential z = build_real_normalized(c, zero);
      for (const cx& n : z.numerator)
        if (std::abs(n) > 1e-12) pass = false;
      ++built;
    } catch (const DegenerateCurve&) {
    } catch (const SingularNormalizationSystem&) {
    }
  }
  std::printf("  50 random curves: worst |Im period| / period scale = %.2e\n", worst_im);

  // Gap condition on real-branch-point curves.
  std::uniform_real_distribution<double> ur3(-3.0, 3.0);
  int gap_tested = 0;
  while (gap_tested < 10) {
    double r0 = ur3(rng), r1 = ur3(rng), r2 = ur3(rng);
    if (r0 > r1) std::swap(r0, r1);
    if (r1 > r2) std::swap(r1, r2);
    if (r0 > r1) std::swap(r0, r1);
    if (r1 - r0 < 0.25 || r2 - r1 < 0.25) continue;
    const SpectralCurve c = SpectralCurve::from_roots({cx(r0), cx(r1), cx(r2)});
    const OddDifferential dq = quasimomentum(c);
    const auto basis = c.canonical_homology_basis();
    if (std::abs(integrate_cycle(c, dq, basis[0])) > 1e-10 * c.scale()) pass = false;
    ++gap_tested;
  }
  report(4, pass, "Prop 2.1 normalization on 50 random curves + gap condition", t.seconds(), 120.0);
}

void criterion5_obstruction() {
  Timer t;
  const ObstructionReport rep = verify_obstruction(20, 20, 20240501);
  std::printf("  min residual/scale^(5/2)=%.3e over %d curves; min (1/T)int u'^2/scale=%.3e over %d potentials\n",
              rep.min_curve_residual, rep.curves_tested, rep.min_mean_ux2, rep.potentials_tested);
  report(5, rep.pass, "no-real-solution obstruction on random samples", t.seconds(), 60.0);
}

void criterion6_oracles() {
  Timer t;
  bool pass = true;

  // Lemniscatic period against the AGM value.
  const SpectralCurve lem = SpectralCurve::from_cubic(0.0, -1.0, 0.0);
  OddDifferential half;
  half.numerator = {cx(0.5)};
  const auto basis = lem.canonical_homology_basis();
  const double period = std::abs(integrate_cycle(lem, half, basis[1]));
  const HalfPeriods hp = agm_complete_elliptic(lem);
  if (std::abs(period - kLemniscate) > 1e-11) pass = false;
  if (std::abs(period - 2.0 * hp.real_half) > 1e-11) pass = false;
  std::printf("  lemniscatic period %.15g vs AGM %.15g\n", period, 2.0 * hp.real_half);

  // Free Floquet discriminant.
  const PotentialOracle free0 = PotentialOracle::constant(0.0, 2.0);
  for (double E : {0.3, 1.0, 7.5, 42.0}) {
    const double d = discriminant(free0, E);
    if (std::abs(d - 2.0 * std::cos(std::sqrt(E) * free0.period())) > 1e-8) pass = false;
  }

  // The (qde2) <-> (Q) factor -2 identity on every computed index.
  for (const auto& coeffs : {std::vector<cx>{cx(0.0), cx(-1.0), cx(0.0)},
                             std::vector<cx>{cx(0.0), cx(1.0), cx(-0.35)},
                             std::vector<cx>{cx(0.2, 0.1), cx(-0.9, 0.3), cx(0.4, -0.2)}}) {
    const SpectralCurve c = SpectralCurve::from_coeffs(coeffs);
    const SeriesCoefficients sc = qde_coefficients(c, 20);
    const LaurentSeries Q = quasimomentum_series(c, 24);
    if (std::abs(sc.T.at(1) + 2.0 * Q.coeff(1)) > 1e-12 * std::max(1.0, std::abs(Q.coeff(1))))
      pass = false;
    for (const auto& [j, Hq] : sc.H) {
      if (j + 2 > Q.hi()) break;
      if (std::abs(Hq + 2.0 * Q.coeff(j + 2)) > 1e-12 * std::max(1.0, std::abs(Q.coeff(j + 2))))
        pass = false;
    }
  }
  report(6, pass, "oracle cross-checks: AGM lemniscate, free discriminant, -2 bridge", t.seconds(),
         30.0);
}

}  // namespace

int main() {
  criterion1_boutroux_scan();
  criterion2_gradient();
  criterion3_triple_consistency();
  criterion4_normalization_suite();
  criterion5_obstruction();
  criterion6_oracles();
  if (failures == 0) std::printf("ALL ACCEPTANCE CRITERIA PASS\n");
  else std::printf("%d ACCEPTANCE CRITERIA FAILED\n", failures);
  return failures;
}
