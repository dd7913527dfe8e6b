#include "rncurves/verify.hpp"

#include <cmath>
#include <random>

#include "rncurves/rnd.hpp"

namespace rncurves {

namespace {

double rel_dev(double a, double b) {
  const double den = std::max({std::abs(a), std::abs(b), 1e-12});
  return std::abs(a - b) / den;
}

}  // namespace

TripleConsistencyReport verify_triple_consistency(double g2, double g3, double tol_ac,
                                                  double tol_fit_h3) {
  TripleConsistencyReport rep{};
  const PotentialOracle pot = make_potential(g2, g3);
  rep.quadrature = pn_integrals(pot);
  const QuasimomentumFit fit = quasimomentum_fit(pot);
  rep.floquet_fit = fit.H;
  rep.band_edge = band_edges(pot);

  const SpectralCurve curve = SpectralCurve::from_roots(
      {cx(rep.band_edge[0]), cx(rep.band_edge[1]), cx(rep.band_edge[2])});
  rep.s1_defect = std::abs(curve.coeffs()[0]);
  const auto H = kdv_hamiltonians(curve);
  for (int i = 0; i < 3; ++i) rep.series[static_cast<std::size_t>(i)] = H[static_cast<std::size_t>(i)].real();

  rep.pass = true;
  for (int i = 0; i < 3; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    rep.max_rel_dev_ac[k] = rel_dev(rep.quadrature[k], rep.series[k]);
    rep.max_rel_dev_fit[k] = std::max(rel_dev(rep.floquet_fit[k], rep.quadrature[k]),
                                      rel_dev(rep.floquet_fit[k], rep.series[k]));
    const double tol_fit = i == 2 ? tol_fit_h3 : tol_ac;
    if (rep.max_rel_dev_ac[k] > tol_ac || rep.max_rel_dev_fit[k] > tol_fit) rep.pass = false;
  }
  return rep;
}

GradientReport verify_gradient() {
  GradientReport rep{};
  rep.boutroux = solve_boutroux(BoutrouxFamily::monic_plus, 1.0);

  // Chart coordinates for E^3 - g2c E - g3c: the solved curve E^3 + E - g3
  // has g2c = -1, g3c = g3.
  const std::array<double, 4> critical{-1.0, 0.0, rep.boutroux->g3, 0.0};
  const std::array<double, 4> reference{1.0, 0.0, 0.0, 0.0};  // curve (0,-1,0)

  // Theorem part A at genus 1: the curve's own Y has expansion z^{-3} + O(z)
  // on depressed cubics.
  double defect = 0.0;
  for (const auto& base : {critical, reference}) {
    const LaurentSeries ys = y_series(chart_curve(base), 6);
    if (std::abs(ys.coeff(-3) - 1.0) > 1e-12) defect = std::max(defect, std::abs(ys.coeff(-3) - 1.0));
    for (int j = -2; j <= 0; ++j) defect = std::max(defect, std::abs(ys.coeff(j)));
  }
  rep.y_expansion_defect = defect;

  HamiltonianSpec re_h3;
  re_h3.terms = {{3, 1.0, 0.0}};
  const ConstrainedGradient gc = constrained_gradient(critical, re_h3);
  const ConstrainedGradient gr = constrained_gradient(reference, re_h3);
  rep.critical_raw_norm = gc.raw_norm;
  rep.critical_projected_norm = gc.projected_norm;
  rep.reference_raw_norm = gr.raw_norm;
  rep.reference_projected_norm = gr.projected_norm;
  rep.forward_pass = gc.projected_norm < 1e-5 * (gc.raw_norm + 1e-8);
  rep.contrapositive_pass = gr.projected_norm > 1e-3 * gr.raw_norm;
  rep.pass = rep.forward_pass && rep.contrapositive_pass && defect < 1e-10;
  return rep;
}

ObstructionReport verify_obstruction(int n_curves, int n_potentials, std::uint64_t seed) {
  ObstructionReport rep{};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);

  rep.curves_tested = 0;
  rep.min_curve_residual = 1e300;
  while (rep.curves_tested < n_curves) {
    std::array<double, 3> r{uni(rng), uni(rng), uni(rng)};
    std::sort(r.begin(), r.end());
    if (r[1] - r[0] < 0.15 || r[2] - r[1] < 0.15) continue;
    const SpectralCurve c = SpectralCurve::from_roots({cx(r[0]), cx(r[1]), cx(r[2])});
    const auto res = boutroux_residual(c);
    const double m = std::max(std::abs(res[0]), std::abs(res[1]));
    rep.min_curve_residual = std::min(rep.min_curve_residual, m / std::pow(c.scale(), 2.5));
    ++rep.curves_tested;
  }

  rep.potentials_tested = 0;
  rep.min_mean_ux2 = 1e300;
  while (rep.potentials_tested < n_potentials) {
    // Three real Weierstrass roots summing to zero.
    const double e1 = std::abs(uni(rng)) + 0.3;
    double e2 = uni(rng);
    if (e2 >= e1) continue;
    const double e3 = -e1 - e2;
    if (e3 >= e2) continue;
    if (e1 - e2 < 0.15 || e2 - e3 < 0.15) continue;
    const double g2 = -4.0 * (e1 * e2 + e1 * e3 + e2 * e3);
    const double g3 = 4.0 * e1 * e2 * e3;
    const PotentialOracle pot = make_potential(g2, g3);
    const double v = mean_ux_squared(pot) / pot.scale();
    rep.min_mean_ux2 = std::min(rep.min_mean_ux2, v);
    ++rep.potentials_tested;
  }

  rep.pass = rep.min_curve_residual > 1e-3 && rep.min_mean_ux2 > 1e-6;
  return rep;
}

}  // namespace rncurves
