#include "rncurves/crit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rncurves/rnd.hpp"

namespace rncurves {

namespace {

double ratio_boundary() {
  // Discriminant boundary of E^3 - g2 E - g3 at g2 > 0: |g3|/g2^{3/2} = 2/(3 sqrt 3).
  return 2.0 / (3.0 * std::sqrt(3.0));
}

}  // namespace

double hamiltonian(const SpectralCurve& curve, const HamiltonianSpec& spec, int order,
                   double period_tol) {
  if (spec.terms.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& t : spec.terms) {
    if (t.c == 0.0 && t.d == 0.0) continue;
    const cx H = kdv_hamiltonian(curve, t.j, order, period_tol);
    acc += t.c * H.real() + t.d * H.imag();
  }
  return acc;
}

std::array<double, 2> boutroux_residual(const SpectralCurve& curve, double tol) {
  if (curve.genus() != 1) throw InputError("Boutroux residual requires a genus-1 curve");
  const OddDifferential yde = y_differential(curve);
  const PeriodVector pv = period_vector(curve, yde, tol);
  return {pv.values[0].imag(), pv.values[1].imag()};
}

const char* family_tag(BoutrouxFamily f) {
  switch (f) {
    case BoutrouxFamily::monic_minus: return "Y2=E3-g2E-g3";
    case BoutrouxFamily::monic_plus: return "Y2=E3+g2E-g3";
    case BoutrouxFamily::weier_minus: return "Y2=4E3-g2E-g3";
    case BoutrouxFamily::weier_plus: return "Y2=4E3+g2E-g3";
  }
  return "?";
}

std::array<BoutrouxFamily, 4> all_families() {
  return {BoutrouxFamily::monic_minus, BoutrouxFamily::monic_plus, BoutrouxFamily::weier_minus,
          BoutrouxFamily::weier_plus};
}

SpectralCurve family_curve(BoutrouxFamily f, double g2, double g3) {
  switch (f) {
    case BoutrouxFamily::monic_minus:
      return SpectralCurve::from_cubic(0.0, -g2, -g3);
    case BoutrouxFamily::monic_plus:
      return SpectralCurve::from_cubic(0.0, g2, -g3);
    case BoutrouxFamily::weier_minus:
      return SpectralCurve::from_cubic(0.0, -g2 / 4.0, -g3 / 4.0);
    case BoutrouxFamily::weier_plus:
      return SpectralCurve::from_cubic(0.0, g2 / 4.0, -g3 / 4.0);
  }
  throw InputError("unknown family");
}

std::pair<double, double> family_default_bracket(BoutrouxFamily f, double g2) {
  const double s = std::pow(g2, 1.5);
  // Minus-sign families must stay in the one-real-root region, which for the
  // monic convention means g3/g2^{3/2} above 2/(3 sqrt 3); the Weierstrass
  // fold halves the monic ratio per unit of user g3.
  switch (f) {
    case BoutrouxFamily::monic_minus: return {1.05 * ratio_boundary() * s, 6.0 * s};
    case BoutrouxFamily::monic_plus: return {0.02 * s, 6.0 * s};
    case BoutrouxFamily::weier_minus: return {2.0 * 1.05 * ratio_boundary() * s, 12.0 * s};
    case BoutrouxFamily::weier_plus: return {0.04 * s, 12.0 * s};
  }
  throw InputError("unknown family");
}

double h_to_ratio(double h) {
  if (!(h > std::sqrt(3.0) / 2.0)) throw RatioOutOfRange("h must exceed sqrt(3)/2");
  const double a = 4.0 * h * h;
  return (a + 1.0) / std::pow(a - 3.0, 1.5);
}

double implied_h(double ratio) {
  if (!(ratio > 0.0)) throw RatioOutOfRange("ratio must be positive");
  double lo = std::sqrt(3.0) / 2.0 * (1.0 + 1e-12);
  double hi = 2.0;
  while (h_to_ratio(hi) > ratio) {
    hi *= 2.0;
    if (hi > 1e12) throw RatioOutOfRange("ratio below the range of the parametrization");
  }
  while (h_to_ratio(lo) < ratio) {
    lo = std::sqrt(3.0) / 2.0 + (lo - std::sqrt(3.0) / 2.0) / 16.0;
    if (lo - std::sqrt(3.0) / 2.0 < 1e-300)
      throw RatioOutOfRange("ratio above the range of the parametrization");
  }
  // Bisection on the strictly decreasing map down to machine resolution.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h_to_ratio(mid) > ratio ? lo : hi) = mid;
    if (hi - lo <= 2e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

BoutrouxResult solve_boutroux(BoutrouxFamily family, double g2,
                              std::optional<std::pair<double, double>> bracket, double quad_tol) {
  if (!(g2 > 0.0)) throw InputError("solve_boutroux requires real g2 > 0");
  const auto [blo, bhi] = bracket.value_or(family_default_bracket(family, g2));
  if (!(blo < bhi)) throw InputError("bracket must satisfy lo < hi");

  int iterations = 0;
  // Surviving residual after symmetry reduction: the B-cycle one. The A-cycle
  // encircles the conjugation-symmetric vertical cut and its Im part vanishes
  // identically on this real-coefficient family.
  auto reduced = [&](double g3) {
    ++iterations;
    const SpectralCurve c = family_curve(family, g2, g3);
    return boutroux_residual(c, quad_tol)[1];
  };

  const int pre = 24;
  std::vector<double> ps(pre + 1), rs(pre + 1);
  for (int i = 0; i <= pre; ++i) {
    ps[static_cast<std::size_t>(i)] = blo + (bhi - blo) * i / pre;
    rs[static_cast<std::size_t>(i)] = reduced(ps[static_cast<std::size_t>(i)]);
  }
  int sign_changes = 0, seg = -1;
  for (int i = 0; i < pre; ++i)
    if (rs[static_cast<std::size_t>(i)] * rs[static_cast<std::size_t>(i + 1)] < 0.0) {
      ++sign_changes;
      seg = i;
    }
  if (sign_changes == 0)
    throw NoSolutionInBracket("no sign change of the reduced Boutroux residual in [" +
                              std::to_string(blo) + ", " + std::to_string(bhi) + "]");
  if (sign_changes > 1)
    throw MultipleSignChanges("bracket contains " + std::to_string(sign_changes) +
                              " sign changes; split it");

  double a = ps[static_cast<std::size_t>(seg)], b = ps[static_cast<std::size_t>(seg + 1)];
  double ra = rs[static_cast<std::size_t>(seg)];
  double root = 0.5 * (a + b), rroot = 0.0;
  for (int it = 0; it < 200; ++it) {
    root = 0.5 * (a + b);
    rroot = reduced(root);
    if (ra * rroot <= 0.0)
      b = root;
    else {
      a = root;
      ra = rroot;
    }
    if (b - a < 1e-15 * std::max(1.0, std::abs(root))) break;
  }

  BoutrouxResult out(family_curve(family, g2, root));
  out.residuals = boutroux_residual(out.curve, quad_tol);
  const double period_scale =
      std::max(1.0, std::abs(integrate_cycle(out.curve, y_differential(out.curve),
                                             out.curve.canonical_homology_basis()[1], quad_tol)));
  if (std::abs(out.residuals[1]) > 1e-9 * period_scale)
    throw NoConvergence("Boutroux residual " + std::to_string(out.residuals[1]) +
                        " above 1e-9 * period scale after bisection");
  if (out.curve.real_root_count() != 1 || !out.curve.conj_symmetric())
    throw NumericError("Boutroux solution does not have one real branch point and a conjugate pair");

  out.family = family_tag(family);
  out.g2 = g2;
  out.g3 = root;
  out.ratio = root / std::pow(g2, 1.5);
  try {
    out.implied_h = implied_h(out.ratio);
  } catch (const RatioOutOfRange&) {
    out.implied_h = std::nullopt;
  }
  out.iterations = iterations;
  out.bracket_lo = blo;
  out.bracket_hi = bhi;
  return out;
}

std::vector<ScanEntry> convention_scan(double g2, double h_target, double quad_tol) {
  std::vector<ScanEntry> entries;
  for (BoutrouxFamily f : all_families()) {
    ScanEntry e;
    e.family = family_tag(f);
    try {
      const BoutrouxResult r = solve_boutroux(f, g2, std::nullopt, quad_tol);
      e.status = "solved";
      e.g3 = r.g3;
      e.ratio = r.ratio;
      e.implied_h = r.implied_h;
      if (r.implied_h) e.h_error = std::abs(*r.implied_h - h_target);
      e.residuals = r.residuals;
      e.iterations = r.iterations;
    } catch (const NoSolutionInBracket&) {
      e.status = "NoSolutionInBracket";
    } catch (const MultipleSignChanges&) {
      e.status = "MultipleSignChanges";
    }
    entries.push_back(std::move(e));
  }
  std::stable_sort(entries.begin(), entries.end(), [](const ScanEntry& x, const ScanEntry& y) {
    const double ex = x.h_error.value_or(1e300), ey = y.h_error.value_or(1e300);
    return ex < ey;
  });
  return entries;
}

SpectralCurve chart_curve(const std::array<double, 4>& p) {
  return SpectralCurve::from_cubic(0.0, -cx(p[0], p[1]), -cx(p[2], p[3]));
}

namespace {

std::array<double, 4> fd_steps(const std::array<double, 4>& base, double factor) {
  double scale = 1.0;
  for (double v : base) scale = std::max(scale, std::abs(v));
  std::array<double, 4> h{};
  h.fill(factor * scale);
  return h;
}

cx chart_Hm1(const std::array<double, 4>& p, int order, double period_tol) {
  return kdv_hamiltonians(chart_curve(p), order, period_tol)[0];
}

}  // namespace

LeafChart leaf_chart(const std::array<double, 4>& base, double fd_step_factor, int order,
                     double period_tol) {
  const auto h = fd_steps(base, fd_step_factor);
  LeafChart chart;
  chart.base = base;
  Eigen::Matrix<double, 2, 4> J;
  for (int i = 0; i < 4; ++i) {
    auto pp = base, pm = base;
    pp[static_cast<std::size_t>(i)] += h[static_cast<std::size_t>(i)];
    pm[static_cast<std::size_t>(i)] -= h[static_cast<std::size_t>(i)];
    const cx fp = chart_Hm1(pp, order, period_tol);
    const cx fm = chart_Hm1(pm, order, period_tol);
    J(0, i) = (fp.real() - fm.real()) / (2.0 * h[static_cast<std::size_t>(i)]);
    J(1, i) = (fp.imag() - fm.imag()) / (2.0 * h[static_cast<std::size_t>(i)]);
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(J, Eigen::ComputeFullV);
  chart.sigma_max = svd.singularValues()(0);
  chart.sigma_min = svd.singularValues()(1);
  double scale = 1.0;
  for (double v : base) scale = std::max(scale, std::abs(v));
  if (!(chart.sigma_min > 1e-6 * scale))
    throw RankDeficientConstraint("constraint Jacobian smallest singular value " +
                                  std::to_string(chart.sigma_min));
  const auto& V = svd.matrixV();
  for (int i = 0; i < 4; ++i) {
    chart.jacobian[0][static_cast<std::size_t>(i)] = J(0, i);
    chart.jacobian[1][static_cast<std::size_t>(i)] = J(1, i);
    chart.tangent[0][static_cast<std::size_t>(i)] = V(i, 2);
    chart.tangent[1][static_cast<std::size_t>(i)] = V(i, 3);
  }
  return chart;
}

ConstrainedGradient constrained_gradient(const std::array<double, 4>& base,
                                         const HamiltonianSpec& spec, double fd_step_factor,
                                         int order, double period_tol) {
  const LeafChart chart = leaf_chart(base, fd_step_factor, order, period_tol);
  const auto h = fd_steps(base, fd_step_factor);
  ConstrainedGradient g;
  bool all_zero = true;
  for (const auto& t : spec.terms)
    if (t.c != 0.0 || t.d != 0.0) all_zero = false;
  for (int i = 0; i < 4; ++i) {
    if (all_zero) {
      g.raw[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    auto pp = base, pm = base;
    pp[static_cast<std::size_t>(i)] += h[static_cast<std::size_t>(i)];
    pm[static_cast<std::size_t>(i)] -= h[static_cast<std::size_t>(i)];
    g.raw[static_cast<std::size_t>(i)] =
        (hamiltonian(chart_curve(pp), spec, order, period_tol) -
         hamiltonian(chart_curve(pm), spec, order, period_tol)) /
        (2.0 * h[static_cast<std::size_t>(i)]);
  }
  double rn = 0.0;
  for (double v : g.raw) rn += v * v;
  g.raw_norm = std::sqrt(rn);
  for (int k = 0; k < 2; ++k) {
    double dot = 0.0;
    for (int i = 0; i < 4; ++i)
      dot += g.raw[static_cast<std::size_t>(i)] * chart.tangent[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    g.projected[static_cast<std::size_t>(k)] = dot;
  }
  g.projected_norm = std::hypot(g.projected[0], g.projected[1]);
  return g;
}

}  // namespace rncurves
