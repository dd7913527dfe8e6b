#pragma once

#include <cstdint>

#include "rncurves/crit.hpp"
#include "rncurves/hill.hpp"

namespace rncurves {

// Cross-checks the KdV integrals (H_{-1}, H_1, H_3) of the one-gap potential
// with Weierstrass invariants (g2, g3) along three independent routes:
// (a) direct quadrature of the P_n densities, (b) Floquet quasimomentum
// asymptotics, (c) series coefficients of dQ on the curve built from the
// measured band edges.
struct TripleConsistencyReport {
  std::array<double, 3> quadrature;   // route (a)
  std::array<double, 3> floquet_fit;  // route (b)
  std::array<double, 3> series;       // route (c)
  std::array<double, 3> band_edge;    // measured spectral edges
  double s1_defect;                   // |sum of edges| of the edge curve
  // Max pairwise relative deviations per Hamiltonian, and those involving the
  // fit route separately (fit-limited for H_3).
  std::array<double, 3> max_rel_dev_ac;
  std::array<double, 3> max_rel_dev_fit;
  bool pass;
};
TripleConsistencyReport verify_triple_consistency(double g2, double g3, double tol_ac = 1e-5,
                                                  double tol_fit_h3 = 1e-4);

// Theorem-style gradient experiment: projected gradient of Re H_3 on the
// T1-leaf at the Boutroux curve (forward direction) and at the reference
// curve (0,-1,0) with nonzero residual (contrapositive direction). Also
// asserts that the curve's own Y expands as z^{-3} + O(z) at the base points.
struct GradientReport {
  std::optional<BoutrouxResult> boutroux;
  double critical_raw_norm;
  double critical_projected_norm;
  double reference_raw_norm;
  double reference_projected_norm;
  double y_expansion_defect;  // max |coeff| of z^{-2}..z^0 in the Y series
  bool forward_pass;          // projected < 1e-5 * (raw + 1e-8) at the solution
  bool contrapositive_pass;   // projected > 1e-3 * raw at the reference curve
  bool pass;
};
GradientReport verify_gradient();

// Obstruction property: every curve with three real branch points has a
// strictly positive Boutroux residual, and every real smooth potential has
// (1/T) int u'^2 > 0.
struct ObstructionReport {
  int curves_tested;
  double min_curve_residual;  // min over samples of max residual / scale^{5/2}
  int potentials_tested;
  double min_mean_ux2;  // min over samples of (1/T) int u'^2 / scale
  bool pass;
};
ObstructionReport verify_obstruction(int n_curves = 20, int n_potentials = 20,
                                     std::uint64_t seed = 20240501);

}  // namespace rncurves
