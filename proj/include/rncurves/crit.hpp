#pragma once

#include <array>
#include <optional>
#include <string>

#include "rncurves/series.hpp"

namespace rncurves {

// Functional H = sum c_j Re H_j + d_j Im H_j in the eq-(Q) coefficient
// convention; indices odd and >= -1.
struct HamiltonianSpec {
  struct Term {
    int j;
    double c;
    double d;
  };
  std::vector<Term> terms;
};

double hamiltonian(const SpectralCurve& curve, const HamiltonianSpec& spec, int order = 20,
                   double period_tol = 1e-12);

// Im parts of the A- and B-periods of Y dE.
std::array<double, 2> boutroux_residual(const SpectralCurve& curve, double tol = 1e-12);

// Registered coefficient conventions for the one-parameter Boutroux solve at
// fixed real g2 > 0 with g3 free. Families fold the Weierstrass 4E^3 leading
// coefficient into monic form where applicable; adding a family requires a
// new tag here.
enum class BoutrouxFamily {
  monic_minus,  // Y^2 = E^3 - g2 E - g3
  monic_plus,   // Y^2 = E^3 + g2 E - g3
  weier_minus,  // Y^2 = 4E^3 - g2 E - g3, folded monic: E^3 - (g2/4) E - (g3/4)
  weier_plus,   // Y^2 = 4E^3 + g2 E - g3, folded monic: E^3 + (g2/4) E - (g3/4)
};

const char* family_tag(BoutrouxFamily f);
std::array<BoutrouxFamily, 4> all_families();
SpectralCurve family_curve(BoutrouxFamily f, double g2, double g3);
std::pair<double, double> family_default_bracket(BoutrouxFamily f, double g2);

struct BoutrouxResult {
  explicit BoutrouxResult(SpectralCurve c) : curve(std::move(c)) {}

  SpectralCurve curve;
  std::array<double, 2> residuals;  // Im A- and B-periods of Y dE at the solution
  std::string family;
  double g2;
  double g3;
  double ratio;  // g3 / g2^{3/2} in the family's own convention
  std::optional<double> implied_h;
  int iterations;
  double bracket_lo, bracket_hi;
};

// Bisection (secant polish) on the surviving residual after conjugation
// symmetry reduction; the solver searches real g3 only. Throws
// NoSolutionInBracket / MultipleSignChanges.
BoutrouxResult solve_boutroux(BoutrouxFamily family, double g2,
                              std::optional<std::pair<double, double>> bracket = std::nullopt,
                              double quad_tol = 1e-12);

// Inverse of h -> (4h^2+1)/(4h^2-3)^{3/2} on the monotone branch h > sqrt(3)/2.
double implied_h(double ratio);
double h_to_ratio(double h);

struct ScanEntry {
  std::string family;
  std::string status;  // "solved" | "NoSolutionInBracket" | "MultipleSignChanges"
  double g3 = 0.0;
  double ratio = 0.0;
  std::optional<double> implied_h;
  std::optional<double> h_error;
  std::array<double, 2> residuals{0.0, 0.0};
  int iterations = 0;
};

// Runs solve_boutroux for every registered family and reports match quality
// against h_target; failures are recorded per family, never thrown.
std::vector<ScanEntry> convention_scan(double g2, double h_target, double quad_tol = 1e-12);

// Depressed-cubic chart of the moduli space: p = (Re g2, Im g2, Re g3, Im g3)
// for Y^2 = E^3 - g2 E - g3.
SpectralCurve chart_curve(const std::array<double, 4>& p);

// Tangent chart of the T1-leaf (level set of H_{-1}, equivalently T_1) at a
// base point, from a central-difference constraint Jacobian and its SVD
// null space.
struct LeafChart {
  std::array<double, 4> base;
  std::array<std::array<double, 4>, 2> jacobian;  // rows: d(Re H_-1), d(Im H_-1)
  std::array<std::array<double, 4>, 2> tangent;   // orthonormal null-space basis
  double sigma_min, sigma_max;
};

LeafChart leaf_chart(const std::array<double, 4>& base, double fd_step_factor = 1e-5,
                     int order = 20, double period_tol = 1e-12);

struct ConstrainedGradient {
  std::array<double, 4> raw;
  std::array<double, 2> projected;  // components along the leaf tangent basis
  double raw_norm;
  double projected_norm;
};

ConstrainedGradient constrained_gradient(const std::array<double, 4>& base,
                                         const HamiltonianSpec& spec,
                                         double fd_step_factor = 1e-5, int order = 20,
                                         double period_tol = 1e-12);

}  // namespace rncurves
