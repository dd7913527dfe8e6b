#pragma once

#include <array>
#include <vector>

#include "rncurves/errors.hpp"

namespace rncurves {

// Real smooth periodic solution of u'' = 3u^2 - g2, generated from its
// defining ODE with turning points taken from the first integral
// (u')^2 = 2u^3 - 2 g2 u - 4 g3. Phase convention u(0) = 2 e2 (the maximum),
// u'(0) = 0, with e1 > e2 > e3 the roots of 4t^3 - g2 t - g3. The Weierstrass
// function itself is never evaluated. Immutable after construction.
class PotentialOracle {
 public:
  static PotentialOracle make(double g2, double g3, double x_shift = 0.0);
  static PotentialOracle constant(double value, double period);  // degenerate, for tests

  double g2() const { return g2_; }
  double g3() const { return g3_; }
  double period() const { return T_; }
  double umin() const { return umin_; }
  double umax() const { return umax_; }
  std::array<double, 3> turning_e() const { return {e1_, e2_, e3_}; }  // e1 > e2 > e3
  bool is_constant() const { return constant_; }
  double scale() const;

  double u(double x) const;
  // u' from the first integral, sign tracked through the oscillation phase.
  double du(double x) const;

 private:
  PotentialOracle() = default;
  double g2_ = 0.0, g3_ = 0.0;
  double e1_ = 0.0, e2_ = 0.0, e3_ = 0.0;
  double T_ = 0.0;
  double umin_ = 0.0, umax_ = 0.0;
  double shift_ = 0.0;
  bool constant_ = false;
  double const_value_ = 0.0;
  // Half-period table of (u, u') on a uniform grid over [0, T/2].
  double h_ = 0.0;
  std::vector<double> tab_u_, tab_v_;
};

PotentialOracle make_potential(double g2, double g3);

// KdV integral averages (1/T) int_0^T P_n dx for P_{-1} = -u/2, P_1 = -u^2/8,
// P_3 = -(u'^2 + 2u^3)/32, by composite Gauss quadrature.
std::array<double, 3> pn_integrals(const PotentialOracle& pot, double tol = 1e-9);

// Floquet discriminant: trace of the period-T monodromy of -psi'' + u psi = E psi.
double discriminant(const PotentialOracle& pot, double E, double tol = 1e-11);

struct Monodromy {
  double trace;
  double det;  // Wronskian, = 1 up to integration error
};
Monodromy monodromy(const PotentialOracle& pot, double E, double tol = 1e-11);

// The three simple roots of Delta(E)^2 = 4 (band edges of the one-gap
// operator), by sign-change scan plus bisection; double crossings are
// filtered by a derivative test. Throws EdgeCountMismatch.
std::array<double, 3> band_edges(const PotentialOracle& pot);

struct QuasimomentumFit {
  std::array<double, 3> H;  // estimates of H_{-1}, H_1, H_3
  double residual;          // least-squares residual norm
};
// Least-squares fit of p(E) - sqrt(E) against E^{-(2n+1)/2} at 12
// logarithmically spaced band-center energies.
QuasimomentumFit quasimomentum_fit(const PotentialOracle& pot);

// (1/T) int_0^T u'^2 dx, the obstruction quantity.
double mean_ux_squared(const PotentialOracle& pot, double tol = 1e-9);

}  // namespace rncurves
