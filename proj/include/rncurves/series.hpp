#pragma once

#include <array>
#include <map>

#include "rncurves/periods.hpp"

namespace rncurves {

// Truncated Laurent series in z; a[k] is the coefficient of z^{lo+k}. For
// differentials the entries are dz-coefficients.
struct LaurentSeries {
  int lo = 0;
  std::vector<cx> a;

  int hi() const { return lo + static_cast<int>(a.size()) - 1; }
  cx coeff(int j) const {
    const int k = j - lo;
    if (k < 0 || k >= static_cast<int>(a.size())) return cx(0.0);
    return a[static_cast<std::size_t>(k)];
  }
  void trim();
};

LaurentSeries mul(const LaurentSeries& x, const LaurentSeries& y, int kmax);
LaurentSeries add(const LaurentSeries& x, const LaurentSeries& y);
// Termwise antiderivative of a dz-coefficient series; requires |coeff(-1)|
// below 1e-10 (no log term) and drops it.
LaurentSeries integrate_termwise(const LaurentSeries& s);
LaurentSeries differentiate(const LaurentSeries& s);

struct Expansion {
  LaurentSeries series;
  double radius;      // |z| with |s1 z^2 + s2 z^4 + s3 z^6| = 1/2
  double tail_bound;  // geometric estimate for the first dropped coefficient
};

// z-expansion of N(E) dE / Y at infinity, z = E^{-1/2}, on the branch_ref
// sheet: -2 N(z^{-2}) / w(z) dz with w = sqrt(1 + s1 z^2 + s2 z^4 + s3 z^6).
// Genus 1 only; coefficients up to z^{order} dz. Throws OrderTooLarge past 40.
Expansion expand_at_infinity(const SpectralCurve& curve, const OddDifferential& diff, int order);

// z-expansion of P(E) dE (the even channel, numerator Y * P(E) over Y). Exact
// and finite: P(z^{-2}) * (-2 z^{-3}) dz.
Expansion expand_polynomial_differential(const SpectralCurve& curve, const std::vector<cx>& P,
                                         int order);

// Expansion of Y itself: z^{-3} w(z).
LaurentSeries y_series(const SpectralCurve& curve, int order);

// Coefficients of QdE at infinity in both paper conventions. T and H hold the
// raw coefficients of QdE = (sum T_k z^{-k-1} + sum H_j z^{j-1}) dz; the kdv
// triple holds the eq-(Q) convention Q = z^{-1} + sum H_{2n-1} z^{2n+1}, the
// canonical form exposed to the rest of the library. The two differ by the
// exact factor -2 carried by dE = -2 z^{-3} dz.
struct SeriesCoefficients {
  std::map<int, cx> T;  // k = 0 .. n+m (= 3)
  std::map<int, cx> H;  // j >= 1
  cx H_m1, H_p1, H_p3;  // eq-(Q) H_{-1}, H_1, H_3
  int order = 0;
};

SeriesCoefficients qde_coefficients(const SpectralCurve& curve, int order = 20,
                                    double period_tol = 1e-12);

std::array<cx, 3> kdv_hamiltonians(const SpectralCurve& curve, int order = 20,
                                   double period_tol = 1e-12);

// Single eq-(Q) Hamiltonian H_j for odd j >= -1.
cx kdv_hamiltonian(const SpectralCurve& curve, int j, int order = 20, double period_tol = 1e-12);

// The Q series itself (z^{-1} + H_{-1} z + ...), for oracle-style tests.
LaurentSeries quasimomentum_series(const SpectralCurve& curve, int order = 20,
                                   double period_tol = 1e-12);

}  // namespace rncurves
