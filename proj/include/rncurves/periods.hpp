#pragma once

#include <vector>

#include "rncurves/curve.hpp"

namespace rncurves {

// Differential N(E) dE / Y in the odd class of the hyperelliptic involution.
// `numerator` holds the coefficients of N in ascending powers of E.
struct OddDifferential {
  std::vector<cx> numerator;

  cx eval(cx E) const {
    cx v = 0.0;
    for (std::size_t k = numerator.size(); k-- > 0;) v = v * E + numerator[k];
    return v;
  }
  int degree() const { return static_cast<int>(numerator.size()) - 1; }
};

struct PeriodVector {
  std::vector<cx> values;    // one per cycle, canonical basis order A_1..A_g, B_1..B_g
  std::vector<int> nodes;    // quadrature node counts
  double est_error = 0.0;    // max estimated quadrature error
};

// Contour integral of the differential over the cycle with a continuous
// Y-branch. Converges by Gauss-Legendre node doubling (tanh-sinh fallback);
// throws NoConvergence past the node cap 2^14.
cx integrate_cycle(const SpectralCurve& curve, const OddDifferential& diff, const Cycle& cycle,
                   double tol = 1e-12);

struct CycleIntegral {
  cx value;
  int nodes;
  double est_error;
};
CycleIntegral integrate_cycle_full(const SpectralCurve& curve, const OddDifferential& diff,
                                   const Cycle& cycle, double tol = 1e-12);

PeriodVector period_vector(const SpectralCurve& curve, const OddDifferential& diff,
                           double tol = 1e-12);

// AGM oracle for genus-1 curves with three real branch points: half-periods
// of the holomorphic differential dE/(2Y). `real_half` is half the period of
// the cycle through the region where the cubic is positive, `imag_half` half
// the magnitude of the (purely imaginary) gap-cycle period.
struct HalfPeriods {
  double real_half;
  double imag_half;
};
HalfPeriods agm_complete_elliptic(const SpectralCurve& curve);

double agm(double a, double b);

// Gauss-Legendre nodes/weights on [-1, 1]; cached, thread-safe.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

}  // namespace rncurves
