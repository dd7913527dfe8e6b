#pragma once

#include "rncurves/periods.hpp"

namespace rncurves {

// Pole data at infinity for an odd differential N(E) dE / Y: the numerator
// coefficients of E^g, E^{g+1}, ... are fixed by the principal part, the g
// lower coefficients are solved for by real-normalization. Parity forces the
// residue at infinity to vanish for every spec in this class.
struct PrincipalPartSpec {
  std::vector<cx> fixed;  // coefficients of E^g, E^{g+1}, ..., ascending

  PrincipalPartSpec operator+(const PrincipalPartSpec& o) const {
    PrincipalPartSpec s;
    s.fixed.assign(std::max(fixed.size(), o.fixed.size()), cx(0.0));
    for (std::size_t i = 0; i < fixed.size(); ++i) s.fixed[i] += fixed[i];
    for (std::size_t i = 0; i < o.fixed.size(); ++i) s.fixed[i] += o.fixed[i];
    return s;
  }
};

// Unique differential N(E) dE / Y with the given pole part whose 2g cycle
// periods are all real, solved from the 2g x 2g real linear system on the
// imaginary parts. Throws SingularNormalizationSystem past condition 1e12.
OddDifferential build_real_normalized(const SpectralCurve& curve, const PrincipalPartSpec& spec,
                                      double tol = 1e-12);

// Quasimomentum differential dQ = (E + c) dE / (2Y) at genus 1, normalized so
// Q = z^{-1} + O(z) with no constant term.
OddDifferential quasimomentum(const SpectralCurve& curve, double tol = 1e-12);

// 2g holomorphic differentials with Im-period matrix equal to the identity:
// Im oint_{A_j} Omega_{A_i} = delta_ij, Im oint_{B_j} Omega_{A_i} = 0, and the
// B-counterparts. Order: Omega_{A_1}..Omega_{A_g}, Omega_{B_1}..Omega_{B_g}.
std::vector<OddDifferential> holomorphic_real_basis(const SpectralCurve& curve,
                                                    double tol = 1e-12);

// The Boutroux differential Y dE, i.e. numerator equal to the monic polynomial.
OddDifferential y_differential(const SpectralCurve& curve);

// Condition number of the real-normalization system (diagnostic).
double normalization_condition(const SpectralCurve& curve, double tol = 1e-12);

}  // namespace rncurves
