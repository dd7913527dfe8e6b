#include "rncurves/rnd.hpp"

#include <Eigen/Dense>
#include <limits>

namespace rncurves {

namespace {

struct NormalizationSystem {
  Eigen::MatrixXd M;            // 2g x 2g, unknowns (Re c_k, Im c_k)
  std::vector<Cycle> cycles;    // A_1..A_g, B_1..B_g
  double condition;
};

NormalizationSystem normalization_system(const SpectralCurve& curve, double tol) {
  const int g = curve.genus();
  NormalizationSystem sys;
  sys.cycles = curve.canonical_homology_basis();
  sys.M.resize(2 * g, 2 * g);
  for (int k = 0; k < g; ++k) {
    OddDifferential basis;
    basis.numerator.assign(static_cast<std::size_t>(k) + 1, cx(0.0));
    basis.numerator.back() = 1.0;  // E^k dE / Y
    for (int j = 0; j < 2 * g; ++j) {
      const cx period = integrate_cycle(curve, basis, sys.cycles[static_cast<std::size_t>(j)], tol);
      sys.M(j, k) = period.imag();      // Im part multiplies Re c_k
      sys.M(j, g + k) = period.real();  // Re part multiplies Im c_k
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.M);
  const auto& sv = svd.singularValues();
  sys.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                          : std::numeric_limits<double>::infinity();
  return sys;
}

}  // namespace

double normalization_condition(const SpectralCurve& curve, double tol) {
  return normalization_system(curve, tol).condition;
}

OddDifferential build_real_normalized(const SpectralCurve& curve, const PrincipalPartSpec& spec,
                                      double tol) {
  const int g = curve.genus();
  const NormalizationSystem sys = normalization_system(curve, tol);
  if (sys.condition > 1e12)
    throw SingularNormalizationSystem("normalization system condition " +
                                      std::to_string(sys.condition));

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * g);
  if (!spec.fixed.empty()) {
    OddDifferential fixed;
    fixed.numerator.assign(static_cast<std::size_t>(g) + spec.fixed.size(), cx(0.0));
    for (std::size_t i = 0; i < spec.fixed.size(); ++i)
      fixed.numerator[static_cast<std::size_t>(g) + i] = spec.fixed[i];
    for (int j = 0; j < 2 * g; ++j)
      rhs(j) = -integrate_cycle(curve, fixed, sys.cycles[static_cast<std::size_t>(j)], tol).imag();
  }

  const Eigen::VectorXd x = sys.M.fullPivLu().solve(rhs);

  OddDifferential out;
  out.numerator.assign(static_cast<std::size_t>(g) + spec.fixed.size(), cx(0.0));
  for (int k = 0; k < g; ++k) out.numerator[static_cast<std::size_t>(k)] = cx(x(k), x(g + k));
  for (std::size_t i = 0; i < spec.fixed.size(); ++i)
    out.numerator[static_cast<std::size_t>(g) + i] = spec.fixed[i];
  while (out.numerator.size() > 1 && std::abs(out.numerator.back()) == 0.0)
    out.numerator.pop_back();
  return out;
}

OddDifferential quasimomentum(const SpectralCurve& curve, double tol) {
  if (curve.genus() != 1) throw InputError("quasimomentum requires a genus-1 curve");
  PrincipalPartSpec spec;
  spec.fixed = {cx(0.5)};  // dQ = (E/2 + c0) dE / Y ~ -z^{-2} dz
  return build_real_normalized(curve, spec, tol);
}

std::vector<OddDifferential> holomorphic_real_basis(const SpectralCurve& curve, double tol) {
  const int g = curve.genus();
  const NormalizationSystem sys = normalization_system(curve, tol);
  if (sys.condition > 1e12)
    throw SingularNormalizationSystem("normalization system condition " +
                                      std::to_string(sys.condition));
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(sys.M);

  std::vector<OddDifferential> basis;
  for (int j = 0; j < 2 * g; ++j) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * g);
    rhs(j) = 1.0;
    const Eigen::VectorXd x = lu.solve(rhs);
    OddDifferential d;
    d.numerator.assign(static_cast<std::size_t>(g), cx(0.0));
    for (int k = 0; k < g; ++k) d.numerator[static_cast<std::size_t>(k)] = cx(x(k), x(g + k));
    basis.push_back(std::move(d));
  }
  return basis;
}

OddDifferential y_differential(const SpectralCurve& curve) {
  const auto& s = curve.coeffs();
  const int n = static_cast<int>(s.size());
  OddDifferential d;
  d.numerator.assign(static_cast<std::size_t>(n) + 1, cx(0.0));
  d.numerator.back() = 1.0;
  for (int k = 0; k < n; ++k) d.numerator[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(n - 1 - k)];
  return d;
}

}  // namespace rncurves
