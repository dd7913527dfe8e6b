#include "rncurves/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rncurves/rnd.hpp"

namespace rncurves {

namespace {

constexpr int kMaxOrder = 40;

// Power series of (1 + u)^alpha by binomial expansion; the evaluation radius
// keeps |u| < 1/2.
LaurentSeries binomial_of(const LaurentSeries& u, double alpha, int kmax) {
  LaurentSeries acc;
  acc.lo = 0;
  acc.a.assign(static_cast<std::size_t>(kmax) + 1, cx(0.0));
  acc.a[0] = 1.0;
  LaurentSeries upow;
  upow.lo = 0;
  upow.a = {cx(1.0)};
  double binom = 1.0;
  for (int m = 1; 2 * m <= kmax + 1; ++m) {
    binom *= (alpha - (m - 1)) / m;
    upow = mul(upow, u, kmax);
    bool nonzero = false;
    for (const cx& c : upow.a)
      if (std::abs(c) > 0.0) nonzero = true;
    if (!nonzero) break;
    for (int j = upow.lo; j <= upow.hi(); ++j)
      if (j >= 0 && j <= kmax) acc.a[static_cast<std::size_t>(j)] += binom * upow.coeff(j);
  }
  return acc;
}

LaurentSeries w_argument(const SpectralCurve& curve, int kmax) {
  // u(z) = s1 z^2 + s2 z^4 + s3 z^6.
  LaurentSeries u;
  u.lo = 0;
  u.a.assign(static_cast<std::size_t>(kmax) + 1, cx(0.0));
  const auto& s = curve.coeffs();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int p = 2 * (static_cast<int>(i) + 1);
    if (p <= kmax) u.a[static_cast<std::size_t>(p)] = s[i];
  }
  return u;
}

double expansion_radius(const SpectralCurve& curve) {
  const auto& s = curve.coeffs();
  double a1 = std::abs(s[0]), a2 = std::abs(s[1]), a3 = std::abs(s[2]);
  if (a1 == 0.0 && a2 == 0.0 && a3 == 0.0) return std::numeric_limits<double>::infinity();
  auto psi = [&](double r) {
    const double r2 = r * r;
    return a1 * r2 + a2 * r2 * r2 + a3 * r2 * r2 * r2;
  };
  double hi = 1.0;
  while (psi(hi) < 0.5) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double tail_estimate(const LaurentSeries& s) {
  double last = 0.0;
  const int n = static_cast<int>(s.a.size());
  for (int k = std::max(0, n - 4); k < n; ++k) last = std::max(last, std::abs(s.a[k]));
  return last;  // geometric tail with ratio <= 1/2 at the evaluation radius
}

void require_genus1(const SpectralCurve& curve) {
  if (curve.genus() != 1) throw InputError("series expansion requires a genus-1 curve");
}

void require_order(int order) {
  if (order > kMaxOrder) throw OrderTooLarge("series order capped at 40");
  if (order < 0) throw InputError("series order must be non-negative");
}

}  // namespace

void LaurentSeries::trim() {
  std::size_t lead = 0;
  while (lead < a.size() && std::abs(a[lead]) == 0.0) ++lead;
  if (lead > 0) {
    a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(lead));
    lo += static_cast<int>(lead);
  }
  while (!a.empty() && std::abs(a.back()) == 0.0) a.pop_back();
  if (a.empty()) lo = 0;
}

LaurentSeries mul(const LaurentSeries& x, const LaurentSeries& y, int kmax) {
  LaurentSeries out;
  if (x.a.empty() || y.a.empty()) return out;
  out.lo = x.lo + y.lo;
  const int span = kmax - out.lo + 1;
  if (span <= 0) return out;
  out.a.assign(static_cast<std::size_t>(span), cx(0.0));
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    if (std::abs(x.a[i]) == 0.0) continue;
    for (std::size_t j = 0; j < y.a.size(); ++j) {
      const int k = static_cast<int>(i + j);
      if (k >= span) break;
      out.a[static_cast<std::size_t>(k)] += x.a[i] * y.a[j];
    }
  }
  return out;
}

LaurentSeries add(const LaurentSeries& x, const LaurentSeries& y) {
  LaurentSeries out;
  if (x.a.empty()) return y;
  if (y.a.empty()) return x;
  out.lo = std::min(x.lo, y.lo);
  const int hi = std::max(x.hi(), y.hi());
  out.a.assign(static_cast<std::size_t>(hi - out.lo + 1), cx(0.0));
  for (int j = out.lo; j <= hi; ++j)
    out.a[static_cast<std::size_t>(j - out.lo)] = x.coeff(j) + y.coeff(j);
  return out;
}

LaurentSeries integrate_termwise(const LaurentSeries& s) {
  if (std::abs(s.coeff(-1)) > 1e-10)
    throw NumericError("termwise integration requires a vanishing z^{-1} dz coefficient");
  LaurentSeries out;
  out.lo = s.lo + 1;
  out.a.assign(s.a.size(), cx(0.0));
  for (int j = s.lo; j <= s.hi(); ++j) {
    if (j == -1) continue;
    out.a[static_cast<std::size_t>(j - s.lo)] = s.coeff(j) / static_cast<double>(j + 1);
  }
  return out;
}

LaurentSeries differentiate(const LaurentSeries& s) {
  LaurentSeries out;
  out.lo = s.lo - 1;
  out.a.assign(s.a.size(), cx(0.0));
  for (int j = s.lo; j <= s.hi(); ++j)
    out.a[static_cast<std::size_t>(j - s.lo)] = s.coeff(j) * static_cast<double>(j);
  return out;
}

Expansion expand_at_infinity(const SpectralCurve& curve, const OddDifferential& diff, int order) {
  require_genus1(curve);
  require_order(order);
  const int d = std::max(0, diff.degree());
  const int kmax = order + 2 * d + 2;

  LaurentSeries inv_w = binomial_of(w_argument(curve, kmax), -0.5, kmax);

  LaurentSeries nz;  // N(z^{-2})
  nz.lo = -2 * d;
  nz.a.assign(static_cast<std::size_t>(2 * d) + 1, cx(0.0));
  for (int k = 0; k <= d; ++k)
    nz.a[static_cast<std::size_t>(2 * (d - k))] = diff.numerator[static_cast<std::size_t>(k)];

  LaurentSeries prod = mul(nz, inv_w, order);
  for (cx& c : prod.a) c *= -2.0;
  prod.trim();
  return {prod, expansion_radius(curve), tail_estimate(prod)};
}

Expansion expand_polynomial_differential(const SpectralCurve& curve, const std::vector<cx>& P,
                                         int order) {
  require_genus1(curve);
  require_order(order);
  const int d = static_cast<int>(P.size()) - 1;
  LaurentSeries s;
  s.lo = -2 * d - 3;
  s.a.assign(static_cast<std::size_t>(2 * d) + 1, cx(0.0));
  for (int k = 0; k <= d; ++k)
    s.a[static_cast<std::size_t>(2 * (d - k))] = -2.0 * P[static_cast<std::size_t>(k)];
  s.trim();
  return {s, expansion_radius(curve), 0.0};
}

LaurentSeries y_series(const SpectralCurve& curve, int order) {
  require_genus1(curve);
  require_order(order);
  LaurentSeries w = binomial_of(w_argument(curve, order + 3), 0.5, order + 3);
  w.lo -= 3;  // multiply by z^{-3}
  w.trim();
  while (!w.a.empty() && w.hi() > order) w.a.pop_back();
  return w;
}

LaurentSeries quasimomentum_series(const SpectralCurve& curve, int order, double period_tol) {
  require_genus1(curve);
  require_order(order);
  const OddDifferential dq = quasimomentum(curve, period_tol);
  const Expansion dq_exp = expand_at_infinity(curve, dq, order);
  return integrate_termwise(dq_exp.series);
}

SeriesCoefficients qde_coefficients(const SpectralCurve& curve, int order, double period_tol) {
  require_genus1(curve);
  require_order(order);
  const LaurentSeries Q = quasimomentum_series(curve, order + 4, period_tol);
  LaurentSeries dE;
  dE.lo = -3;
  dE.a = {cx(-2.0)};
  const LaurentSeries qde = mul(Q, dE, order);

  SeriesCoefficients out;
  out.order = order;
  for (int k = 0; k <= 3; ++k) out.T[k] = qde.coeff(-k - 1);
  for (int j = 1; j - 1 <= qde.hi(); ++j) out.H[j] = qde.coeff(j - 1);
  out.H_m1 = Q.coeff(1);
  out.H_p1 = Q.coeff(3);
  out.H_p3 = Q.coeff(5);
  return out;
}

std::array<cx, 3> kdv_hamiltonians(const SpectralCurve& curve, int order, double period_tol) {
  const LaurentSeries Q = quasimomentum_series(curve, std::max(order, 8), period_tol);
  return {Q.coeff(1), Q.coeff(3), Q.coeff(5)};
}

cx kdv_hamiltonian(const SpectralCurve& curve, int j, int order, double period_tol) {
  if (j < -1 || j % 2 == 0) throw InputError("KdV Hamiltonian index must be odd and >= -1");
  if (j + 2 > order - 2)
    throw OrderTooLarge("series order too small for requested Hamiltonian index");
  const LaurentSeries Q = quasimomentum_series(curve, order, period_tol);
  return Q.coeff(j + 2);
}

}  // namespace rncurves
