#include "rncurves/hill.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "rncurves/periods.hpp"  // gauss_legendre

namespace rncurves {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<double, 3> weierstrass_roots(double g2, double g3) {
  // Roots of 4t^3 - g2 t - g3, required real and distinct.
  const double disc = g2 * g2 * g2 - 27.0 * g3 * g3;
  if (!(disc > 0.0))
    throw ComplexBranchPoints("4t^3 - g2 t - g3 must have three distinct real roots");
  // Trigonometric solution of t^3 - (g2/4) t - (g3/4) = 0.
  const double p = -g2 / 4.0, q = -g3 / 4.0;
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  std::array<double, 3> e{};
  for (int k = 0; k < 3; ++k) e[static_cast<std::size_t>(k)] = m * std::cos(phi - 2.0 * kPi * k / 3.0);
  std::sort(e.begin(), e.end(), std::greater<double>());
  // Newton polish against 4t^3 - g2 t - g3.
  for (double& t : e)
    for (int it = 0; it < 3; ++it) {
      const double f = 4.0 * t * t * t - g2 * t - g3;
      const double df = 12.0 * t * t - g2;
      if (df != 0.0) t -= f / df;
    }
  return e;
}

// Dormand-Prince 5(4) embedded pair with PI step control.
template <int N>
using State = std::array<double, N>;

template <int N, class Rhs>
void dopri5(const Rhs& rhs, double x0, double x1, State<N>& y, double rtol, double atol) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                      b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = x1 >= x0 ? 1.0 : -1.0;
  double x = x0;
  double h = dir * std::max(1e-10, std::abs(x1 - x0) / 64.0);
  State<N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, yt{}, y5{};
  rhs(x, y, k1);
  int steps = 0;
  while (dir * (x1 - x) > 0.0) {
    if (++steps > 2000000) throw ODEFailure("step count exceeded");
    if (dir * (x + h - x1) > 0.0) h = x1 - x;
    auto stage = [&](const std::array<double, 7>& a, State<N>& out) {
      for (int i = 0; i < N; ++i)
        out[i] = y[i] + h * (a[0] * k1[i] + a[1] * k2[i] + a[2] * k3[i] + a[3] * k4[i] +
                             a[4] * k5[i] + a[5] * k6[i]);
    };
    stage({a21, 0, 0, 0, 0, 0, 0}, yt);
    rhs(x + c2 * h, yt, k2);
    stage({a31, a32, 0, 0, 0, 0, 0}, yt);
    rhs(x + c3 * h, yt, k3);
    stage({a41, a42, a43, 0, 0, 0, 0}, yt);
    rhs(x + c4 * h, yt, k4);
    stage({a51, a52, a53, a54, 0, 0, 0}, yt);
    rhs(x + c5 * h, yt, k5);
    stage({a61, a62, a63, a64, a65, 0, 0}, yt);
    rhs(x + h, yt, k6);
    for (int i = 0; i < N; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(x + h, y5, k7);
    double err = 0.0;
    for (int i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / N);
    if (err <= 1.0) {
      x += h;
      y = y5;
      k1 = k7;  // FSAL
    }
    const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x1 - x0)))
      throw ODEFailure("step size underflow");
  }
}

// Composite Gauss-Legendre over [0, T] with panel-count doubling.
double composite_gauss(const std::function<double(double)>& f, double T, double tol) {
  double prev = 0.0;
  bool have_prev = false;
  for (int panels = 4; panels <= 4096; panels *= 2) {
    const auto& [x, w] = gauss_legendre(24);
    double acc = 0.0;
    const double hp = T / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * hp;
      for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(mid + 0.5 * hp * x[i]);
    }
    acc *= 0.5 * hp;
    if (have_prev && std::abs(acc - prev) <= tol * std::max(1.0, std::abs(acc))) return acc;
    prev = acc;
    have_prev = true;
  }
  throw QuadratureFailure("composite quadrature did not converge");
}

}  // namespace

double PotentialOracle::scale() const {
  return std::max({1.0, std::abs(umin_), std::abs(umax_)});
}

PotentialOracle PotentialOracle::constant(double value, double period) {
  PotentialOracle p;
  p.constant_ = true;
  p.const_value_ = value;
  p.T_ = period;
  p.umin_ = p.umax_ = value;
  p.g2_ = 3.0 * value * value;         // u'' = 3u^2 - g2 = 0
  p.g3_ = -value * value * value;      // (u')^2 = 2u^3 - 2 g2 u - 4 g3 = 0
  return p;
}

PotentialOracle PotentialOracle::make(double g2, double g3, double x_shift) {
  PotentialOracle p;
  p.g2_ = g2;
  p.g3_ = g3;
  p.shift_ = x_shift;
  const auto e = weierstrass_roots(g2, g3);
  p.e1_ = e[0];
  p.e2_ = e[1];
  p.e3_ = e[2];
  p.umin_ = 2.0 * p.e3_;
  p.umax_ = 2.0 * p.e2_;

  // Period by singularity-removing quadrature of the first integral:
  // T = 2 int_{2e3}^{2e2} du / sqrt(2 (2e1-u)(2e2-u)(u-2e3)).
  const double mid = p.e2_ + p.e3_, r = p.e2_ - p.e3_;
  auto f = [&](double s) {
    const double theta = kPi * s;
    const double u = mid + r * std::cos(theta);
    return kPi / std::sqrt(2.0 * (2.0 * p.e1_ - u));
  };
  double prev = 0.0;
  bool have = false;
  for (int n = 16; n <= 8192; n *= 2) {
    const auto& [x, w] = gauss_legendre(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += w[i] * f(0.5 * (x[i] + 1.0));
    acc *= 0.5;
    if (have && std::abs(acc - prev) <= 1e-14 * std::abs(acc)) {
      prev = acc;
      break;
    }
    prev = acc;
    have = true;
  }
  p.T_ = 2.0 * prev;

  // Tabulate (u, u') over half a period from the maximum; u is even in x and
  // even about T/2, so this determines u everywhere.
  const int M = 8192;
  p.h_ = (p.T_ / 2.0) / M;
  p.tab_u_.resize(M + 1);
  p.tab_v_.resize(M + 1);
  State<2> y{p.umax_, 0.0};
  p.tab_u_[0] = y[0];
  p.tab_v_[0] = y[1];
  auto rhs = [&](double, const State<2>& s, State<2>& d) {
    d[0] = s[1];
    d[1] = 3.0 * s[0] * s[0] - g2;
  };
  for (int i = 1; i <= M; ++i) {
    // One fixed RK4 substep pair per table cell.
    double x = (i - 1) * p.h_;
    for (int sub = 0; sub < 2; ++sub) {
      const double hh = p.h_ / 2.0;
      State<2> k1, k2, k3, k4, t;
      rhs(x, y, k1);
      for (int j = 0; j < 2; ++j) t[j] = y[j] + 0.5 * hh * k1[j];
      rhs(x + 0.5 * hh, t, k2);
      for (int j = 0; j < 2; ++j) t[j] = y[j] + 0.5 * hh * k2[j];
      rhs(x + 0.5 * hh, t, k3);
      for (int j = 0; j < 2; ++j) t[j] = y[j] + hh * k3[j];
      rhs(x + hh, t, k4);
      for (int j = 0; j < 2; ++j) y[j] += hh / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      x += hh;
    }
    p.tab_u_[static_cast<std::size_t>(i)] = y[0];
    p.tab_v_[static_cast<std::size_t>(i)] = y[1];
  }
  return p;
}

double PotentialOracle::u(double x) const {
  if (constant_) return const_value_;
  double y = std::fmod(x + shift_, T_);
  if (y < 0.0) y += T_;
  if (y > T_ / 2.0) y = T_ - y;  // even about 0 and T/2
  const double t = y / h_;
  std::size_t i = static_cast<std::size_t>(std::min<double>(t, static_cast<double>(tab_u_.size() - 2)));
  const double s = t - static_cast<double>(i);
  // Quintic Hermite from (u, u', u'') at both cell ends; u'' = 3u^2 - g2.
  const double u0 = tab_u_[i], v0 = tab_v_[i] * h_, a0 = (3.0 * tab_u_[i] * tab_u_[i] - g2_) * h_ * h_;
  const double u1 = tab_u_[i + 1], v1 = tab_v_[i + 1] * h_,
               a1 = (3.0 * tab_u_[i + 1] * tab_u_[i + 1] - g2_) * h_ * h_;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double H0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  const double H1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double H3 = 0.5 * s3 - s4 + 0.5 * s5;
  const double H4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double H5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  return H0 * u0 + H1 * v0 + H2 * a0 + H3 * a1 + H4 * v1 + H5 * u1;
}

double PotentialOracle::du(double x) const {
  if (constant_) return 0.0;
  double y = std::fmod(x + shift_, T_);
  if (y < 0.0) y += T_;
  double sign = -1.0;  // u decreases from the maximum on (0, T/2)
  if (y > T_ / 2.0) {
    y = T_ - y;
    sign = 1.0;
  }
  const double uy = u(x);
  const double rad = 2.0 * uy * uy * uy - 2.0 * g2_ * uy - 4.0 * g3_;
  return sign * std::sqrt(std::max(0.0, rad));
}

PotentialOracle make_potential(double g2, double g3) { return PotentialOracle::make(g2, g3); }

std::array<double, 3> pn_integrals(const PotentialOracle& pot, double tol) {
  const double T = pot.period();
  const double Hm1 = composite_gauss([&](double x) { return -pot.u(x) / 2.0; }, T, tol) / T;
  const double Hp1 =
      composite_gauss([&](double x) { const double v = pot.u(x); return -v * v / 8.0; }, T, tol) / T;
  const double Hp3 = composite_gauss(
                         [&](double x) {
                           const double v = pot.u(x);
                           const double w = pot.du(x);
                           return -(w * w + 2.0 * v * v * v) / 32.0;
                         },
                         T, tol) /
                     T;
  return {Hm1, Hp1, Hp3};
}

double mean_ux_squared(const PotentialOracle& pot, double tol) {
  const double T = pot.period();
  return composite_gauss([&](double x) { const double w = pot.du(x); return w * w; }, T, tol) / T;
}

Monodromy monodromy(const PotentialOracle& pot, double E, double tol) {
  State<4> y{1.0, 0.0, 0.0, 1.0};  // columns (psi1, psi1'), (psi2, psi2')
  auto rhs = [&](double x, const State<4>& s, State<4>& d) {
    const double q = pot.u(x) - E;
    d[0] = s[1];
    d[1] = q * s[0];
    d[2] = s[3];
    d[3] = q * s[2];
  };
  dopri5<4>(rhs, 0.0, pot.period(), y, tol, tol);
  return {y[0] + y[3], y[0] * y[3] - y[1] * y[2]};
}

double discriminant(const PotentialOracle& pot, double E, double tol) {
  return monodromy(pot, E, tol).trace;
}

std::array<double, 3> band_edges(const PotentialOracle& pot) {
  const double S = std::max({1.0, std::abs(pot.umin()), std::abs(pot.umax())});
  double lo = pot.umin() - 5.0 * S;
  double hi = pot.umax() + 20.0 * S;

  for (int attempt = 0; attempt < 3; ++attempt) {
    const int samples = 400 * (attempt + 1);
    std::vector<double> Es(samples + 1), Ds(samples + 1);
    for (int i = 0; i <= samples; ++i) {
      Es[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / samples;
      Ds[static_cast<std::size_t>(i)] = discriminant(pot, Es[static_cast<std::size_t>(i)], 1e-9);
    }
    std::vector<double> roots;
    std::vector<double> slopes;
    for (double target : {2.0, -2.0}) {
      for (int i = 0; i < samples; ++i) {
        const double fa = Ds[static_cast<std::size_t>(i)] - target;
        const double fb = Ds[static_cast<std::size_t>(i + 1)] - target;
        if (fa == 0.0 || fa * fb >= 0.0) continue;
        double a = Es[static_cast<std::size_t>(i)], b = Es[static_cast<std::size_t>(i + 1)];
        double va = fa;
        for (int it = 0; it < 80; ++it) {
          const double m = 0.5 * (a + b);
          const double vm = discriminant(pot, m, 1e-11) - target;
          if (va * vm <= 0.0)
            b = m;
          else {
            a = m;
            va = vm;
          }
          if (b - a < 1e-12 * S) break;
        }
        const double root = 0.5 * (a + b);
        const double fd = 1e-6 * S;
        const double slope =
            (discriminant(pot, root + fd, 1e-11) - discriminant(pot, root - fd, 1e-11)) / (2.0 * fd);
        roots.push_back(root);
        slopes.push_back(std::abs(slope));
      }
    }
    if (!roots.empty()) {
      // Double crossings (closed gaps) have near-zero slope.
      const double smax = *std::max_element(slopes.begin(), slopes.end());
      std::vector<double> simple;
      for (std::size_t i = 0; i < roots.size(); ++i)
        if (slopes[i] > 1e-4 * smax) simple.push_back(roots[i]);
      std::sort(simple.begin(), simple.end());
      if (simple.size() == 3) return {simple[0], simple[1], simple[2]};
    }
    lo -= 2.0 * S;
    hi += 10.0 * S;
  }
  throw EdgeCountMismatch("did not find exactly three simple band edges in scan window");
}

QuasimomentumFit quasimomentum_fit(const PotentialOracle& pot) {
  // sqrt(E) (p - sqrt(E)) = H_{-1} + H_1 / E + H_3 / E^2 + ... : a polynomial
  // in 1/E. Sampling at band centers (pT near (k+1/2) pi, the best-conditioned
  // points of the arccos) over a two-decade energy range separates H_3 from
  // the higher corrections, which enter as nuisance orders.
  constexpr int kPoints = 16;
  constexpr int kOrders = 7;  // H_{-1} .. H_11; orders beyond H_3 absorb the tail
  const double T = pot.period();
  const double S = std::max({1.0, std::abs(pot.umin()), std::abs(pot.umax())});
  const double E_lo = 20.0 * S, E_hi = 2000.0 * S;

  std::vector<int> ks;
  for (int j = 0; j < kPoints; ++j) {
    const double Et = E_lo * std::pow(E_hi / E_lo, j / (kPoints - 1.0));
    int k = static_cast<int>(std::lround(T * std::sqrt(Et) / kPi - 0.5));
    if (k < 1) k = 1;
    if (!ks.empty() && k <= ks.back()) k = ks.back() + 1;
    ks.push_back(k);
  }

  Eigen::MatrixXd A(kPoints, kOrders);
  Eigen::VectorXd rhsv(kPoints);
  for (int j = 0; j < kPoints; ++j) {
    const double E = std::pow((ks[static_cast<std::size_t>(j)] + 0.5) * kPi / T, 2.0);
    const double delta = discriminant(pot, E, 1e-12);
    const double theta = std::acos(std::clamp(delta / 2.0, -1.0, 1.0));
    const double ref = std::sqrt(E) * T;
    // Unwrap: choose 2 pi k +/- theta closest to sqrt(E) T.
    double best = 0.0, bestdist = 1e300;
    const int kc = static_cast<int>(std::lround(ref / (2.0 * kPi)));
    for (int dk = -2; dk <= 2; ++dk)
      for (double sgn : {1.0, -1.0}) {
        const double cand = 2.0 * kPi * (kc + dk) + sgn * theta;
        if (std::abs(cand - ref) < bestdist) {
          bestdist = std::abs(cand - ref);
          best = cand;
        }
      }
    const double p = best / T;
    rhsv(j) = (p - std::sqrt(E)) * std::sqrt(E);
    // Scaled monomials t^n with t = E_lo / E in (0, 1].
    const double t = E_lo / E;
    double tn = 1.0;
    for (int n = 0; n < kOrders; ++n) {
      A(j, n) = tn;
      tn *= t;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e10)
    throw FitIllConditioned("quasimomentum fit design matrix is ill-conditioned");
  const Eigen::VectorXd coef = svd.solve(rhsv);
  const double resid = (A * coef - rhsv).norm();
  return {{coef(0), coef(1) / E_lo, coef(2) / (E_lo * E_lo)}, resid};
}

}  // namespace rncurves
