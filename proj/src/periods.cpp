#include "rncurves/periods.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

namespace rncurves {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kNodeCap = 1 << 14;

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Chebyshev initial guess.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = -p1 / pp;
      z += dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + b);
    const double gn = std::sqrt(a * b);
    if (std::abs(a - b) <= 2e-16 * std::abs(an)) break;
    a = an;
    b = gn;
  }
  return 0.5 * (a + b);
}

namespace {

// Smooth integrand samples over [0, 1]; converges by node doubling, with a
// tanh-sinh pass as fallback when Gauss-Legendre stalls.
cx adaptive_unit_integral(const std::function<cx(double)>& f, double tol, int* nodes_out,
                          double* err_out) {
  cx prev;
  bool have_prev = false;
  for (int n = 16; n <= kNodeCap; n *= 2) {
    const auto& [x, w] = gauss_legendre(n);
    cx acc = 0.0;
    for (int i = 0; i < n; ++i) acc += w[i] * f(0.5 * (x[i] + 1.0));
    acc *= 0.5;
    if (have_prev) {
      const double err = std::abs(acc - prev);
      if (err <= tol * std::max(1.0, std::abs(acc))) {
        if (nodes_out) *nodes_out = n;
        if (err_out) *err_out = err;
        return acc;
      }
    }
    prev = acc;
    have_prev = true;
  }
  // Tanh-sinh fallback on the same unit interval.
  cx ts_prev;
  bool ts_have = false;
  for (int level = 6; level <= 12; ++level) {
    const int half = 1 << level;
    const double h = 4.0 / half;
    cx acc = 0.0;
    for (int k = -half; k <= half; ++k) {
      const double t = k * h;
      const double s = std::sinh(t) * (kPi / 2.0);
      const double u = 0.5 * (std::tanh(s) + 1.0);
      const double du = 0.25 * kPi * std::cosh(t) / (std::cosh(s) * std::cosh(s));
      if (u <= 0.0 || u >= 1.0 || du < 1e-300) continue;
      acc += f(u) * (du * h);
    }
    if (ts_have) {
      const double err = std::abs(acc - ts_prev);
      if (err <= tol * std::max(1.0, std::abs(acc))) {
        if (nodes_out) *nodes_out = 2 * half + 1;
        if (err_out) *err_out = err;
        return acc;
      }
    }
    ts_prev = acc;
    ts_have = true;
  }
  throw NoConvergence("cycle quadrature did not reach tolerance at node cap");
}

void check_segment_clearance(const SpectralCurve& curve, cx a, cx b, cx skip1, cx skip2) {
  const double dmin = 1e-6 * curve.scale();
  for (const cx& r : curve.roots()) {
    if (std::abs(r - skip1) < 1e-14 * curve.scale()) continue;
    if (std::abs(r - skip2) < 1e-14 * curve.scale()) continue;
    if (segment_distance(a, b, r) < dmin)
      throw PathTooCloseToBranchPoint("integration segment within 1e-6 * scale of a branch point");
  }
}

// A-period: the segment is the cut itself, so Y on the chosen side is
// sigma * (i rho sin theta) * Rest(E), with Rest the product of the other cut
// factors. The sin theta cancels against dE/dtheta and the integrand is smooth.
cx a_period(const SpectralCurve& curve, const OddDifferential& diff, const Cycle& cycle, double tol,
            int* nodes, double* err) {
  const cx a = cycle.from, b = cycle.to;
  const cx mid = 0.5 * (a + b), rho = 0.5 * (a - b);
  check_segment_clearance(curve, a, b, a, b);

  // Side of travel: left normal of a -> b.
  cx nu = (b - a) * cx(0.0, 1.0);
  nu /= std::abs(nu);
  const cx probe = mid + nu * (1e-7 * std::abs(rho));
  // Side limit of this cut's factor, divided by i*rho*sin(pi/2) = i*rho.
  cx fside = 1.0;
  {
    const cx g = (probe - mid) / rho;
    fside = rho * std::sqrt(g - 1.0) * std::sqrt(g + 1.0);
  }
  const cx sigma_raw = fside / (cx(0.0, 1.0) * rho);
  const double sigma = sigma_raw.real() > 0.0 ? 1.0 : -1.0;

  auto f = [&](double s) {
    const double theta = kPi * s;
    const cx E = mid + rho * std::cos(theta);
    const cx rest = curve.y_ref_excluding(cycle.cut, E);
    return -diff.eval(E) / (sigma * cx(0.0, 1.0) * rest) * kPi;
  };
  return 2.0 * adaptive_unit_integral(f, tol, nodes, err);
}

// Single leg between two branch points, off the cuts: Y from the reference
// sheet directly; cosine substitution keeps the integrand smooth.
cx b_leg_cosine(const SpectralCurve& curve, const OddDifferential& diff, cx a, cx b, double tol,
                int* nodes, double* err) {
  const cx mid = 0.5 * (a + b), rho = 0.5 * (a - b);
  check_segment_clearance(curve, a, b, a, b);
  auto f = [&](double s) {
    const double theta = kPi * s;
    const cx E = mid + rho * std::cos(theta);
    const cx dE = -rho * std::sin(theta) * kPi;
    return diff.eval(E) / curve.y_ref(E) * dE;
  };
  return adaptive_unit_integral(f, tol, nodes, err);
}

// Polyline legs for detoured B-cycles. End legs absorb the square-root
// vanishing of Y at the branch point with the substitution E = p + (w-p) s^2.
cx b_polyline(const SpectralCurve& curve, const OddDifferential& diff,
              const std::vector<cx>& pts, double tol, int* nodes, double* err) {
  cx total = 0.0;
  int max_nodes = 0;
  double max_err = 0.0;
  const std::size_t L = pts.size() - 1;
  for (std::size_t leg = 0; leg < L; ++leg) {
    const cx p = pts[leg], q = pts[leg + 1];
    int n = 0;
    double e = 0.0;
    cx val;
    if (leg == 0) {
      check_segment_clearance(curve, p, q, p, p);
      auto f = [&](double s) {
        const cx E = p + (q - p) * (s * s);
        return diff.eval(E) / curve.y_ref(E) * (2.0 * s * (q - p));
      };
      val = adaptive_unit_integral(f, tol, &n, &e);
    } else if (leg == L - 1) {
      check_segment_clearance(curve, p, q, q, q);
      // E = q + (p-q) s^2 runs q -> p as s goes 0 -> 1; the sign flip below
      // restores the p -> q direction.
      auto f = [&](double s) {
        const cx E = q + (p - q) * (s * s);
        return diff.eval(E) / curve.y_ref(E) * (-2.0 * s * (p - q));
      };
      val = adaptive_unit_integral(f, tol, &n, &e);
    } else {
      check_segment_clearance(curve, p, q, p, q);
      auto f = [&](double s) {
        const cx E = p + (q - p) * s;
        return diff.eval(E) / curve.y_ref(E) * (q - p);
      };
      val = adaptive_unit_integral(f, tol, &n, &e);
    }
    total += val;
    max_nodes = std::max(max_nodes, n);
    max_err = std::max(max_err, e);
  }
  if (nodes) *nodes = max_nodes;
  if (err) *err = max_err;
  return total;
}

}  // namespace

CycleIntegral integrate_cycle_full(const SpectralCurve& curve, const OddDifferential& diff,
                                   const Cycle& cycle, double tol) {
  int nodes = 0;
  double err = 0.0;
  cx value;
  if (cycle.kind == CycleKind::A) {
    value = a_period(curve, diff, cycle, tol, &nodes, &err);
  } else if (cycle.via.empty()) {
    value = 2.0 * b_leg_cosine(curve, diff, cycle.from, cycle.to, tol, &nodes, &err);
  } else {
    std::vector<cx> pts;
    pts.push_back(cycle.from);
    pts.insert(pts.end(), cycle.via.begin(), cycle.via.end());
    pts.push_back(cycle.to);
    value = 2.0 * b_polyline(curve, diff, pts, tol, &nodes, &err);
  }
  return {value, nodes, 2.0 * err};
}

cx integrate_cycle(const SpectralCurve& curve, const OddDifferential& diff, const Cycle& cycle,
                   double tol) {
  return integrate_cycle_full(curve, diff, cycle, tol).value;
}

PeriodVector period_vector(const SpectralCurve& curve, const OddDifferential& diff, double tol) {
  PeriodVector pv;
  for (const Cycle& c : curve.canonical_homology_basis()) {
    const CycleIntegral ci = integrate_cycle_full(curve, diff, c, tol);
    pv.values.push_back(ci.value);
    pv.nodes.push_back(ci.nodes);
    pv.est_error = std::max(pv.est_error, ci.est_error);
  }
  return pv;
}

HalfPeriods agm_complete_elliptic(const SpectralCurve& curve) {
  if (curve.genus() != 1) throw NotRealBranchPoints("AGM oracle requires a genus-1 curve");
  if (curve.real_root_count() != 3)
    throw NotRealBranchPoints("AGM oracle requires three real branch points");
  std::vector<double> r;
  for (const cx& root : curve.roots()) r.push_back(root.real());
  std::sort(r.begin(), r.end());
  const double full_real = kPi / agm(std::sqrt(r[2] - r[0]), std::sqrt(r[2] - r[1]));
  const double full_imag = kPi / agm(std::sqrt(r[2] - r[0]), std::sqrt(r[1] - r[0]));
  return {0.5 * full_real, 0.5 * full_imag};
}

}  // namespace rncurves
