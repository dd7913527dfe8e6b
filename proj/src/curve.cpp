#include "rncurves/curve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace rncurves {

namespace {

constexpr double kPi = 3.14159265358979323846;

cx poly_eval(const std::vector<cx>& monic_tail, cx E) {
  // monic_tail = s1..s_n for E^n + s1 E^{n-1} + ... + s_n
  cx v = 1.0;
  for (const cx& s : monic_tail) v = v * E + s;
  return v;
}

cx poly_eval_prime(const std::vector<cx>& monic_tail, cx E) {
  const int n = static_cast<int>(monic_tail.size());
  cx v = static_cast<double>(n);
  for (int k = 0; k < n - 1; ++k) v = v * E + static_cast<double>(n - 1 - k) * monic_tail[k];
  return v;
}

// One Newton step per root against the monic polynomial.
void newton_polish(const std::vector<cx>& monic_tail, std::vector<cx>& roots) {
  for (cx& r : roots) {
    const cx d = poly_eval_prime(monic_tail, r);
    if (std::abs(d) > 0.0) r -= poly_eval(monic_tail, r) / d;
  }
}

std::vector<cx> solve_cubic(cx s1, cx s2, cx s3) {
  // Depressed form t^3 + p t + q with E = t - s1/3 (Cardano).
  const cx shift = s1 / 3.0;
  const cx p = s2 - s1 * s1 / 3.0;
  const cx q = 2.0 * s1 * s1 * s1 / 27.0 - s1 * s2 / 3.0 + s3;
  const cx disc = q * q / 4.0 + p * p * p / 27.0;
  cx u = std::pow(-q / 2.0 + std::sqrt(disc), 1.0 / 3.0);
  if (std::abs(u) < 1e-300) {
    u = std::pow(-q, 1.0 / 3.0);  // p ~ 0 branch
    if (std::abs(u) < 1e-300) return {-shift, -shift, -shift};
  }
  const cx omega(-0.5, std::sqrt(3.0) / 2.0);
  std::vector<cx> roots(3);
  cx uk = u;
  for (int k = 0; k < 3; ++k) {
    roots[k] = uk - p / (3.0 * uk) - shift;
    uk *= omega;
  }
  return roots;
}

std::vector<cx> solve_companion(const std::vector<cx>& monic_tail) {
  const int n = static_cast<int>(monic_tail.size());
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -monic_tail[n - 1 - i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  std::vector<cx> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

double cross2(cx a, cx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Distance between segments [a,b] and [c,d].
double segment_segment_distance(cx a, cx b, cx c, cx d) {
  auto intersect = [](cx p, cx q, cx r, cx s) {
    const cx u = q - p, v = s - r;
    const double den = cross2(u, v);
    if (std::abs(den) < 1e-300) return false;
    const double t = cross2(r - p, v) / den;
    const double w = cross2(r - p, u) / den;
    return t > 0.0 && t < 1.0 && w > 0.0 && w < 1.0;
  };
  if (intersect(a, b, c, d)) return 0.0;
  return std::min(std::min(segment_distance(a, b, c), segment_distance(a, b, d)),
                  std::min(segment_distance(c, d, a), segment_distance(c, d, b)));
}

}  // namespace

double segment_distance(cx a, cx b, cx p) {
  const cx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

cx SpectralCurve::monic(cx E) const { return poly_eval(coeffs_, E); }

cx SpectralCurve::monic_prime(cx E) const { return poly_eval_prime(coeffs_, E); }

cx SpectralCurve::discriminant() const {
  cx d = 1.0;
  for (std::size_t i = 0; i < roots_.size(); ++i)
    for (std::size_t j = i + 1; j < roots_.size(); ++j) {
      const cx diff = roots_[i] - roots_[j];
      d *= diff * diff;
    }
  return d;
}

SpectralCurve SpectralCurve::from_cubic(cx s1, cx s2, cx s3) {
  return from_coeffs({s1, s2, s3});
}

SpectralCurve SpectralCurve::from_coeffs(const std::vector<cx>& coeffs) {
  if (coeffs.size() != 3 && coeffs.size() != 5)
    throw InputError("coefficient list must have length 3 (genus 1) or 5 (genus 2)");
  std::vector<cx> roots =
      coeffs.size() == 3 ? solve_cubic(coeffs[0], coeffs[1], coeffs[2]) : solve_companion(coeffs);
  newton_polish(coeffs, roots);
  return build(coeffs, std::move(roots));
}

SpectralCurve SpectralCurve::from_roots(const std::vector<cx>& roots) {
  if (roots.size() != 3 && roots.size() != 5)
    throw InputError("root list must have length 3 (genus 1) or 5 (genus 2)");
  const int n = static_cast<int>(roots.size());
  std::vector<cx> coeffs(n, cx(0.0));
  std::vector<cx> work{1.0};  // expanding product, descending powers
  for (const cx& r : roots) {
    std::vector<cx> next(work.size() + 1, cx(0.0));
    for (std::size_t k = 0; k < work.size(); ++k) {
      next[k] += work[k];
      next[k + 1] -= work[k] * r;
    }
    work = std::move(next);
  }
  for (int k = 0; k < n; ++k) coeffs[k] = work[k + 1];
  return build(coeffs, roots);
}

SpectralCurve SpectralCurve::build(std::vector<cx> coeffs, std::vector<cx> roots) {
  SpectralCurve c;
  c.genus_ = static_cast<int>(coeffs.size()) / 2;
  c.coeffs_ = std::move(coeffs);
  c.roots_ = std::move(roots);

  double maxabs = 0.0;
  for (const cx& r : c.roots_) maxabs = std::max(maxabs, std::abs(r));
  c.scale_ = std::max(1.0, maxabs);

  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.roots_.size(); ++i)
    for (std::size_t j = i + 1; j < c.roots_.size(); ++j)
      min_sep = std::min(min_sep, std::abs(c.roots_[i] - c.roots_[j]));
  if (!(min_sep > 1e-8 * c.scale_))
    throw DegenerateCurve("root separation " + std::to_string(min_sep) + " below 1e-8 * scale");

  const double disc_scale = std::pow(c.scale_, static_cast<double>(c.roots_.size() * (c.roots_.size() - 1)));
  if (std::abs(c.discriminant()) < 1e-10 * disc_scale)
    throw DegenerateCurve("discriminant magnitude below 1e-10 relative to scale");

  // Validate the factorization against the coefficients.
  const double deg = static_cast<double>(c.roots_.size());
  const double res_tol = 1e-10 * std::pow(c.scale_, deg) * 100.0;
  for (const cx& r : c.roots_)
    if (std::abs(c.monic(r)) > res_tol)
      throw NumericError("root residual " + std::to_string(std::abs(c.monic(r))) +
                         " exceeds tolerance after polish");

  const double rtol = 1e-9 * c.scale_;
  c.real_root_count_ = 0;
  for (const cx& r : c.roots_)
    if (std::abs(r.imag()) < rtol) ++c.real_root_count_;
  c.conj_symmetric_ = true;
  for (const cx& r : c.roots_) {
    bool matched = false;
    for (const cx& s : c.roots_)
      if (std::abs(std::conj(r) - s) < 1e-8 * c.scale_) matched = true;
    if (!matched) c.conj_symmetric_ = false;
  }

  c.make_cuts();
  c.fix_reference_sheet();
  return c;
}

void SpectralCurve::make_cuts() {
  const int n = static_cast<int>(roots_.size());
  const double rtol = 1e-9 * scale_;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::pair<int, int>> pairs;
  int unpaired = -1;

  if (real_root_count_ == n) {
    // All real: pair consecutive roots from the top, leave the lowest free.
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return roots_[a].real() < roots_[b].real(); });
    for (int k = n - 1; k >= 1; k -= 2) pairs.emplace_back(order[k - 1], order[k]);
    unpaired = order[0];
  } else if (conj_symmetric_) {
    // Pair conjugates, then remaining reals from the top; lowest real is free.
    std::vector<bool> used(n, false);
    std::vector<int> reals;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (std::abs(roots_[i].imag()) < rtol) {
        reals.push_back(i);
        used[i] = true;
        continue;
      }
      for (int j = 0; j < n; ++j) {
        if (j == i || used[j]) continue;
        if (std::abs(std::conj(roots_[i]) - roots_[j]) < 1e-8 * scale_) {
          int lo = roots_[i].imag() < roots_[j].imag() ? i : j;
          int hi = lo == i ? j : i;
          pairs.emplace_back(lo, hi);
          used[i] = used[j] = true;
          break;
        }
      }
    }
    std::sort(reals.begin(), reals.end(),
              [&](int a, int b) { return roots_[a].real() < roots_[b].real(); });
    for (int k = static_cast<int>(reals.size()) - 1; k >= 1; k -= 2)
      pairs.emplace_back(reals[k - 1], reals[k]);
    unpaired = reals.front();
  } else {
    // General complex roots: try every pairing, keep the shortest-cut valid one.
    double min_sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        min_sep = std::min(min_sep, std::abs(roots_[i] - roots_[j]));
    const double clearance = 0.05 * min_sep;
    const cx centroid = std::accumulate(roots_.begin(), roots_.end(), cx(0.0)) / static_cast<double>(n);

    auto pairings_for = [&](int skip) {
      std::vector<int> rest;
      for (int i = 0; i < n; ++i)
        if (i != skip) rest.push_back(i);
      std::vector<std::vector<std::pair<int, int>>> out;
      if (rest.size() == 2) {
        out.push_back({{rest[0], rest[1]}});
      } else {  // 4 roots, 3 perfect matchings
        out.push_back({{rest[0], rest[1]}, {rest[2], rest[3]}});
        out.push_back({{rest[0], rest[2]}, {rest[1], rest[3]}});
        out.push_back({{rest[0], rest[3]}, {rest[1], rest[2]}});
      }
      return out;
    };

    double best_score = std::numeric_limits<double>::infinity();
    for (int skip = 0; skip < n; ++skip) {
      cx dir = roots_[skip] - centroid;
      if (std::abs(dir) < 1e-12 * scale_) dir = cx(-1.0, 0.0);
      dir /= std::abs(dir);
      const cx far = roots_[skip] + dir * (100.0 * scale_);
      for (const auto& cand : pairings_for(skip)) {
        double score = 0.0;
        bool ok = true;
        for (const auto& [a, b] : cand) score += std::abs(roots_[a] - roots_[b]);
        for (std::size_t i = 0; i < cand.size() && ok; ++i) {
          const cx a = roots_[cand[i].first], b = roots_[cand[i].second];
          if (segment_segment_distance(a, b, roots_[skip], far) < clearance) ok = false;
          for (std::size_t j = i + 1; j < cand.size() && ok; ++j)
            if (segment_segment_distance(a, b, roots_[cand[j].first], roots_[cand[j].second]) <
                clearance)
              ok = false;
          for (int r = 0; r < n && ok; ++r) {
            if (r == cand[i].first || r == cand[i].second) continue;
            if (segment_distance(a, b, roots_[r]) < clearance) ok = false;
          }
        }
        if (ok && score < best_score) {
          best_score = score;
          pairs = cand;
          unpaired = skip;
        }
      }
    }
    if (unpaired < 0)
      throw DegenerateCurve("no valid non-crossing cut system found for root configuration");
  }

  cuts_.clear();
  for (const auto& [a, b] : pairs) {
    Cut cut;
    cut.finite = true;
    cut.root_a = a;
    cut.root_b = b;
    cuts_.push_back(cut);
  }
  // Order finite cuts by the position of their midpoint for a stable indexing.
  std::sort(cuts_.begin(), cuts_.end(), [&](const Cut& x, const Cut& y) {
    const cx mx = 0.5 * (roots_[x.root_a] + roots_[x.root_b]);
    const cx my = 0.5 * (roots_[y.root_a] + roots_[y.root_b]);
    if (mx.real() != my.real()) return mx.real() < my.real();
    return mx.imag() < my.imag();
  });

  const cx centroid = std::accumulate(roots_.begin(), roots_.end(), cx(0.0)) / static_cast<double>(n);
  cx dir = roots_[unpaired] - centroid;
  if (std::abs(dir) < 1e-12 * scale_) dir = cx(-1.0, 0.0);
  dir /= std::abs(dir);
  // Rotate the ray away from any finite cut it would clip.
  for (int attempt = 0; attempt < 24; ++attempt) {
    const cx far = roots_[unpaired] + dir * (1000.0 * scale_);
    bool ok = true;
    for (const Cut& cut : cuts_)
      if (segment_segment_distance(roots_[cut.root_a], roots_[cut.root_b], roots_[unpaired], far) <
          1e-3 * scale_)
        ok = false;
    if (ok) break;
    dir *= std::polar(1.0, kPi / 12.0);
  }

  Cut ray;
  ray.finite = false;
  ray.root_a = unpaired;
  ray.ray_dir = dir;
  cuts_.push_back(ray);
  unpaired_ = unpaired;
}

cx SpectralCurve::cut_factor(const Cut& c, cx E) const {
  if (c.finite) {
    const cx a = roots_[c.root_a], b = roots_[c.root_b];
    const cx mid = 0.5 * (a + b), rho = 0.5 * (a - b);
    const cx g = (E - mid) / rho;
    // Analytic off the segment [a,b]; ~ (E - mid) for large E.
    return rho * std::sqrt(g - 1.0) * std::sqrt(g + 1.0);
  }
  const cx r = roots_[c.root_a];
  // Analytic off the ray {r + t*dir, t >= 0}; squares to (E - r).
  return std::sqrt(c.ray_dir) * cx(0.0, 1.0) * std::sqrt(-(E - r) / c.ray_dir);
}

cx SpectralCurve::y_ref(cx E) const {
  cx prod = sheet_sign_;
  for (const Cut& c : cuts_) prod *= cut_factor(c, E);
  return prod;
}

cx SpectralCurve::y_ref_excluding(int skip_cut, cx E) const {
  cx prod = sheet_sign_;
  for (int i = 0; i < static_cast<int>(cuts_.size()); ++i)
    if (i != skip_cut) prod *= cut_factor(cuts_[i], E);
  return prod;
}

void SpectralCurve::fix_reference_sheet() {
  sheet_sign_ = 1.0;
  double X = 50.0 * scale_;
  for (int attempt = 0; attempt < 8; ++attempt) {
    cx anchor(X, 0.0);
    // Keep the anchor off the ray cut.
    for (int lift = 0; lift < 20; ++lift) {
      const Cut& ray = cuts_.back();
      const cx far = roots_[ray.root_a] + ray.ray_dir * (1e4 * scale_ + X);
      if (segment_segment_distance(roots_[ray.root_a], far, anchor, anchor) > 0.05 * scale_) break;
      anchor += cx(0.0, 0.2 * scale_);
    }
    cx prod = 1.0;
    for (const Cut& c : cuts_) prod *= cut_factor(c, anchor);
    const cx target = std::pow(anchor, static_cast<double>(genus_)) * std::sqrt(anchor);
    const cx ratio = prod / target;
    if (std::abs(std::abs(ratio) - 1.0) < 0.2 && std::abs(ratio.imag()) < 0.5) {
      sheet_sign_ = ratio.real() > 0.0 ? 1.0 : -1.0;
      return;
    }
    X *= 4.0;
  }
  throw NumericError("failed to fix branch-reference sheet sign");
}

std::vector<Cycle> SpectralCurve::canonical_homology_basis() const {
  std::vector<Cycle> basis;
  const int g = genus_;
  const cx u = roots_[unpaired_];
  double min_root_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < roots_.size(); ++i)
    for (std::size_t j = i + 1; j < roots_.size(); ++j)
      min_root_sep = std::min(min_root_sep, std::abs(roots_[i] - roots_[j]));
  const double min_cut_sep = std::min(1e-3 * scale_, 0.02 * min_root_sep);

  for (int i = 0; i < g; ++i) {
    const Cut& cut = cuts_[i];
    cx a = roots_[cut.root_a], b = roots_[cut.root_b];
    // Deterministic endpoint order: by real part, then imaginary part.
    if (a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag())) std::swap(a, b);
    Cycle A;
    A.kind = CycleKind::A;
    A.index = i;
    A.cut = i;
    A.from = a;
    A.to = b;
    basis.push_back(A);
  }
  for (int i = 0; i < g; ++i) {
    const Cut& cut = cuts_[i];
    const cx a = roots_[cut.root_a], b = roots_[cut.root_b];
    // Start from the cut endpoint nearest the unpaired root; break ties upward.
    cx start = a;
    const double da = std::abs(a - u), db = std::abs(b - u);
    if (db < da - 1e-14 * scale_) start = b;
    else if (std::abs(da - db) <= 1e-14 * scale_) start = a.imag() >= b.imag() ? a : b;

    Cycle B;
    B.kind = CycleKind::B;
    B.index = i;
    B.cut = i;
    B.from = start;
    B.to = u;

    // Detour when the straight segment clips a cut it does not end on. Legs
    // touching their own endpoints' cuts are fine: contact at the shared
    // branch point only, checked by sampling the open leg.
    auto clips = [&](const std::vector<cx>& pts) {
      for (std::size_t leg = 0; leg + 1 < pts.size(); ++leg)
        for (int k = 0; k < static_cast<int>(cuts_.size()); ++k) {
          const Cut& other = cuts_[k];
          const cx oa = roots_[other.root_a];
          const cx ob = other.finite ? roots_[other.root_b] : oa + other.ray_dir * (1000.0 * scale_);
          for (int s = 1; s < 16; ++s) {
            const double t0 = (s - 0.45) / 16.0, t1 = (s + 0.45) / 16.0;
            const cx pa = pts[leg] + t0 * (pts[leg + 1] - pts[leg]);
            const cx pb = pts[leg] + t1 * (pts[leg + 1] - pts[leg]);
            if (segment_segment_distance(pa, pb, oa, ob) < min_cut_sep) return true;
          }
        }
      return false;
    };

    if (clips({B.from, B.to})) {
      const cx mid = 0.5 * (B.from + B.to);
      cx nrm = (B.to - B.from) * cx(0.0, 1.0);
      nrm /= std::abs(nrm);
      bool placed = false;
      for (double h : {0.5, 1.0, 2.0, 4.0}) {
        for (double sgn : {-1.0, 1.0}) {
          const cx off = nrm * (sgn * h * scale_);
          if (!clips({B.from, mid + off, B.to})) {
            B.via = {mid + off};
            placed = true;
            break;
          }
          if (!clips({B.from, B.from + off, B.to + off, B.to})) {
            B.via = {B.from + off, B.to + off};
            placed = true;
            break;
          }
        }
        if (placed) break;
      }
      if (!placed)
        throw NumericError("could not route B-cycle " + std::to_string(i) + " around cuts");
    }
    basis.push_back(B);
  }
  return basis;
}

std::vector<cx> y_along_path(const SpectralCurve& curve, std::span<const cx> path,
                             Sheet start_sheet) {
  if (path.empty()) return {};
  const double dmin = 1e-6 * curve.scale();
  for (const cx& p : path)
    for (const cx& r : curve.roots())
      if (std::abs(p - r) < dmin)
        throw PathTooCloseToBranchPoint("path node within 1e-6 * scale of a branch point");

  std::vector<cx> out;
  out.reserve(path.size());
  cx y = curve.y_ref(path.front());
  if (start_sheet == Sheet::other) y = -y;
  out.push_back(y);

  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    // Continue the branch along the leg, bisecting until steps are tame.
    struct Seg { cx a, b; int depth; };
    std::vector<Seg> stack{{path[k], path[k + 1], 0}};
    cx cur = out.back();
    cx cur_at = path[k];
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      for (const cx& r : curve.roots())
        if (segment_distance(s.a, s.b, r) < dmin)
          throw PathTooCloseToBranchPoint("path leg within 1e-6 * scale of a branch point");
      const cx val = std::sqrt(curve.monic(s.b));
      const cx pick = std::abs(val - cur) <= std::abs(-val - cur) ? val : -val;
      const double jump = std::abs(pick - cur);
      const double ref = std::max({std::abs(pick), std::abs(cur), 1e-12});
      if (jump <= 0.45 * ref || std::abs(s.b - s.a) < 1e-14 * curve.scale()) {
        cur = pick;
        cur_at = s.b;
      } else {
        if (s.depth > 48)
          throw PathTooCloseToBranchPoint("branch continuation failed to stabilize");
        const cx mid = 0.5 * (s.a + s.b);
        stack.push_back({mid, s.b, s.depth + 1});
        stack.push_back({s.a, mid, s.depth + 1});
      }
    }
    (void)cur_at;
    out.push_back(cur);
  }
  return out;
}

}  // namespace rncurves
