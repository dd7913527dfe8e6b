#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rncurves/curve.hpp"

using namespace rncurves;

namespace {

bool root_set_matches(const std::vector<cx>& roots, const std::vector<cx>& expected, double tol) {
  if (roots.size() != expected.size()) return false;
  std::vector<bool> used(expected.size(), false);
  for (const cx& r : roots) {
    bool found = false;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (!used[i] && std::abs(r - expected[i]) < tol) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("from_cubic finds the roots of E^3 - E") {
  const SpectralCurve c = SpectralCurve::from_cubic(0.0, -1.0, 0.0);
  CHECK(c.genus() == 1);
  CHECK(root_set_matches(c.roots(), {cx(-1.0), cx(0.0), cx(1.0)}, 1e-12));
}

TEST_CASE("from_cubic rejects repeated roots") {
  CHECK_THROWS_AS(SpectralCurve::from_cubic(0.0, 0.0, 0.0), DegenerateCurve);
}

TEST_CASE("from_cubic roots satisfy the polynomial residual bound") {
  const SpectralCurve c = SpectralCurve::from_cubic(0.0, -1.0, -0.5);
  int reals = 0;
  for (const cx& r : c.roots()) {
    CHECK(std::abs(r * r * r - r - 0.5) < 1e-12);
    if (std::abs(r.imag()) < 1e-12) ++reals;
  }
  CHECK(reals == 1);
  CHECK(c.conj_symmetric());
}

TEST_CASE("from_roots reconstructs coefficients") {
  const SpectralCurve c = SpectralCurve::from_roots({cx(-1.0), cx(0.0), cx(1.0)});
  CHECK(std::abs(c.coeffs()[0]) < 1e-14);
  CHECK(std::abs(c.coeffs()[1] + 1.0) < 1e-14);
  CHECK(std::abs(c.coeffs()[2]) < 1e-14);
}

TEST_CASE("from_roots rejects coincident roots") {
  CHECK_THROWS_AS(SpectralCurve::from_roots({cx(1.0), cx(1.0), cx(2.0)}), DegenerateCurve);
}

TEST_CASE("conjugate pair with balancing real root gives a depressed cubic") {
  const double a = 0.7, b = 1.3;
  const SpectralCurve c = SpectralCurve::from_roots({cx(-2.0 * a), cx(a, b), cx(a, -b)});
  CHECK(std::abs(c.coeffs()[0]) < 1e-12);
}

TEST_CASE("root extraction round trip is the identity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<cx> roots{cx(u(rng), u(rng)), cx(u(rng), u(rng)), cx(u(rng), u(rng))};
    double sep = 1e300;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) sep = std::min(sep, std::abs(roots[i] - roots[j]));
    if (sep < 0.2) continue;
    const SpectralCurve c1 = SpectralCurve::from_roots(roots);
    const SpectralCurve c2 = SpectralCurve::from_coeffs(c1.coeffs());
    CHECK(root_set_matches(c2.roots(), roots, 1e-10 * c1.scale()));
  }
}

TEST_CASE("real coefficients give a conjugation-closed root multiset") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    SpectralCurve c = [&] {
      while (true) {
        try {
          return SpectralCurve::from_cubic(u(rng), u(rng), u(rng));
        } catch (const DegenerateCurve&) {
        }
      }
    }();
    for (const cx& r : c.roots()) {
      bool paired = false;
      for (const cx& s : c.roots())
        if (std::abs(std::conj(r) - s) < 1e-10 * c.scale()) paired = true;
      CHECK(paired);
    }
  }
}

TEST_CASE("root residual invariant across random curves") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int tested = 0;
  while (tested < 30) {
    try {
      const SpectralCurve c = SpectralCurve::from_cubic(cx(u(rng), u(rng)), cx(u(rng), u(rng)),
                                                        cx(u(rng), u(rng)));
      for (const cx& r : c.roots())
        CHECK(std::abs(c.monic(r)) <= 1e-10 * std::pow(std::max(1.0, c.scale()), 3.0));
      ++tested;
    } catch (const DegenerateCurve&) {
    }
  }
}

TEST_CASE("quintic curves are supported") {
  const SpectralCurve c =
      SpectralCurve::from_roots({cx(-2.0), cx(-1.0), cx(0.0), cx(1.0), cx(2.0)});
  CHECK(c.genus() == 2);
  CHECK(c.finite_cut_count() == 2);
  for (const cx& r : c.roots()) CHECK(std::abs(c.monic(r)) < 1e-10 * std::pow(c.scale(), 5.0));
}

TEST_CASE("canonical basis layout for three real roots") {
  const SpectralCurve c = SpectralCurve::from_cubic(0.0, -1.0, 0.0);
  const auto basis = c.canonical_homology_basis();
  REQUIRE(basis.size() == 2);
  CHECK(basis[0].kind == CycleKind::A);
  // A encircles the gap [E1, E2] = [0, 1].
  CHECK(std::abs(basis[0].from - cx(0.0)) < 1e-12);
  CHECK(std::abs(basis[0].to - cx(1.0)) < 1e-12);
  // B threads the region (E0, E1) = (-1, 0).
  CHECK(basis[1].kind == CycleKind::B);
  CHECK(std::abs(basis[1].from - cx(0.0)) < 1e-12);
  CHECK(std::abs(basis[1].to - cx(-1.0)) < 1e-12);
}

TEST_CASE("canonical basis for a conjugate-symmetric curve uses the vertical cut") {
  const SpectralCurve c = SpectralCurve::from_roots({cx(1.0), cx(-0.5, 1.2), cx(-0.5, -1.2)});
  const auto basis = c.canonical_homology_basis();
  REQUIRE(basis.size() == 2);
  CHECK(std::abs(basis[0].from - cx(-0.5, -1.2)) < 1e-12);
  CHECK(std::abs(basis[0].to - cx(-0.5, 1.2)) < 1e-12);
  CHECK(std::abs(basis[1].to - cx(1.0)) < 1e-12);
}

TEST_CASE("canonical intersection structure, combinatorially") {
  // B_j crosses the cut of A_i exactly delta_ij times: it starts on its own
  // cut's branch point and stays clear of every other cut.
  for (const auto& roots : {std::vector<cx>{cx(-1.0), cx(0.0), cx(1.0)},
                            std::vector<cx>{cx(1.0), cx(-0.5, 1.2), cx(-0.5, -1.2)},
                            std::vector<cx>{cx(-2.0), cx(-1.0), cx(0.0), cx(1.0), cx(2.0)}}) {
    const SpectralCurve c = SpectralCurve::from_roots(roots);
    const int g = c.genus();
    const auto basis = c.canonical_homology_basis();
    REQUIRE(static_cast<int>(basis.size()) == 2 * g);
    for (int i = 0; i < g; ++i) {
      CHECK(basis[static_cast<std::size_t>(i)].kind == CycleKind::A);
      CHECK(basis[static_cast<std::size_t>(g + i)].kind == CycleKind::B);
      CHECK(basis[static_cast<std::size_t>(g + i)].cut == basis[static_cast<std::size_t>(i)].cut);
      // B_i's start point lies on cut i (endpoint) and its interior keeps a
      // positive distance from every other finite cut.
      const auto& B = basis[static_cast<std::size_t>(g + i)];
      const auto& cut = c.cuts()[static_cast<std::size_t>(B.cut)];
      const cx ca = c.roots()[static_cast<std::size_t>(cut.root_a)];
      const cx cb = c.roots()[static_cast<std::size_t>(cut.root_b)];
      CHECK(std::min(std::abs(B.from - ca), std::abs(B.from - cb)) < 1e-12);
      std::vector<cx> pts{B.from};
      pts.insert(pts.end(), B.via.begin(), B.via.end());
      pts.push_back(B.to);
      for (int j = 0; j < g; ++j) {
        if (j == B.cut) continue;
        const auto& other = c.cuts()[static_cast<std::size_t>(j)];
        const cx oa = c.roots()[static_cast<std::size_t>(other.root_a)];
        const cx ob = c.roots()[static_cast<std::size_t>(other.root_b)];
        for (std::size_t leg = 0; leg + 1 < pts.size(); ++leg)
          for (int s = 0; s <= 32; ++s) {
            const cx p = pts[leg] + (pts[leg + 1] - pts[leg]) * (s / 32.0);
            CHECK(segment_distance(oa, ob, p) > 1e-6 * c.scale());
          }
      }
    }
  }
}

TEST_CASE("y_along_path monodromy around one branch point flips the sign") {
  const SpectralCurve c = SpectralCurve::from_cubic(0.0, -1.0, 0.0);
  std::vector<cx> loop;
  for (int k = 0; k <= 64; ++k) {
    const double t = 2.0 * 3.14159265358979323846 * k / 64.0;
    loop.push_back(cx(1.0, 0.0) + 0.3 * cx(std::cos(t), std::sin(t)));
  }
  const auto ys = y_along_path(c, loop);
  CHECK(std::abs(ys.back() + ys.front()) < 1e-10 * std::abs(ys.front()));
}

TEST_CASE("y_along_path monodromy around two branch points is trivial") {
  const SpectralCurve c = SpectralCurve::from_cubic(0.0, -1.0, 0.0);
  std::vector<cx> loop;
  for (int k = 0; k <= 128; ++k) {
    const double t = 2.0 * 3.14159265358979323846 * k / 128.0;
    loop.push_back(cx(0.5, 0.0) + cx(0.8 * std::cos(t), 0.6 * std::sin(t)));
  }
  const auto ys = y_along_path(c, loop);
  CHECK(std::abs(ys.back() - ys.front()) < 1e-10 * std::abs(ys.front()));
}

TEST_CASE("branch_ref sheet: Y is positive at large positive E") {
  const SpectralCurve c = SpectralCurve::from_cubic(0.0, -1.0, 0.0);
  const std::vector<cx> path{cx(1e6, 0.0)};
  const auto ys = y_along_path(c, path);
  CHECK(std::abs(ys[0] - cx(1e9, 0.0)) < 1e-5 * 1e9);
}

TEST_CASE("sheet consistency along a path and its reverse") {
  const SpectralCurve c = SpectralCurve::from_cubic(cx(0.2, 0.1), cx(-1.0, 0.3), cx(0.4, -0.2));
  std::vector<cx> path{cx(2.0, 1.0), cx(1.0, 2.0), cx(-2.0, 1.5), cx(-1.0, -2.0), cx(2.0, -1.0)};
  std::vector<cx> there = y_along_path(c, path);
  std::vector<cx> back_path(path.rbegin(), path.rend());
  // Continue from the sheet reached at the end of the forward pass.
  const cx end_ref = c.y_ref(path.back());
  const Sheet sheet = std::abs(there.back() - end_ref) < std::abs(there.back() + end_ref)
                          ? Sheet::branch_ref
                          : Sheet::other;
  std::vector<cx> back = y_along_path(c, back_path, sheet);
  CHECK(std::abs(back.back() - there.front()) < 1e-10 * std::abs(there.front()));
}

TEST_CASE("path too close to a branch point is rejected") {
  const SpectralCurve c = SpectralCurve::from_cubic(0.0, -1.0, 0.0);
  const std::vector<cx> path{cx(2.0, 0.0), cx(1.0 + 1e-9, 1e-9)};
  CHECK_THROWS_AS(y_along_path(c, path), PathTooCloseToBranchPoint);
}

TEST_CASE("y_ref agrees with y_along_path on a cut-avoiding contour") {
  const SpectralCurve c = SpectralCurve::from_cubic(0.0, -1.0, -0.5);
  std::vector<cx> path;
  for (int k = 0; k <= 48; ++k) {
    const double t = 3.14159265358979323846 * k / 48.0;
    path.push_back(cx(3.0 * std::cos(t), 1.0 + 2.0 * std::sin(t)));
  }
  const auto ys = y_along_path(c, path);
  for (std::size_t i = 0; i < path.size(); ++i)
    CHECK(std::abs(ys[i] - c.y_ref(path[i])) < 1e-12 * std::max(1.0, std::abs(ys[i])));
}
