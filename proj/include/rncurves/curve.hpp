#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rncurves/errors.hpp"

namespace rncurves {

using cx = std::complex<double>;

// Branch cut of the hyperelliptic model Y^2 = monic(E). Finite cuts join two
// roots by a straight segment; the single unpaired root carries a ray cut
// running to infinity along `ray_dir`.
struct Cut {
  bool finite = true;
  int root_a = -1;
  int root_b = -1;  // finite cuts only
  cx ray_dir{-1.0, 0.0};
};

enum class CycleKind { A, B };

// Homology basis element. A_i is the loop around finite cut i; B_i threads
// cut i and the ray cut. Periods of odd differentials over either are twice
// the segment integral from `from` to `to` (both branch points); `via` lists
// detour waypoints when the straight segment would cross another cut.
struct Cycle {
  CycleKind kind = CycleKind::A;
  int index = 0;  // 0..g-1
  int cut = 0;    // finite cut the cycle is attached to
  cx from, to;
  std::vector<cx> via;
};

enum class Sheet { branch_ref, other };

// Spectral curve Y^2 = E^{2g+1} + s1 E^{2g} + ... + s_{2g+1} with distinct
// roots, a fixed straight-segment cut system and the branch-reference sheet
// on which Y / E^{g+1/2} -> 1 as E -> +inf along the positive real axis.
// Instances are immutable after construction and safe to share across threads.
class SpectralCurve {
 public:
  static SpectralCurve from_cubic(cx s1, cx s2, cx s3);
  static SpectralCurve from_coeffs(const std::vector<cx>& coeffs);
  static SpectralCurve from_roots(const std::vector<cx>& roots);

  int genus() const { return genus_; }
  // s1..s_{2g+1}, descending powers of E.
  const std::vector<cx>& coeffs() const { return coeffs_; }
  const std::vector<cx>& roots() const { return roots_; }
  double scale() const { return scale_; }  // max(1, max |root|)
  bool conj_symmetric() const { return conj_symmetric_; }
  int real_root_count() const { return real_root_count_; }
  cx discriminant() const;  // prod_{i<j} (r_i - r_j)^2

  cx monic(cx E) const;
  cx monic_prime(cx E) const;

  const std::vector<Cut>& cuts() const { return cuts_; }
  int unpaired_root() const { return unpaired_; }
  int finite_cut_count() const { return static_cast<int>(cuts_.size()) - 1; }

  // Y on the branch_ref sheet, single-valued on the complement of the cuts.
  cx y_ref(cx E) const;
  // Same product with the factor of finite cut `skip_cut` left out.
  cx y_ref_excluding(int skip_cut, cx E) const;

  std::vector<Cycle> canonical_homology_basis() const;

 private:
  SpectralCurve() = default;
  static SpectralCurve build(std::vector<cx> coeffs, std::vector<cx> roots);
  void make_cuts();
  void fix_reference_sheet();
  cx cut_factor(const Cut& c, cx E) const;

  int genus_ = 1;
  std::vector<cx> coeffs_;
  std::vector<cx> roots_;
  double scale_ = 1.0;
  bool conj_symmetric_ = false;
  int real_root_count_ = 0;
  std::vector<Cut> cuts_;  // finite cuts first, ray cut last
  int unpaired_ = 0;
  double sheet_sign_ = 1.0;
};

// Continuous branch of Y along a polyline, anchored on the requested sheet at
// path.front(). Throws PathTooCloseToBranchPoint if the path passes within
// 1e-6 * scale of a branch point.
std::vector<cx> y_along_path(const SpectralCurve& curve, std::span<const cx> path,
                             Sheet start_sheet = Sheet::branch_ref);

// Distance from point p to segment [a, b].
double segment_distance(cx a, cx b, cx p);

}  // namespace rncurves
