#pragma once

// Exact lattice geometry: homogenized exponent matrices, integer kernels,
// normalized volumes of lattice polytopes and the ray resonance check.
// No floating point is used anywhere in this module.

#include "gkz/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace gkz::lattice {

inline constexpr int kMaxDimension = 4;
inline constexpr std::size_t kMaxPoints = 24;

using IntMatrix = std::vector<IntVector>;  // row-major

/// Homogenized exponent matrix. Row 0 is all ones; rows 1..n hold the
/// coordinates of the Laurent exponents, one column per monomial.
class ExponentMatrix {
 public:
  ExponentMatrix(int dim, std::vector<IntVector> points);

  int dim() const noexcept { return dim_; }
  std::size_t num_points() const noexcept { return points_.size(); }
  std::size_t num_rows() const noexcept { return static_cast<std::size_t>(dim_) + 1; }
  const std::vector<IntVector>& points() const noexcept { return points_; }
  const IntMatrix& rows() const noexcept { return rows_; }
  long long at(std::size_t row, std::size_t col) const { return rows_[row][col]; }

  /// Index of the point equal to the origin, or -1.
  int origin_index() const noexcept;

  /// A * v for an integer vector of length p.
  IntVector apply(std::span<const long long> v) const;
  RationalVector apply(std::span<const Rational> v) const;

  bool operator==(const ExponentMatrix&) const = default;

 private:
  int dim_;
  std::vector<IntVector> points_;
  IntMatrix rows_;
};

ExponentMatrix homogenize(const std::vector<IntVector>& points, int dim);

struct KernelBasis {
  std::vector<IntVector> vectors;
  bool saturated = false;
};

/// Saturated basis of ker_Z(A), in row Hermite normal form with positive
/// pivots and entries above each pivot reduced into [0, pivot).
KernelBasis integer_kernel(const ExponentMatrix& a);

/// Invariant factors of an integer matrix (Smith normal form diagonal,
/// nonzero entries only, each dividing the next).
std::vector<Integer> smith_invariants(const IntMatrix& m);

/// True when the rows span a saturated sublattice (all invariant factors 1).
bool is_saturated(const std::vector<IntVector>& vectors);

/// Row Hermite normal form of an integer matrix; zero rows dropped.
IntMatrix hermite_normal_form(IntMatrix m);

/// Exact rank over Q.
std::size_t rank(const IntMatrix& m);

/// n! * Euclidean volume of conv(points), via exact facet enumeration and a
/// pulling triangulation.
Integer normalized_volume(const std::vector<IntVector>& points);

/// Simplices (as point indices) of the pulling triangulation used by
/// normalized_volume. Exposed for tests.
std::vector<std::vector<std::size_t>> pulling_triangulation(const std::vector<IntVector>& points);

/// Independent check of normalized_volume: counts lattice points in k*P for
/// k = 0..n+1 and reads n! times the leading Ehrhart coefficient off the
/// n-th finite difference.
Integer ehrhart_volume_oracle(const std::vector<IntVector>& points);

/// Integral generators of the 1-cones of a fan: primitive and duplicate-free.
class FanRays {
 public:
  explicit FanRays(std::vector<IntVector> rays);
  const std::vector<IntVector>& rays() const noexcept { return rays_; }

 private:
  std::vector<IntVector> rays_;
};

struct RayVerdict {
  Rational pairing;  // <alpha, v>
  bool passes;       // pairing is not in {0, -1, -2, ...}
};

struct PropertyStarReport {
  std::vector<RayVerdict> rays;
  bool holds = true;
};

PropertyStarReport check_property_star(std::span<const Rational> alpha, const FanRays& rays);

}  // namespace gkz::lattice
