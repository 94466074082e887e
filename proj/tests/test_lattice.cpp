#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gkz/error.hpp"
#include "gkz/lattice.hpp"

#include <algorithm>
#include <random>

using namespace gkz;
using namespace gkz::lattice;

namespace {

// All nonzero integer vectors with entries in [-bound, bound] that A kills,
// normalized to a positive first nonzero entry.
std::vector<IntVector> brute_kernel(const ExponentMatrix& a, long long bound) {
  std::vector<IntVector> found;
  const std::size_t p = a.num_points();
  IntVector v(p, -bound);
  while (true) {
    const auto img = a.apply(v);
    const bool zero = std::all_of(img.begin(), img.end(), [](long long x) { return x == 0; });
    const auto first = std::find_if(v.begin(), v.end(), [](long long x) { return x != 0; });
    if (zero && first != v.end() && *first > 0) found.push_back(v);
    std::size_t j = 0;
    while (j < p && v[j] == bound) v[j++] = -bound;
    if (j == p) return found;
    ++v[j];
  }
}

IntVector negate(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

std::vector<IntVector> random_points(std::mt19937& rng, int dim) {
  std::uniform_int_distribution<int> coord(-2, 2);
  std::uniform_int_distribution<int> count(dim + 1, dim + 5);
  while (true) {
    std::vector<IntVector> pts;
    const int k = count(rng);
    for (int i = 0; i < k; ++i) {
      IntVector p(static_cast<std::size_t>(dim));
      for (auto& x : p) x = coord(rng);
      pts.push_back(p);
    }
    try {
      (void)normalized_volume(pts);
      return pts;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::LowerDimensionalPolytope) throw;
    }
  }
}

}  // namespace

TEST_CASE("homogenize assembles the ones row") {
  const auto a = homogenize({{-1}, {0}, {1}}, 1);
  CHECK(a.rows() == IntMatrix{{1, 1, 1}, {-1, 0, 1}});
  const auto hesse = homogenize({{0, 0}, {1, 0}, {0, 1}, {-1, -1}}, 2);
  CHECK(hesse.num_rows() == 3);
  CHECK(hesse.num_points() == 4);
  CHECK(rank(hesse.rows()) == 3);
  CHECK(hesse.origin_index() == 0);
}

TEST_CASE("homogenize rejects bad input") {
  try {
    (void)homogenize({{1, 1}, {1, 1}, {1, 1}}, 2);
    FAIL("expected DuplicatePoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DuplicatePoint);
  }
  try {
    (void)homogenize({{0, 0}, {1, 1}, {2, 2}}, 2);
    FAIL("expected DegenerateConfiguration");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateConfiguration);
  }
  std::vector<IntVector> many;
  for (long long i = 0; i < 25; ++i) many.push_back({i});
  CHECK_THROWS_AS((void)homogenize(many, 1), Error);
  CHECK_THROWS_AS((void)homogenize({{0, 0, 0, 0, 0}}, 5), Error);
}

TEST_CASE("integer kernel of the P1 segment matches brute force") {
  const auto a = homogenize({{-1}, {0}, {1}}, 1);
  const auto k = integer_kernel(a);
  REQUIRE(k.vectors.size() == 1);
  CHECK(k.saturated);
  // Oracle: the shortest nonzero kernel vector found by enumeration.
  const auto brute = brute_kernel(a, 2);
  REQUIRE(!brute.empty());
  CHECK(brute.front() == IntVector{1, -2, 1});
  CHECK((k.vectors[0] == IntVector{1, -2, 1} || k.vectors[0] == negate({1, -2, 1})));
}

TEST_CASE("integer kernel of the Hesse configuration matches brute force") {
  const auto a = homogenize({{0, 0}, {1, 0}, {0, 1}, {-1, -1}}, 2);
  const auto k = integer_kernel(a);
  REQUIRE(k.vectors.size() == 1);
  const auto brute = brute_kernel(a, 3);
  REQUIRE(brute.size() == 1);
  CHECK((k.vectors[0] == IntVector{-3, 1, 1, 1} || k.vectors[0] == IntVector{3, -1, -1, -1}));
  CHECK(brute[0] == IntVector{3, -1, -1, -1});
}

TEST_CASE("square invertible matrix has empty kernel") {
  const auto a = homogenize({{0, 0}, {1, 0}, {0, 1}}, 2);
  const auto k = integer_kernel(a);
  CHECK(k.vectors.empty());
  CHECK(k.saturated);
}

TEST_CASE("kernel basis is saturated, annihilated and deterministic") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + trial % 3;
    auto pts = random_points(rng, dim);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() > 8) pts.resize(8);
    ExponentMatrix a(dim, pts);
    if (rank(a.rows()) < a.num_rows()) continue;
    const auto k = integer_kernel(a);
    CHECK(k.vectors.size() == a.num_points() - a.num_rows());
    CHECK(k.saturated);
    for (const auto& v : k.vectors) {
      const auto img = a.apply(v);
      CHECK(std::all_of(img.begin(), img.end(), [](long long x) { return x == 0; }));
      const auto lead = std::find_if(v.begin(), v.end(), [](long long x) { return x != 0; });
      CHECK(*lead > 0);
    }
    CHECK(integer_kernel(a).vectors == k.vectors);
  }
}

TEST_CASE("permuting points permutes kernel coordinates") {
  const std::vector<IntVector> pts{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0, 0}};
  const auto a = homogenize(pts, 2);
  const auto k = integer_kernel(a);
  const std::vector<std::size_t> perm{4, 2, 0, 3, 1};
  std::vector<IntVector> permuted;
  for (auto i : perm) permuted.push_back(pts[i]);
  const auto kp = integer_kernel(homogenize(permuted, 2));
  // Same lattice: permuting the coordinates of the original basis and
  // re-normalizing gives the new basis.
  IntMatrix moved;
  for (const auto& v : k.vectors) {
    IntVector w(v.size());
    for (std::size_t j = 0; j < perm.size(); ++j) w[j] = v[perm[j]];
    moved.push_back(w);
  }
  CHECK(hermite_normal_form(moved) == kp.vectors);
}

TEST_CASE("smith invariants detect non-saturated lattices") {
  CHECK(is_saturated({{1, -2, 1}}));
  CHECK_FALSE(is_saturated({{2, -4, 2}}));
  const auto inv = smith_invariants({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  CHECK(inv == std::vector<Integer>{2, 6, 12});
}

TEST_CASE("normalized volume on named polytopes") {
  CHECK(normalized_volume({{-1}, {0}, {1}}) == 2);
  CHECK(normalized_volume({{1, 0}, {0, 1}, {-1, -1}}) == 3);
  CHECK(normalized_volume({{0, 0}, {1, 0}, {0, 1}, {-1, -1}}) == 3);
  CHECK(normalized_volume({{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0, 0}}) == 4);
  for (int n = 1; n <= 4; ++n) {
    std::vector<IntVector> simplex{IntVector(static_cast<std::size_t>(n), 0)};
    for (int i = 0; i < n; ++i) {
      IntVector e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = 1;
      simplex.push_back(e);
    }
    CHECK(normalized_volume(simplex) == 1);
    CHECK(ehrhart_volume_oracle(simplex) == 1);
  }
  // Unit cube in 3D: 3! * 1.
  std::vector<IntVector> cube;
  for (long long x = 0; x < 2; ++x)
    for (long long y = 0; y < 2; ++y)
      for (long long z = 0; z < 2; ++z) cube.push_back({x, y, z});
  CHECK(normalized_volume(cube) == 6);
}

TEST_CASE("Ehrhart oracle on named polytopes") {
  CHECK(ehrhart_volume_oracle({{-1}, {0}, {1}}) == 2);
  CHECK(ehrhart_volume_oracle({{1, 0}, {0, 1}, {-1, -1}}) == 3);
  CHECK(ehrhart_volume_oracle({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) == 4);
}

TEST_CASE("lower-dimensional inputs are rejected") {
  for (auto fn : {&normalized_volume, &ehrhart_volume_oracle}) {
    try {
      (void)fn({{}});
      FAIL("expected LowerDimensionalPolytope");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::LowerDimensionalPolytope);
    }
    try {
      (void)fn({{0, 0}, {1, 1}, {2, 2}});
      FAIL("expected LowerDimensionalPolytope");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::LowerDimensionalPolytope);
    }
  }
}

TEST_CASE("triangulation volume equals Ehrhart oracle on random polytopes") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 45; ++trial) {
    const int dim = 1 + trial % 3;
    const auto pts = random_points(rng, dim);
    CAPTURE(trial);
    CHECK(normalized_volume(pts) == ehrhart_volume_oracle(pts));
  }
}

TEST_CASE("normalized volume is unimodular and translation invariant") {
  std::mt19937 rng(99);
  const IntMatrix u{{1, 2, 0}, {0, 1, -1}, {1, 2, 1}};  // det 1
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = random_points(rng, 3);
    std::vector<IntVector> moved;
    for (const auto& p : pts) {
      IntVector q(3, 0);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) q[i] += u[i][j] * p[j];
      q[0] += 5;
      q[2] -= 3;
      moved.push_back(q);
    }
    CHECK(normalized_volume(moved) == normalized_volume(pts));
  }
}

TEST_CASE("property (*) reports each ray") {
  const FanRays p1({{1}, {-1}});
  const RationalVector half{Rational(1, 2)};
  auto r = check_property_star(half, p1);
  CHECK(r.holds);
  CHECK(r.rays[0].passes);
  CHECK(r.rays[1].passes);

  const FanRays p2({{1, 0}, {0, 1}, {-1, -1}});
  const RationalVector zero{0, 0};
  r = check_property_star(zero, p2);
  CHECK_FALSE(r.holds);
  CHECK(std::none_of(r.rays.begin(), r.rays.end(), [](const RayVerdict& v) { return v.passes; }));

  const RationalVector alpha{Rational(-2), Rational(1, 3)};
  r = check_property_star(alpha, p2);
  CHECK_FALSE(r.holds);
  CHECK(r.rays[0].pairing == -2);
  CHECK_FALSE(r.rays[0].passes);
  CHECK(r.rays[1].passes);
  CHECK(r.rays[2].pairing == Rational(5, 3));
  CHECK(r.rays[2].passes);

  CHECK_THROWS_AS(FanRays({{2, 0}}), Error);
  CHECK_THROWS_AS(FanRays({{1, 0}, {1, 0}}), Error);
}
