#include "gkz/lattice.hpp"

#include "gkz/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace gkz::lattice {

namespace {

using RVec = std::vector<Rational>;
using BigMatrix = std::vector<std::vector<Integer>>;

BigMatrix to_big(const IntMatrix& m) {
  BigMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i].assign(m[i].begin(), m[i].end());
  return out;
}

long long to_ll(const Integer& v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw Error(ErrorKind::SizeLimitExceeded, "integer entry overflows 64 bits");
  return v.convert_to<long long>();
}

// Rank of a rational matrix by fraction-exact Gaussian elimination.
std::size_t rational_rank(std::vector<RVec> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

Rational determinant(std::vector<RVec> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[c], m[piv]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

// Calls fn on every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(std::as_const(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Normal of the hyperplane through base + span(diffs) in Q^d, as the vector of
// signed maximal minors. Zero when the diffs are dependent.
RVec generalized_cross(const std::vector<RVec>& diffs, std::size_t d) {
  RVec normal(d);
  for (std::size_t skip = 0; skip < d; ++skip) {
    std::vector<RVec> minor;
    minor.reserve(diffs.size());
    for (const auto& v : diffs) {
      RVec row;
      row.reserve(d - 1);
      for (std::size_t j = 0; j < d; ++j)
        if (j != skip) row.push_back(v[j]);
      minor.push_back(std::move(row));
    }
    const Rational det = determinant(std::move(minor));
    normal[skip] = (skip % 2 == 0) ? det : Rational(-det);
  }
  return normal;
}

Rational dot(const RVec& a, const RVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Facets of the full-dimensional polytope conv(pts) in Q^d, each given as the
// sorted list of point positions lying on it.
std::vector<std::vector<std::size_t>> facets(const std::vector<RVec>& pts, std::size_t d) {
  std::vector<std::vector<std::size_t>> out;
  if (d == 1) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i][0] < pts[lo][0]) lo = i;
      if (pts[i][0] > pts[hi][0]) hi = i;
    }
    out.push_back({lo});
    out.push_back({hi});
    return out;
  }
  std::set<std::vector<std::size_t>> seen;
  for_each_subset(pts.size(), d, [&](const std::vector<std::size_t>& idx) {
    std::vector<RVec> diffs;
    for (std::size_t k = 1; k < idx.size(); ++k) {
      RVec v(d);
      for (std::size_t j = 0; j < d; ++j) v[j] = pts[idx[k]][j] - pts[idx[0]][j];
      diffs.push_back(std::move(v));
    }
    const RVec normal = generalized_cross(diffs, d);
    if (std::all_of(normal.begin(), normal.end(), [](const Rational& x) { return x == 0; })) return;
    const Rational offset = dot(normal, pts[idx[0]]);
    bool pos = false, neg = false;
    std::vector<std::size_t> on;
    for (std::size_t q = 0; q < pts.size(); ++q) {
      const Rational s = dot(normal, pts[q]) - offset;
      if (s > 0) pos = true;
      else if (s < 0) neg = true;
      else on.push_back(q);
      if (pos && neg) return;
    }
    if (seen.insert(on).second) out.push_back(std::move(on));
  });
  return out;
}

struct AffineChart {
  std::vector<RVec> coords;
  std::size_t dim = 0;
};

// Coordinates of pts in an affine basis of their affine hull.
AffineChart affine_chart(const std::vector<RVec>& pts) {
  AffineChart chart;
  if (pts.empty()) return chart;
  const std::size_t ambient = pts[0].size();
  std::vector<RVec> basis;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RVec v(ambient);
    for (std::size_t j = 0; j < ambient; ++j) v[j] = pts[i][j] - pts[0][j];
    auto trial = basis;
    trial.push_back(v);
    if (rational_rank(trial) == trial.size()) basis = std::move(trial);
  }
  chart.dim = basis.size();
  // Solve sum_k c_k basis_k = p - p0 by eliminating on the augmented system.
  for (const auto& p : pts) {
    std::vector<RVec> sys(ambient, RVec(chart.dim + 1));
    for (std::size_t r = 0; r < ambient; ++r) {
      for (std::size_t k = 0; k < chart.dim; ++k) sys[r][k] = basis[k][r];
      sys[r][chart.dim] = p[r] - pts[0][r];
    }
    std::size_t row = 0;
    std::vector<std::size_t> pivot_row(chart.dim);
    for (std::size_t c = 0; c < chart.dim; ++c) {
      std::size_t piv = row;
      while (sys[piv][c] == 0) ++piv;
      std::swap(sys[row], sys[piv]);
      const Rational inv = 1 / sys[row][c];
      for (auto& x : sys[row]) x *= inv;
      for (std::size_t i = 0; i < ambient; ++i) {
        if (i == row || sys[i][c] == 0) continue;
        const Rational f = sys[i][c];
        for (std::size_t j = 0; j <= chart.dim; ++j) sys[i][j] -= f * sys[row][j];
      }
      pivot_row[c] = row++;
    }
    RVec c(chart.dim);
    for (std::size_t k = 0; k < chart.dim; ++k) c[k] = sys[pivot_row[k]][chart.dim];
    chart.coords.push_back(std::move(c));
  }
  return chart;
}

std::vector<std::vector<std::size_t>> pull(const std::vector<std::size_t>& ids,
                                           const std::vector<RVec>& coords, std::size_t d) {
  if (d == 0) return {{ids[0]}};
  const std::size_t apex =
      static_cast<std::size_t>(std::min_element(coords.begin(), coords.end()) - coords.begin());
  std::vector<std::vector<std::size_t>> simplices;
  for (const auto& facet : facets(coords, d)) {
    if (std::find(facet.begin(), facet.end(), apex) != facet.end()) continue;
    std::vector<RVec> sub;
    std::vector<std::size_t> sub_ids;
    for (std::size_t q : facet) {
      sub.push_back(coords[q]);
      sub_ids.push_back(ids[q]);
    }
    const AffineChart chart = affine_chart(sub);
    for (auto s : pull(sub_ids, chart.coords, d - 1)) {
      s.push_back(ids[apex]);
      simplices.push_back(std::move(s));
    }
  }
  return simplices;
}

void check_point_set(const std::vector<IntVector>& points) {
  if (points.empty()) throw Error(ErrorKind::LowerDimensionalPolytope, "empty point set");
  const std::size_t n = points[0].size();
  for (const auto& p : points)
    if (p.size() != n) throw Error(ErrorKind::InvalidArgument, "points have inconsistent lengths");
  if (n > static_cast<std::size_t>(kMaxDimension))
    throw Error(ErrorKind::SizeLimitExceeded, "dimension " + std::to_string(n) + " exceeds " +
                                                  std::to_string(kMaxDimension));
  if (points.size() > kMaxPoints)
    throw Error(ErrorKind::SizeLimitExceeded, "more than " + std::to_string(kMaxPoints) + " points");
}

std::vector<IntVector> distinct(const std::vector<IntVector>& points) {
  std::set<IntVector> s(points.begin(), points.end());
  return {s.begin(), s.end()};
}

}  // namespace

// ---------------------------------------------------------------------------
// ExponentMatrix

ExponentMatrix::ExponentMatrix(int dim, std::vector<IntVector> points)
    : dim_(dim), points_(std::move(points)) {
  rows_.assign(static_cast<std::size_t>(dim_) + 1, IntVector(points_.size()));
  for (std::size_t j = 0; j < points_.size(); ++j) {
    rows_[0][j] = 1;
    for (int k = 0; k < dim_; ++k) rows_[static_cast<std::size_t>(k) + 1][j] = points_[j][k];
  }
}

int ExponentMatrix::origin_index() const noexcept {
  for (std::size_t j = 0; j < points_.size(); ++j)
    if (std::all_of(points_[j].begin(), points_[j].end(), [](long long x) { return x == 0; }))
      return static_cast<int>(j);
  return -1;
}

IntVector ExponentMatrix::apply(std::span<const long long> v) const {
  IntVector out(num_rows(), 0);
  for (std::size_t r = 0; r < num_rows(); ++r)
    for (std::size_t j = 0; j < num_points(); ++j) out[r] += rows_[r][j] * v[j];
  return out;
}

RationalVector ExponentMatrix::apply(std::span<const Rational> v) const {
  RationalVector out(num_rows(), Rational(0));
  for (std::size_t r = 0; r < num_rows(); ++r)
    for (std::size_t j = 0; j < num_points(); ++j) out[r] += rows_[r][j] * v[j];
  return out;
}

ExponentMatrix homogenize(const std::vector<IntVector>& points, int dim) {
  if (dim < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "empty point list");
  if (dim > kMaxDimension)
    throw Error(ErrorKind::SizeLimitExceeded, "dimension exceeds " + std::to_string(kMaxDimension));
  if (points.size() > kMaxPoints)
    throw Error(ErrorKind::SizeLimitExceeded, "more than " + std::to_string(kMaxPoints) + " points");
  for (const auto& p : points)
    if (p.size() != static_cast<std::size_t>(dim))
      throw Error(ErrorKind::InvalidArgument, "point length differs from dimension");
  if (distinct(points).size() != points.size())
    throw Error(ErrorKind::DuplicatePoint, "point list contains duplicates");
  ExponentMatrix a(dim, points);
  if (rank(a.rows()) < a.num_rows())
    throw Error(ErrorKind::DegenerateConfiguration, "homogenized matrix has rank below n+1");
  return a;
}

// ---------------------------------------------------------------------------
// Integer linear algebra

std::size_t rank(const IntMatrix& m) {
  std::vector<RVec> r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r[i].assign(m[i].begin(), m[i].end());
  return rational_rank(std::move(r));
}

IntMatrix hermite_normal_form(IntMatrix input) {
  BigMatrix m = to_big(input);
  if (m.empty()) return {};
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    // Euclid on column c among rows r.. until a single nonzero remains.
    while (true) {
      std::size_t best = m.size();
      for (std::size_t i = r; i < m.size(); ++i)
        if (m[i][c] != 0 && (best == m.size() || abs(m[i][c]) < abs(m[best][c]))) best = i;
      if (best == m.size()) break;
      std::swap(m[r], m[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        const Integer q = m[i][c] / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[i][j] -= q * m[r][j];
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0)
      for (auto& x : m[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) {
      Integer q = m[i][c] / m[r][c];
      if (m[i][c] - q * m[r][c] < 0) q -= 1;
      if (q != 0)
        for (std::size_t j = c; j < cols; ++j) m[i][j] -= q * m[r][j];
    }
    ++r;
  }
  IntMatrix out;
  for (std::size_t i = 0; i < r; ++i) {
    IntVector row(cols);
    for (std::size_t j = 0; j < cols; ++j) row[j] = to_ll(m[i][j]);
    out.push_back(std::move(row));
  }
  return out;
}

KernelBasis integer_kernel(const ExponentMatrix& a) {
  const std::size_t p = a.num_points();
  const std::size_t m = a.num_rows();
  // Rows of [A^T | I]; unimodular row operations keep the right block a basis
  // change of Z^p, so rows whose left block vanishes span ker_Z(A) exactly.
  BigMatrix w(p, std::vector<Integer>(m + p, 0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t r = 0; r < m; ++r) w[i][r] = a.at(r, i);
    w[i][m + i] = 1;
  }
  std::size_t row = 0;
  for (std::size_t c = 0; c < m && row < p; ++c) {
    while (true) {
      std::size_t best = p;
      for (std::size_t i = row; i < p; ++i)
        if (w[i][c] != 0 && (best == p || abs(w[i][c]) < abs(w[best][c]))) best = i;
      if (best == p) break;
      std::swap(w[row], w[best]);
      bool done = true;
      for (std::size_t i = row + 1; i < p; ++i) {
        if (w[i][c] == 0) continue;
        const Integer q = w[i][c] / w[row][c];
        for (std::size_t j = 0; j < m + p; ++j) w[i][j] -= q * w[row][j];
        if (w[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (w[row][c] != 0) ++row;
  }
  IntMatrix kernel;
  for (std::size_t i = row; i < p; ++i) {
    IntVector v(p);
    for (std::size_t j = 0; j < p; ++j) v[j] = to_ll(w[i][m + j]);
    kernel.push_back(std::move(v));
  }
  KernelBasis basis;
  basis.vectors = hermite_normal_form(std::move(kernel));
  basis.saturated = is_saturated(basis.vectors);
  return basis;
}

std::vector<Integer> smith_invariants(const IntMatrix& input) {
  BigMatrix m = to_big(input);
  std::vector<Integer> diag;
  if (m.empty()) return diag;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Bring the smallest nonzero entry of the trailing block to (t, t).
    while (true) {
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (m[i][j] != 0 && (bi == rows || abs(m[i][j]) < abs(m[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == rows) return diag;
      std::swap(m[t], m[bi]);
      for (auto& r : m) std::swap(r[t], r[bj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const Integer q = m[i][t] / m[t][t];
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const Integer q = m[t][j] / m[t][t];
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any offending row into row t and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag.push_back(abs(m[t][t]));
  }
  return diag;
}

bool is_saturated(const std::vector<IntVector>& vectors) {
  for (const auto& d : smith_invariants(vectors))
    if (d != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Volumes

std::vector<std::vector<std::size_t>> pulling_triangulation(const std::vector<IntVector>& input) {
  check_point_set(input);
  const std::vector<IntVector> points = distinct(input);
  const std::size_t n = points[0].size();
  std::vector<RVec> coords;
  for (const auto& p : points) coords.emplace_back(p.begin(), p.end());
  if (n == 0 || affine_chart(coords).dim < n)
    throw Error(ErrorKind::LowerDimensionalPolytope, "point set is not full-dimensional");
  std::vector<std::size_t> ids(points.size());
  std::iota(ids.begin(), ids.end(), 0);
  auto simplices = pull(ids, coords, n);
  // Map positions in the deduplicated set back to the caller's indices.
  for (auto& s : simplices)
    for (auto& i : s)
      i = static_cast<std::size_t>(std::find(input.begin(), input.end(), points[i]) - input.begin());
  return simplices;
}

Integer normalized_volume(const std::vector<IntVector>& points) {
  const auto simplices = pulling_triangulation(points);
  const std::size_t n = points[0].size();
  Integer total = 0;
  for (const auto& s : simplices) {
    std::vector<RVec> m;
    for (std::size_t k = 1; k <= n; ++k) {
      RVec row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = points[s[k]][j] - points[s[0]][j];
      m.push_back(std::move(row));
    }
    const Rational det = determinant(std::move(m));
    total += boost::multiprecision::numerator(Rational(abs(det)));
  }
  return total;
}

namespace {

struct Halfspace {
  IntVector normal;
  long long bound;  // normal . x <= bound
};

long long int_det(std::vector<IntVector> m) {
  // Bareiss fraction-free elimination.
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<Integer>> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i].assign(m[i].begin(), m[i].end());
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (b[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && b[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(b[k], b[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) b[i][j] = (b[i][j] * b[k][k] - b[i][k] * b[k][j]) / prev;
    prev = b[k][k];
  }
  return sign * to_ll(b[n - 1][n - 1]);
}

// H-representation of conv(points) computed directly on the integer points.
std::vector<Halfspace> integer_halfspaces(const std::vector<IntVector>& points, std::size_t n) {
  std::vector<Halfspace> hs;
  if (n == 1) {
    long long lo = points[0][0], hi = points[0][0];
    for (const auto& p : points) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    if (lo == hi) return hs;
    hs.push_back({{1}, hi});
    hs.push_back({{-1}, -lo});
    return hs;
  }
  std::set<std::pair<IntVector, long long>> seen;
  for_each_subset(points.size(), n, [&](const std::vector<std::size_t>& idx) {
    IntVector normal(n);
    for (std::size_t skip = 0; skip < n; ++skip) {
      std::vector<IntVector> minor;
      for (std::size_t k = 1; k < n; ++k) {
        IntVector row;
        for (std::size_t j = 0; j < n; ++j)
          if (j != skip) row.push_back(points[idx[k]][j] - points[idx[0]][j]);
        minor.push_back(std::move(row));
      }
      const long long d = int_det(std::move(minor));
      normal[skip] = (skip % 2 == 0) ? d : -d;
    }
    long long g = 0;
    for (long long x : normal) g = std::gcd(g, x);
    if (g == 0) return;
    for (auto& x : normal) x /= g;
    auto value = [&](const IntVector& p) {
      long long s = 0;
      for (std::size_t j = 0; j < n; ++j) s += normal[j] * p[j];
      return s;
    };
    const long long c = value(points[idx[0]]);
    bool above = false, below = false;
    for (const auto& p : points) {
      const long long v = value(p);
      above |= v > c;
      below |= v < c;
    }
    if (above && below) return;
    if (above) {
      for (auto& x : normal) x = -x;
      if (seen.insert({normal, -c}).second) hs.push_back({normal, -c});
    } else if (seen.insert({normal, c}).second) {
      hs.push_back({normal, c});
    }
  });
  return hs;
}

long long count_dilate(const std::vector<Halfspace>& hs, const IntVector& lo, const IntVector& hi,
                       long long k) {
  const std::size_t n = lo.size();
  IntVector x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = k * lo[j];
  long long count = 0;
  while (true) {
    bool inside = true;
    for (const auto& h : hs) {
      long long s = 0;
      for (std::size_t j = 0; j < n; ++j) s += h.normal[j] * x[j];
      if (s > k * h.bound) {
        inside = false;
        break;
      }
    }
    if (inside) ++count;
    std::size_t j = 0;
    while (j < n && x[j] == k * hi[j]) {
      x[j] = k * lo[j];
      ++j;
    }
    if (j == n) return count;
    ++x[j];
  }
}

}  // namespace

Integer ehrhart_volume_oracle(const std::vector<IntVector>& input) {
  check_point_set(input);
  const std::vector<IntVector> points = distinct(input);
  const std::size_t n = points[0].size();
  if (n == 0) throw Error(ErrorKind::LowerDimensionalPolytope, "zero-dimensional point set");
  const auto hs = integer_halfspaces(points, n);
  // A full-dimensional polytope has at least n+1 facets; with fewer, every
  // candidate hyperplane contained all the points.
  if (hs.size() < n + 1) throw Error(ErrorKind::LowerDimensionalPolytope, "point set is not full-dimensional");
  IntVector lo = points[0], hi = points[0];
  for (const auto& p : points)
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  // Forward differences of L(0..n+1): the n-th at 0 is n! times the leading
  // coefficient, and the (n+1)-th must vanish for a degree-n polynomial.
  std::vector<Rational> d;
  for (std::size_t k = 0; k <= n + 1; ++k)
    d.emplace_back(count_dilate(hs, lo, hi, static_cast<long long>(k)));
  for (std::size_t order = 1; order <= n; ++order)
    for (std::size_t k = 0; k + order < d.size(); ++k) d[k] = d[k + 1] - d[k];
  const Rational nth = d[0];
  const Rational next = d[1] - d[0];
  if (next != 0 || !is_integer(nth) || nth <= 0)
    throw Error(ErrorKind::NonIntegerVolume, "lattice counts are not an Ehrhart polynomial of degree n");
  return boost::multiprecision::numerator(nth);
}

// ---------------------------------------------------------------------------
// Property (*)

FanRays::FanRays(std::vector<IntVector> rays) : rays_(std::move(rays)) {
  std::set<IntVector> seen;
  for (const auto& v : rays_) {
    if (!rays_.empty() && v.size() != rays_[0].size())
      throw Error(ErrorKind::InvalidArgument, "rays have inconsistent lengths");
    long long g = 0;
    for (long long x : v) g = std::gcd(g, x);
    if (g != 1) throw Error(ErrorKind::InvalidArgument, "ray is not primitive");
    if (!seen.insert(v).second) throw Error(ErrorKind::InvalidArgument, "duplicate ray");
  }
}

PropertyStarReport check_property_star(std::span<const Rational> alpha, const FanRays& rays) {
  PropertyStarReport report;
  for (const auto& v : rays.rays()) {
    if (v.size() != alpha.size()) throw Error(ErrorKind::InvalidArgument, "alpha length differs from ray length");
    Rational pairing = 0;
    for (std::size_t j = 0; j < v.size(); ++j) pairing += alpha[j] * v[j];
    const bool bad = is_integer(pairing) && pairing <= 0;
    report.rays.push_back({pairing, !bad});
    report.holds = report.holds && !bad;
  }
  return report;
}

}  // namespace gkz::lattice
