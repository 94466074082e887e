#include "gkz/series.hpp"

#include "gkz/error.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

namespace gkz::series {

namespace {

// Polynomial in the logarithms log a_1 .. log a_p.
template <class T>
using LogPolynomial = std::map<std::vector<int>, T>;

template <class T>
LogPolynomial<T> multiply(const LogPolynomial<T>& x, const LogPolynomial<T>& y) {
  LogPolynomial<T> out;
  for (const auto& [mx, cx] : x)
    for (const auto& [my, cy] : y) {
      std::vector<int> m = mx;
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += my[i];
      out[m] += cx * cy;
    }
  std::erase_if(out, [](const auto& e) { return e.second == T(0); });
  return out;
}

// (sum_i d_i log a_i)^k / k! for k = 0..order.
template <class T>
std::vector<LogPolynomial<T>> exponential_log_powers(const std::vector<T>& d, std::size_t order) {
  const std::size_t p = d.size();
  LogPolynomial<T> linear;
  for (std::size_t i = 0; i < p; ++i) {
    if (d[i] == T(0)) continue;
    std::vector<int> m(p, 0);
    m[i] = 1;
    linear[m] = d[i];
  }
  std::vector<LogPolynomial<T>> out(order + 1);
  out[0][std::vector<int>(p, 0)] = T(1);
  for (std::size_t k = 1; k <= order; ++k) {
    out[k] = multiply(out[k - 1], linear);
    for (auto& [m, c] : out[k]) c /= T(static_cast<long long>(k));
  }
  return out;
}

// exp of a jet with zero constant term.
std::vector<long double> jet_exp(const std::vector<long double>& f) {
  std::vector<long double> g(f.size(), 0.0L);
  g[0] = 1.0L;
  for (std::size_t n = 1; n < f.size(); ++n) {
    long double s = 0;
    for (std::size_t k = 1; k <= n; ++k) s += static_cast<long double>(k) * f[k] * g[n - k];
    g[n] = s / static_cast<long double>(n);
  }
  return g;
}

std::vector<long double> jet_mul(const std::vector<long double>& x, const std::vector<long double>& y) {
  std::vector<long double> out(x.size(), 0.0L);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; i + j < x.size(); ++j) out[i + j] += x[i] * y[j];
  return out;
}

long double polygamma_at(std::size_t k, long double x) {
  return boost::math::polygamma(static_cast<int>(k), x);
}

// Truncated polynomial in r formal parameters, total degree <= degree.
class MultiJet {
 public:
  MultiJet(std::size_t r, std::size_t degree) : r_(r), degree_(degree) {}

  static MultiJet linear(const Rational& c0, const std::vector<Rational>& slopes, std::size_t degree) {
    MultiJet j(slopes.size(), degree);
    j.add(std::vector<int>(slopes.size(), 0), c0);
    if (degree == 0) return j;
    for (std::size_t k = 0; k < slopes.size(); ++k) {
      std::vector<int> a(slopes.size(), 0);
      a[k] = 1;
      j.add(a, slopes[k]);
    }
    return j;
  }

  void add(const std::vector<int>& alpha, const Rational& c) {
    if (c == 0) return;
    auto& slot = c_[alpha];
    slot += c;
    if (slot == 0) c_.erase(alpha);
  }

  Rational at(const std::vector<int>& alpha) const {
    auto it = c_.find(alpha);
    return it == c_.end() ? Rational(0) : it->second;
  }

  friend MultiJet operator*(const MultiJet& x, const MultiJet& y) {
    MultiJet out(x.r_, x.degree_);
    for (const auto& [a, ca] : x.c_)
      for (const auto& [b, cb] : y.c_) {
        std::vector<int> s = a;
        int total = 0;
        for (std::size_t k = 0; k < s.size(); ++k) total += (s[k] += b[k]);
        if (static_cast<std::size_t>(total) <= x.degree_) out.add(s, ca * cb);
      }
    return out;
  }

  MultiJet inverse() const {
    const Rational c0 = at(std::vector<int>(r_, 0));
    if (c0 == 0) throw Error(ErrorKind::InvalidArgument, "jet with zero constant term is not invertible");
    MultiJet nil(*this);
    nil.c_.erase(std::vector<int>(r_, 0));
    for (auto& [a, c] : nil.c_) c /= -c0;
    MultiJet one(r_, degree_);
    one.add(std::vector<int>(r_, 0), 1);
    MultiJet sum = one, power = one;
    for (std::size_t k = 1; k <= degree_; ++k) {
      power = power * nil;
      for (const auto& [a, c] : power.c_) sum.add(a, c);
    }
    for (auto& [a, c] : sum.c_) c /= c0;
    return sum;
  }

 private:
  std::size_t r_;
  std::size_t degree_;
  std::map<std::vector<int>, Rational> c_;
};

// Multi-indices of total degree <= degree, by degree and then with earlier
// parameters first.
std::vector<std::vector<int>> graded_indices(std::size_t r, std::size_t degree) {
  std::vector<std::vector<int>> out;
  for (std::size_t d = 0; d <= degree; ++d) {
    std::vector<int> a(r, 0);
    auto rec = [&](auto&& self, std::size_t k, int left) -> void {
      if (k + 1 == r) {
        a[k] = left;
        out.push_back(a);
        return;
      }
      for (int v = left; v >= 0; --v) {
        a[k] = v;
        self(self, k + 1, left - v);
      }
    };
    if (r == 0) {
      if (d == 0) out.emplace_back();
      continue;
    }
    rec(rec, 0, static_cast<int>(d));
  }
  return out;
}

bool dominated(const std::vector<int>& b, const std::vector<int>& a) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (b[k] > a[k]) return false;
  return true;
}

// Exact solution of the square system A x = rhs, or nullopt if singular.
std::optional<RationalVector> solve_square(std::vector<RationalVector> m, RationalVector rhs) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
  return rhs;
}

std::vector<ExactSeries> empty_kernel_monomials(const tautsys::SystemSpec& spec, long long order) {
  const auto& a = spec.a;
  if (a.num_rows() != a.num_points() || spec.beta.size() != a.num_rows()) return {};
  std::vector<RationalVector> m(a.num_rows(), RationalVector(a.num_points()));
  RationalVector rhs(a.num_rows());
  for (std::size_t r = 0; r < a.num_rows(); ++r) {
    for (std::size_t c = 0; c < a.num_points(); ++c) m[r][c] = a.at(r, c);
    rhs[r] = -spec.beta[r];
  }
  const auto gamma = solve_square(std::move(m), std::move(rhs));
  if (!gamma) return {};
  for (const auto& g : *gamma)
    if (g < -order || g > order) return {};
  return {monomial_series(*gamma, 1, order)};
}

// Null space of a dense matrix; one vector per free column, with a 1 there.
std::vector<RationalVector> null_space(std::vector<RationalVector> m, std::size_t cols) {
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    const Rational inv = 1 / m[row][c];
    for (std::size_t k = c; k < cols; ++k) m[row][k] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    pivot_cols.push_back(c);
    ++row;
  }
  std::vector<RationalVector> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), f) != pivot_cols.end()) continue;
    RationalVector x(cols);
    x[f] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) x[pivot_cols[r]] = -m[r][f];
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

std::vector<long double> reciprocal_gamma_jet(const Rational& x0, long double d, std::size_t order) {
  std::vector<long double> t(order + 1, 0.0L);
  if (is_integer(x0) && x0 <= 0) {
    // 1/Gamma(-m + t) = (-1)^m Gamma(1 + m - t) sin(pi t) / pi
    const long long m = static_cast<long long>(-numerator(x0));
    const long double base = static_cast<long double>(m) + 1.0L;
    std::vector<long double> f(order + 1, 0.0L);
    long double fact = 1;
    for (std::size_t k = 1; k <= order; ++k) {
      fact *= static_cast<long double>(k);
      f[k] = polygamma_at(k - 1, base) * ((k % 2) ? -1.0L : 1.0L) / fact;
    }
    std::vector<long double> g = jet_exp(f);
    const long double gm = boost::math::tgamma(base);
    for (auto& x : g) x *= gm;
    std::vector<long double> s(order + 1, 0.0L);
    const long double pi = boost::math::constants::pi<long double>();
    long double term = 1;  // pi^(2j) / (2j+1)!
    for (std::size_t j = 0; 2 * j + 1 <= order; ++j) {
      if (j > 0) term *= pi * pi / static_cast<long double>((2 * j) * (2 * j + 1));
      s[2 * j + 1] = (j % 2 ? -term : term);
    }
    t = jet_mul(g, s);
    if (m % 2) for (auto& x : t) x = -x;
  } else {
    const long double x = to_long_double(x0);
    std::vector<long double> f(order + 1, 0.0L);
    long double fact = 1;
    for (std::size_t k = 1; k <= order; ++k) {
      fact *= static_cast<long double>(k);
      f[k] = -polygamma_at(k - 1, x) / fact;
    }
    t = jet_exp(f);
    const long double rg = 1.0L / boost::math::tgamma(x);
    for (auto& v : t) v *= rg;
  }
  long double dk = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    t[k] *= dk;
    dk *= d;
  }
  return t;
}

std::vector<NumericSeries> gamma_series(const tautsys::SystemSpec& spec, const GammaBase& gamma, long long order) {
  const std::size_t p = spec.nvars();
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "negative truncation order");
  if (gamma.base.size() != p || (!gamma.direction.empty() && gamma.direction.size() != p))
    throw Error(ErrorKind::VariableMismatch, "exponent base has the wrong length");
  const RationalVector image = spec.a.apply(std::span<const Rational>(gamma.base));
  for (std::size_t r = 0; r < image.size(); ++r)
    if (image[r] != -spec.beta[r]) throw Error(ErrorKind::DegreeViolation, "A gamma differs from -beta");
  RationalVector direction = gamma.direction.empty() ? RationalVector(p) : gamma.direction;
  for (const auto& x : spec.a.apply(std::span<const Rational>(direction)))
    if (x != 0) throw Error(ErrorKind::DegreeViolation, "deformation direction leaves the kernel of A");

  const std::size_t jet = gamma.jet_order;
  std::vector<long double> d(p);
  for (std::size_t i = 0; i < p; ++i) d[i] = to_long_double(direction[i]);
  const auto logs = exponential_log_powers(d, jet);

  std::vector<NumericSeries> out(jet + 1);
  for (auto& s : out) {
    s.gamma = gamma.base;
    s.truncation = order;
  }
  const auto kernel = lattice::integer_kernel(spec.a);
  for (const auto& l : lattice_points(kernel.vectors, p, 2 * order)) {
    std::vector<long double> coef(jet + 1, 0.0L);
    coef[0] = 1;
    for (std::size_t i = 0; i < p; ++i)
      coef = jet_mul(coef, reciprocal_gamma_jet(gamma.base[i] + l[i] + 1, d[i], jet));
    for (std::size_t k = 0; k <= jet; ++k)
      for (std::size_t q = 0; q <= k; ++q) {
        if (coef[k - q] == 0) continue;
        for (const auto& [m, e] : logs[q]) out[k].add(SeriesKey{l, m}, coef[k - q] * e);
      }
  }
  return out;
}

std::vector<ExactSeries> frobenius_basis(const tautsys::SystemSpec& spec, long long order,
                                         const FrobeniusOptions& options) {
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "negative truncation order");
  const auto& a = spec.a;
  const std::size_t p = spec.nvars();
  const auto kernel = lattice::integer_kernel(a);
  const std::size_t r = kernel.vectors.size();
  if (r == 0) return empty_kernel_monomials(spec, order);
  if (r > options.max_kernel_rank)
    throw Error(ErrorKind::UnsupportedFamily, "kernel rank " + std::to_string(r) + " exceeds the cap " +
                                                  std::to_string(options.max_kernel_rank));
  if (spec.beta != tautsys::calabi_yau_beta(a))
    throw Error(ErrorKind::UnsupportedFamily, "series basis needs beta = (1, 0, ..., 0)");
  const int origin = a.origin_index();
  if (origin < 0) throw Error(ErrorKind::UnsupportedFamily, "series basis needs the origin among the points");
  const std::size_t i0 = static_cast<std::size_t>(origin);
  const std::size_t degree = options.jet_degree ? options.jet_degree : static_cast<std::size_t>(a.dim());

  RationalVector gamma0(p);
  gamma0[i0] = -1;
  IntVector weight(p, 0);
  weight[i0] = -1;

  std::vector<IntVector> cone;
  for (auto& l : lattice_points(kernel.vectors, p, 2 * order)) {
    bool inside = -l[i0] <= order;
    for (std::size_t i = 0; i < p && inside; ++i)
      if (i != i0 && l[i] < 0) inside = false;
    if (inside) cone.push_back(std::move(l));
  }

  // x_i(eps) = gamma0_i + sum_j eps_j D_ji
  std::vector<std::vector<Rational>> slopes(p, std::vector<Rational>(r));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < r; ++j) slopes[i][j] = kernel.vectors[j][i];

  std::vector<MultiJet> rho;
  rho.reserve(cone.size());
  for (const auto& l : cone) {
    MultiJet num = MultiJet::linear(1, std::vector<Rational>(r), degree);
    MultiJet den = num;
    for (std::size_t i = 0; i < p; ++i) {
      for (long long t = 0; t < -l[i]; ++t) num = num * MultiJet::linear(gamma0[i] - t, slopes[i], degree);
      for (long long t = 1; t <= l[i]; ++t) den = den * MultiJet::linear(gamma0[i] + t, slopes[i], degree);
    }
    rho.push_back(num * den.inverse());
  }

  // exp(sum_j eps_j L_j) with L_j = sum_i D_ji log a_i, coefficient of eps^beta.
  const auto alphas = graded_indices(r, degree);
  std::vector<std::vector<LogPolynomial<Rational>>> powers(r);
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<Rational> dj(p);
    for (std::size_t i = 0; i < p; ++i) dj[i] = kernel.vectors[j][i];
    powers[j] = exponential_log_powers(dj, degree);
  }
  std::vector<LogPolynomial<Rational>> exp_coeff;
  for (const auto& beta : alphas) {
    LogPolynomial<Rational> e;
    e[std::vector<int>(p, 0)] = 1;
    for (std::size_t j = 0; j < r; ++j) e = multiply(e, powers[j][static_cast<std::size_t>(beta[j])]);
    exp_coeff.push_back(std::move(e));
  }

  std::vector<ExactSeries> candidates;
  for (const auto& alpha : alphas) {
    ExactSeries s;
    s.gamma = gamma0;
    s.truncation = order;
    s.order_weight = weight;
    for (std::size_t c = 0; c < cone.size(); ++c)
      for (std::size_t b = 0; b < alphas.size(); ++b) {
        const auto& beta = alphas[b];
        if (!dominated(beta, alpha)) continue;
        std::vector<int> rest = alpha;
        for (std::size_t k = 0; k < r; ++k) rest[k] -= beta[k];
        const Rational rc = rho[c].at(rest);
        if (rc == 0) continue;
        for (const auto& [m, e] : exp_coeff[b]) s.add(SeriesKey{cone[c], m}, rc * e);
      }
    candidates.push_back(std::move(s));
  }

  // Combinations of candidates whose trustworthy residuals all vanish.
  std::map<std::pair<std::size_t, SeriesKey>, RationalVector> rows;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto report = annihilate_check(spec, candidates[c]);
    for (std::size_t o = 0; o < report.operators.size(); ++o)
      for (const auto& [key, value] : report.operators[o].guaranteed.terms) {
        auto& row = rows[{o, key}];
        if (row.empty()) row.resize(candidates.size());
        row[c] = value;
      }
  }
  std::vector<RationalVector> matrix;
  matrix.reserve(rows.size());
  for (auto& [key, row] : rows) matrix.push_back(std::move(row));

  std::vector<ExactSeries> basis;
  for (const auto& x : null_space(std::move(matrix), candidates.size())) {
    ExactSeries s;
    s.gamma = gamma0;
    s.truncation = order;
    s.order_weight = weight;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (x[c] == 0) continue;
      for (const auto& [key, value] : candidates[c].terms) s.add(key, value * x[c]);
    }
    basis.push_back(std::move(s));
    if (count_independent(basis) < basis.size()) basis.pop_back();
  }
  return basis;
}

}  // namespace gkz::series
