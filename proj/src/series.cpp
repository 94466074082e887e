#include "gkz/series.hpp"

#include "gkz/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace gkz::series {

using weyl::WeylElement;

namespace {

long double magnitude(const Rational& r) { return std::fabs(to_long_double(r)); }
long double magnitude(long double x) { return std::fabs(x); }
long double as_long_double(const Rational& r) { return to_long_double(r); }
long double as_long_double(long double x) { return x; }

template <class T>
T from_rational(const Rational& r);
template <>
Rational from_rational<Rational>(const Rational& r) { return r; }
template <>
long double from_rational<long double>(const Rational& r) { return to_long_double(r); }

std::string value_text(const Rational& r) { return to_string(r); }
std::string value_text(long double x) {
  std::ostringstream out;
  out << std::setprecision(18) << x;
  return out.str();
}

template <class V>
std::string bracket(const V& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_same_v<std::decay_t<decltype(v[i])>, Rational>)
      s += to_string(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s + "]";
}

// d^w applied to prod_i a_i^delta_i (log a_i)^m_i, one variable at a time:
// each entry is (log power, coefficient) of a_i^(delta_i - w_i) (log a_i)^k.
using LogTerms = std::vector<std::pair<int, Rational>>;

LogTerms differentiate(const Rational& delta, int m, int w) {
  LogTerms cur{{m, Rational(1)}};
  for (int step = 0; step < w; ++step) {
    const Rational exponent = delta - step;
    std::map<int, Rational> next;
    for (const auto& [k, c] : cur) {
      if (exponent != 0) next[k] += c * exponent;
      if (k > 0) next[k - 1] += c * k;
    }
    cur.clear();
    for (auto& [k, c] : next)
      if (c != 0) cur.emplace_back(k, std::move(c));
  }
  return cur;
}

template <class T>
void expand(const std::vector<LogTerms>& factors, std::size_t i, std::vector<int>& logs, const Rational& c,
            const IntVector& offset, const T& value, LogSeries<T>& out) {
  if (i == factors.size()) {
    out.add(SeriesKey{offset, logs}, value * from_rational<T>(c));
    return;
  }
  for (const auto& [k, ck] : factors[i]) {
    logs[i] = k;
    expand(factors, i + 1, logs, c * ck, offset, value, out);
  }
}

template <class T>
LogSeries<T> empty_copy(const LogSeries<T>& s) {
  LogSeries<T> r;
  r.gamma = s.gamma;
  r.truncation = s.truncation;
  r.order_weight = s.order_weight;
  return r;
}

// Rank of a dense matrix by Gaussian elimination.
std::size_t exact_rank(std::vector<std::vector<Rational>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

std::size_t numeric_rank(std::vector<std::vector<long double>> m, long double rel_tol) {
  long double scale = 0;
  for (const auto& row : m)
    for (long double x : row) scale = std::max(scale, std::fabs(x));
  if (scale == 0) return 0;
  const long double tol = rel_tol * scale;
  std::size_t rank = 0;
  const std::size_t cols = m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    for (std::size_t r = rank + 1; r < m.size(); ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (std::fabs(m[piv][c]) <= tol) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      const long double f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

template <class T>
std::vector<std::vector<T>> coefficient_matrix(std::span<const LogSeries<T>> series) {
  using Column = std::pair<RationalVector, std::vector<int>>;
  std::map<Column, std::size_t> columns;
  for (const auto& s : series)
    for (const auto& [key, value] : s.terms) {
      RationalVector e = s.gamma;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += key.offset[i];
      columns.emplace(Column{std::move(e), key.logs}, 0);
    }
  std::size_t idx = 0;
  for (auto& [col, i] : columns) i = idx++;
  std::vector<std::vector<T>> m(series.size(), std::vector<T>(columns.size(), T(0)));
  for (std::size_t r = 0; r < series.size(); ++r)
    for (const auto& [key, value] : series[r].terms) {
      RationalVector e = series[r].gamma;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += key.offset[i];
      m[r][columns.at(Column{std::move(e), key.logs})] = value;
    }
  return m;
}

}  // namespace

template <class T>
long long LogSeries<T>::order_of(std::span<const long long> l) const {
  long long s = 0;
  if (order_weight) {
    for (std::size_t i = 0; i < l.size(); ++i) s += (*order_weight)[i] * l[i];
    return s;
  }
  for (long long x : l) s += x < 0 ? -x : x;
  return s / 2;
}

template <class T>
void LogSeries<T>::add(const SeriesKey& key, const T& value) {
  if (value == T(0)) return;
  auto [it, inserted] = terms.try_emplace(key, value);
  if (inserted) return;
  it->second += value;
  if (it->second == T(0)) terms.erase(it);
}

template <class T>
LogSeries<T> apply(const WeylElement& op, const LogSeries<T>& s) {
  const std::size_t p = s.nvars();
  if (op.nvars() != p) throw Error(ErrorKind::VariableMismatch, "operator and series variable counts differ");
  LogSeries<T> out = empty_copy(s);
  for (const auto& [mono, jet] : op.terms()) {
    for (std::size_t k = 1; k <= jet.order(); ++k)
      if (jet[k] != 0) throw Error(ErrorKind::InvalidArgument, "operator coefficients must be constant in eps");
    const Rational& c = jet[0];
    for (const auto& [key, value] : s.terms) {
      std::vector<LogTerms> factors(p);
      bool vanishes = false;
      for (std::size_t i = 0; i < p && !vanishes; ++i) {
        factors[i] = differentiate(s.gamma[i] + key.offset[i], key.logs[i], mono.w[i]);
        vanishes = factors[i].empty();
      }
      if (vanishes) continue;
      IntVector offset = key.offset;
      for (std::size_t i = 0; i < p; ++i) offset[i] += mono.u[i] - mono.w[i];
      std::vector<int> logs(p, 0);
      expand(factors, 0, logs, c, offset, value, out);
    }
  }
  return out;
}

template <class T>
ResidualReport<T> annihilate_check(const tautsys::SystemSpec& spec, const LogSeries<T>& s, long double tolerance) {
  if (spec.nvars() != s.nvars()) throw Error(ErrorKind::VariableMismatch, "system and series variable counts differ");
  ResidualReport<T> report;
  for (const auto& op : spec.operators) {
    if (op.op.order() > s.truncation)
      throw Error(ErrorKind::TruncationTooSmall, "operator order " + std::to_string(op.op.order()) +
                                                     " exceeds truncation " + std::to_string(s.truncation));
    OperatorResidual<T> r;
    r.residual = apply(op.op, s);
    r.guaranteed = empty_copy(s);
    for (const auto& [key, value] : r.residual.terms) {
      // A residual coefficient is trustworthy when no term of the untruncated
      // series beyond the truncation can contribute to it.
      bool safe = true;
      for (const auto& [mono, jet] : op.op.terms()) {
        IntVector src = key.offset;
        for (std::size_t i = 0; i < src.size(); ++i) src[i] += mono.w[i] - mono.u[i];
        const IntVector image = spec.a.apply(src);
        const bool in_lattice = std::all_of(image.begin(), image.end(), [](long long x) { return x == 0; });
        if (in_lattice && s.order_of(src) > s.truncation) {
          safe = false;
          break;
        }
      }
      if (!safe) continue;
      r.guaranteed.terms.emplace(key, value);
      const long double mag = magnitude(value);
      r.max_abs = std::max(r.max_abs, mag);
      if (mag > tolerance) r.clean = false;
    }
    report.operators.push_back(std::move(r));
  }
  return report;
}

std::size_t count_independent(std::span<const ExactSeries> series) {
  return exact_rank(coefficient_matrix(series));
}

std::size_t count_independent(std::span<const NumericSeries> series, long double rel_tol) {
  return numeric_rank(coefficient_matrix(series), rel_tol);
}

std::vector<IntVector> lattice_points(const std::vector<IntVector>& basis, std::size_t p, long long bound) {
  std::vector<IntVector> out;
  std::vector<std::size_t> pivots;
  for (const auto& b : basis) {
    std::size_t c = 0;
    while (c < p && b[c] == 0) ++c;
    if (c == p || b[c] < 0) throw Error(ErrorKind::InvalidArgument, "basis is not in echelon form");
    if (!pivots.empty() && c <= pivots.back()) throw Error(ErrorKind::InvalidArgument, "basis is not in echelon form");
    pivots.push_back(c);
  }
  IntVector cur(p, 0);
  auto floor_div = [](long long a, long long b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); };
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == basis.size()) {
      long long norm = 0;
      for (long long x : cur) norm += x < 0 ? -x : x;
      if (norm <= bound) out.push_back(cur);
      return;
    }
    const long long piv = basis[j][pivots[j]];
    const long long s = cur[pivots[j]];
    const long long lo = -floor_div(bound + s, piv);
    const long long hi = floor_div(bound - s, piv);
    for (long long k = lo; k <= hi; ++k) {
      for (std::size_t i = 0; i < p; ++i) cur[i] += k * basis[j][i];
      self(self, j + 1);
      for (std::size_t i = 0; i < p; ++i) cur[i] -= k * basis[j][i];
    }
  };
  rec(rec, 0);
  return out;
}

template <class T>
std::complex<double> evaluate(const LogSeries<T>& s, std::span<const std::complex<double>> a) {
  using C = std::complex<long double>;
  if (a.size() != s.nvars()) throw Error(ErrorKind::VariableMismatch, "point has the wrong number of coordinates");
  std::vector<C> logs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) throw Error(ErrorKind::InvalidArgument, "series evaluated on a coordinate hyperplane");
    logs[i] = std::log(C(a[i].real(), a[i].imag()));
  }
  C total = 0;
  for (const auto& [key, value] : s.terms) {
    C exponent = 0;
    C term = as_long_double(value);
    for (std::size_t i = 0; i < logs.size(); ++i) {
      exponent += to_long_double(s.gamma[i] + key.offset[i]) * logs[i];
      for (int k = 0; k < key.logs[i]; ++k) term *= logs[i];
    }
    total += term * std::exp(exponent);
  }
  return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

template <class T>
std::string render(const LogSeries<T>& s) {
  std::vector<const std::pair<const SeriesKey, T>*> order;
  for (const auto& entry : s.terms) order.push_back(&entry);
  std::stable_sort(order.begin(), order.end(), [&](auto* x, auto* y) {
    const long long ox = s.order_of(x->first.offset), oy = s.order_of(y->first.offset);
    if (ox != oy) return ox < oy;
    return x->first < y->first;
  });
  std::string out = "gamma " + bracket(s.gamma) + " order " + std::to_string(s.truncation) + " terms " +
                    std::to_string(s.terms.size()) + "\n";
  for (auto* entry : order)
    out += "  " + bracket(entry->first.offset) + " log" + bracket(entry->first.logs) + " " +
           value_text(entry->second) + "\n";
  return out;
}

ExactSeries monomial_series(const RationalVector& gamma, const Rational& c, long long truncation) {
  ExactSeries s;
  s.gamma = gamma;
  s.truncation = truncation;
  s.add(SeriesKey{IntVector(gamma.size(), 0), std::vector<int>(gamma.size(), 0)}, c);
  return s;
}

template struct LogSeries<Rational>;
template struct LogSeries<long double>;
template LogSeries<Rational> apply(const WeylElement&, const LogSeries<Rational>&);
template LogSeries<long double> apply(const WeylElement&, const LogSeries<long double>&);
template ResidualReport<Rational> annihilate_check(const tautsys::SystemSpec&, const LogSeries<Rational>&,
                                                   long double);
template ResidualReport<long double> annihilate_check(const tautsys::SystemSpec&, const LogSeries<long double>&,
                                                      long double);
template std::complex<double> evaluate(const LogSeries<Rational>&, std::span<const std::complex<double>>);
template std::complex<double> evaluate(const LogSeries<long double>&, std::span<const std::complex<double>>);
template std::string render(const LogSeries<Rational>&);
template std::string render(const LogSeries<long double>&);

}  // namespace gkz::series
