#pragma once

// Truncated multivariate series with rational exponents and logarithms:
//   sum c_{l,m} a^(gamma + l) prod_i (log a_i)^m_i
// together with Gamma-series, Frobenius bases and exact annihilation checks.

#include "gkz/tautsys.hpp"

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gkz::series {

struct SeriesKey {
  IntVector offset;     // l
  std::vector<int> logs;  // m
  auto operator<=>(const SeriesKey&) const = default;
};

template <class T>
struct LogSeries {
  RationalVector gamma;
  std::map<SeriesKey, T> terms;
  long long truncation = 0;
  // Truncation measure ord(l) = weight . l; when absent, ord(l) = |l|_1 / 2.
  std::optional<IntVector> order_weight;

  std::size_t nvars() const noexcept { return gamma.size(); }
  long long order_of(std::span<const long long> l) const;
  void add(const SeriesKey& key, const T& value);
};

using ExactSeries = LogSeries<Rational>;
using NumericSeries = LogSeries<long double>;

/// Residual of one operator applied term by term. `clean` covers only the
/// coefficients that every truncated-away source term cannot reach.
template <class T>
struct OperatorResidual {
  LogSeries<T> residual;        // all coefficients, including the frontier
  LogSeries<T> guaranteed;      // restricted to the truncation-safe region
  bool clean = true;
  long double max_abs = 0;      // largest |coefficient| in the safe region
};

template <class T>
struct ResidualReport {
  std::vector<OperatorResidual<T>> operators;
  bool clean() const {
    for (const auto& o : operators)
      if (!o.clean) return false;
    return true;
  }
};

/// Applies op (jet order 0) to s exactly.
template <class T>
LogSeries<T> apply(const weyl::WeylElement& op, const LogSeries<T>& s);

/// Throws Error(TruncationTooSmall) when an operator's order exceeds the
/// truncation, Error(VariableMismatch) on variable-count mismatch.
template <class T>
ResidualReport<T> annihilate_check(const tautsys::SystemSpec& spec, const LogSeries<T>& s,
                                   long double tolerance = 0);

/// Rank of the coefficient matrix over the union of (exponent, log) keys.
std::size_t count_independent(std::span<const ExactSeries> series);
std::size_t count_independent(std::span<const NumericSeries> series, long double rel_tol = 1e-12L);

/// Exponent base gamma0 + eps * direction. An empty direction means a plain base.
struct GammaBase {
  RationalVector base;
  RationalVector direction;
  std::size_t jet_order = 0;
};

/// Coefficients 0..jet_order in eps of the truncated Gamma series
///   sum_{|l|_1/2 <= N} a^(gamma + l) / prod_i Gamma(gamma_i + l_i + 1).
/// Throws Error(DegreeViolation) unless A gamma0 = -beta and A direction = 0.
std::vector<NumericSeries> gamma_series(const tautsys::SystemSpec& spec, const GammaBase& gamma, long long order);

/// Jet of 1/Gamma(x0 + d e) up to e^order.
std::vector<long double> reciprocal_gamma_jet(const Rational& x0, long double d, std::size_t order);

struct FrobeniusOptions {
  std::size_t jet_degree = 0;  // 0: use the torus dimension
  std::size_t max_kernel_rank = 2;
};

/// Basis of series solutions at the large complex structure limit of a CY
/// GKZ system. Exponents are deformed along the kernel directions by formal
/// parameters; candidate solutions are the parameter-jet coefficients of the
/// renormalized Gamma series over the cone l_i >= 0 (i != origin), and the
/// basis is the part of their span the system annihilates.
std::vector<ExactSeries> frobenius_basis(const tautsys::SystemSpec& spec, long long order,
                                         const FrobeniusOptions& options = {});

/// All l in the integer span of an echelon basis with |l|_1 <= bound.
std::vector<IntVector> lattice_points(const std::vector<IntVector>& echelon_basis, std::size_t p, long long bound);

/// Numerical value at a point off the coordinate hyperplanes (principal logs).
template <class T>
std::complex<double> evaluate(const LogSeries<T>& s, std::span<const std::complex<double>> a);

/// Canonical text: the exponent base, then one line per term sorted by
/// (ord(l), l, m).
template <class T>
std::string render(const LogSeries<T>& s);

/// A single monomial c * a^gamma.
ExactSeries monomial_series(const RationalVector& gamma, const Rational& c = 1, long long truncation = 0);

}  // namespace gkz::series
