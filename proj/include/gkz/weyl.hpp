#pragma once

#include "gkz/rational.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gkz::weyl {

/// Truncated polynomial c0 + c1 e + ... + cJ e^J in one formal parameter e.
class Jet {
 public:
  explicit Jet(std::size_t order = 0) : c_(order + 1) {}
  Jet(Rational constant, std::size_t order) : c_(order + 1) { c_[0] = std::move(constant); }

  std::size_t order() const noexcept { return c_.size() - 1; }
  const Rational& operator[](std::size_t k) const { return c_[k]; }
  Rational& operator[](std::size_t k) { return c_[k]; }
  const std::vector<Rational>& coefficients() const noexcept { return c_; }

  bool is_zero() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Rational& s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, const Rational& s) { return a *= s; }
  Jet operator-() const;

  bool operator==(const Jet&) const = default;

 private:
  std::vector<Rational> c_;
};

/// a^u d^w with u the exponents of the coordinates and w of the derivatives.
struct Monomial {
  std::vector<int> u;
  std::vector<int> w;

  int order() const;  // total derivative degree
  auto operator<=>(const Monomial&) const = default;
};

/// Element of the Weyl algebra in a_1..a_p with e-jet coefficients, stored in
/// normal order (all a's left of all d's). Terms are kept in descending
/// lexicographic order of (u, w); zero coefficients are never stored.
class WeylElement {
 public:
  using TermMap = std::map<Monomial, Jet, std::greater<>>;

  explicit WeylElement(std::size_t nvars, std::size_t jet_order = 0);

  static WeylElement constant(std::size_t nvars, const Rational& c, std::size_t jet_order = 0);
  static WeylElement coordinate(std::size_t nvars, std::size_t i, std::size_t jet_order = 0);
  static WeylElement derivative(std::size_t nvars, std::size_t i, std::size_t jet_order = 0);
  static WeylElement monomial(Monomial m, Jet coefficient);

  /// Normal-ordered product of a word of generators read left to right.
  struct Factor {
    bool is_derivative;
    std::size_t var;
  };
  static WeylElement from_word(std::size_t nvars, std::span<const Factor> word, std::size_t jet_order = 0);

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t jet_order() const noexcept { return jet_order_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Highest total derivative degree; 0 for the zero element.
  int order() const;

  /// Adds c * m, dropping the term if it cancels.
  void add_term(const Monomial& m, const Jet& c);

  WeylElement& operator+=(const WeylElement& o);
  WeylElement& operator-=(const WeylElement& o);
  WeylElement& operator*=(const Rational& s);
  friend WeylElement operator+(WeylElement x, const WeylElement& y) { return x += y; }
  friend WeylElement operator-(WeylElement x, const WeylElement& y) { return x -= y; }
  friend WeylElement operator*(WeylElement x, const Rational& s) { return x *= s; }
  WeylElement operator-() const;

  bool operator==(const WeylElement&) const = default;

  /// Rebuilds the element from its terms by multiplying out each monomial
  /// word; the identity on well-formed elements.
  WeylElement renormalized() const;

  /// Canonical text, e.g. "a1^2 d1^2 + a1 d1". Labels replace the default
  /// 1-based variable suffixes.
  std::string render(std::span<const std::string> labels = {}) const;

 private:
  void check_compatible(const WeylElement& o) const;

  std::size_t nvars_;
  std::size_t jet_order_;
  TermMap terms_;
};

/// Normal-ordered product. Throws Error(VariableMismatch) on incompatible
/// variable counts or jet orders.
WeylElement multiply(const WeylElement& x, const WeylElement& y);
inline WeylElement operator*(const WeylElement& x, const WeylElement& y) { return multiply(x, y); }

WeylElement commutator(const WeylElement& x, const WeylElement& y);

/// d^{l+} - d^{l-} for l = l+ - l-.
WeylElement fourier_box(std::span<const long long> ell, std::size_t jet_order = 0);

std::string render_jet(const Jet& c);

}  // namespace gkz::weyl
