#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gkz/error.hpp"
#include "gkz/weyl.hpp"

#include <random>

using namespace gkz;
using namespace gkz::weyl;

namespace {

WeylElement a(std::size_t n, std::size_t i) { return WeylElement::coordinate(n, i); }
WeylElement d(std::size_t n, std::size_t i) { return WeylElement::derivative(n, i); }
WeylElement one(std::size_t n) { return WeylElement::constant(n, 1); }

WeylElement random_element(std::mt19937& rng, std::size_t nvars, std::size_t jet_order) {
  std::uniform_int_distribution<int> exp(0, 2), coef(-3, 3), nterms(1, 3);
  WeylElement x(nvars, jet_order);
  const int k = nterms(rng);
  for (int t = 0; t < k; ++t) {
    Monomial m{std::vector<int>(nvars), std::vector<int>(nvars)};
    for (auto& e : m.u) e = exp(rng);
    for (auto& e : m.w) e = exp(rng);
    Jet c(jet_order);
    for (std::size_t j = 0; j <= jet_order; ++j) c[j] = Rational(coef(rng), 1 + std::abs(coef(rng)));
    x.add_term(m, c);
  }
  return x;
}

// Action of a one-variable operator on a^k: sum_c c * k(k-1)..(k-w+1) a^{k-w+u}.
// Returns the coefficient map exponent -> value.
std::map<long long, Rational> act_on_power(const WeylElement& op, long long k) {
  std::map<long long, Rational> out;
  for (const auto& [m, c] : op.terms()) {
    Rational falling = 1;
    for (int j = 0; j < m.w[0]; ++j) falling *= (k - j);
    out[k - m.w[0] + m.u[0]] += c[0] * falling;
  }
  return out;
}

}  // namespace

TEST_CASE("canonical commutation relation") {
  CHECK(d(1, 0) * a(1, 0) == a(1, 0) * d(1, 0) + one(1));
  CHECK((d(1, 0) * a(1, 0)).render() == "a1 d1 + 1");
}

TEST_CASE("square of the Euler operator in one variable") {
  const WeylElement theta = a(1, 0) * d(1, 0);
  const WeylElement sq = theta * theta;
  CHECK(sq.render() == "a1^2 d1^2 + a1 d1");
  // Independent check: theta^2 acts on a^k as k^2.
  for (long long k = -3; k <= 5; ++k) {
    const auto img = act_on_power(sq, k);
    CHECK(img.size() == 1);
    CHECK(img.begin()->first == k);
    CHECK(img.begin()->second == k * k);
  }
}

TEST_CASE("identity and zero") {
  std::mt19937 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_element(rng, 3, 1);
    const auto unit = WeylElement::constant(3, 1, 1);
    CHECK(unit * x == x);
    CHECK(x * unit == x);
    CHECK((x - x).is_zero());
  }
}

TEST_CASE("generator commutators") {
  const std::size_t n = 3;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto c = commutator(d(n, i), a(n, j));
      if (i == j) CHECK(c == one(n));
      else CHECK(c.is_zero());
      CHECK(commutator(a(n, i), a(n, j)).is_zero());
      CHECK(commutator(d(n, i), d(n, j)).is_zero());
    }
  CHECK(commutator(a(2, 0) * d(2, 0), a(2, 1) * d(2, 1)).is_zero());
}

TEST_CASE("Euler operator lowers a box by its degree") {
  const std::size_t n = 3;
  const long long ell[] = {1, -2, 1};
  const auto box = fourier_box(ell);
  CHECK(box.render() == "d1 d3 - d2^2");
  WeylElement euler(n);
  for (std::size_t i = 0; i < n; ++i) euler += a(n, i) * d(n, i);
  CHECK(commutator(euler, box) == box * Rational(-2));
}

TEST_CASE("fourier box splits positive and negative parts") {
  const long long hesse[] = {-3, 1, 1, 1};
  const std::size_t n = 4;
  CHECK(fourier_box(hesse) == d(n, 1) * d(n, 2) * d(n, 3) - d(n, 0) * d(n, 0) * d(n, 0));
  CHECK(fourier_box(hesse).render() == "-d1^3 + d2 d3 d4");
  const long long zero[] = {0, 0, 0};
  CHECK(fourier_box(zero).is_zero());
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> e(-3, 3);
  for (int t = 0; t < 20; ++t) {
    std::vector<long long> l(4), m(4);
    for (std::size_t i = 0; i < 4; ++i) {
      l[i] = e(rng);
      m[i] = -l[i];
    }
    CHECK((fourier_box(l) + fourier_box(m)).is_zero());
  }
}

TEST_CASE("multiplication is associative on random triples") {
  std::mt19937 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_element(rng, 2, 1);
    const auto y = random_element(rng, 2, 1);
    const auto z = random_element(rng, 2, 1);
    CHECK((x * y) * z == x * (y * z));
  }
}

TEST_CASE("normal ordering is idempotent") {
  std::mt19937 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto x = random_element(rng, 3, 2);
    CHECK(x.renormalized() == x);
  }
  const WeylElement::Factor word[] = {{true, 0}, {true, 0}, {false, 0}, {false, 0}};
  // d^2 a^2 = a^2 d^2 + 4 a d + 2
  CHECK(WeylElement::from_word(1, word).render() == "a1^2 d1^2 + 4 a1 d1 + 2");
}

TEST_CASE("jet coefficients render with explicit eps powers") {
  Jet c(2);
  c[0] = 1;
  c[1] = Rational(-1, 2);
  c[2] = 3;
  CHECK(render_jet(c) == "1 - 1/2 eps + 3 eps^2");
  Monomial m{{1, 0}, {1, 0}};
  auto x = WeylElement::monomial(m, c);
  CHECK(x.render() == "(1 - 1/2 eps + 3 eps^2) a1 d1");
  Jet e(2);
  e[1] = -2;
  x = WeylElement::monomial(m, e) + WeylElement::constant(2, Rational(3, 4), 2);
  CHECK(x.render() == "-2 eps a1 d1 + 3/4");
  const std::string labels[] = {"1", "0"};
  CHECK(x.render(labels) == "-2 eps a1 d1 + 3/4");
}

TEST_CASE("incompatible operands are rejected") {
  try {
    (void)(a(2, 0) * a(3, 0));
    FAIL("expected VariableMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VariableMismatch);
  }
  CHECK_THROWS_AS((void)(WeylElement::constant(2, 1, 0) + WeylElement::constant(2, 1, 1)), Error);
}
