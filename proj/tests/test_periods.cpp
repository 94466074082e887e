#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gkz/error.hpp"
#include "gkz/periods.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <random>

using namespace gkz;
using namespace gkz::periods;

namespace {

constexpr double kPi = 3.14159265358979323846;

lattice::ExponentMatrix p1_matrix() { return lattice::homogenize({{-1}, {0}, {1}}, 1); }
lattice::ExponentMatrix hesse_matrix() { return lattice::homogenize({{0, 0}, {1, 0}, {0, 1}, {-1, -1}}, 2); }

SectionData p1_section(Complex cm, Complex c0, Complex c1) { return SectionData{p1_matrix(), {cm, c0, c1}, {}, {}}; }

ChainSpec zero_to_infinity() {
  Segment ray;
  ray.kind = SegmentKind::Ray;
  ray.points = {0.0, 1.0};
  ray.start = Boundary::Zero;
  ray.end = Boundary::Infinity;
  return ChainSpec{{ray}};
}

ChainSpec circle(Complex center, double radius) {
  Segment arc;
  arc.kind = SegmentKind::Arc;
  arc.points = {center, center + radius};
  arc.sweep = 2 * kPi;
  return ChainSpec{{arc}};
}

// Constant term of 1/f by brute-force expansion of sum_k (-(sum_{i != i0} a_i x^mu_i)/a_i0)^k:
// exponent-count multi-index -> coefficient.
std::map<std::vector<int>, Rational> constant_term_oracle(const lattice::ExponentMatrix& a, std::size_t i0, int order) {
  const std::size_t p = a.num_points();
  const std::size_t n = static_cast<std::size_t>(a.dim());
  std::map<std::vector<int>, Rational> power{{std::vector<int>(p, 0), Rational(1)}};
  std::map<std::vector<int>, Rational> out;
  for (int k = 0; k <= order; ++k) {
    for (const auto& [m, c] : power) {
      std::vector<long long> x(n, 0);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < n; ++j) x[j] += m[i] * a.points()[i][j];
      if (std::all_of(x.begin(), x.end(), [](long long v) { return v == 0; })) out[m] = (k % 2 ? -c : c);
    }
    std::map<std::vector<int>, Rational> next;
    for (const auto& [m, c] : power)
      for (std::size_t i = 0; i < p; ++i) {
        if (i == i0) continue;
        auto mm = m;
        ++mm[i];
        next[mm] += c;
      }
    power = std::move(next);
  }
  return out;
}

double closed_form_131() {
  const double r1 = (-3 + std::sqrt(5.0)) / 2, r2 = (-3 - std::sqrt(5.0)) / 2;
  return std::log(r2 / r1) / (r1 - r2);
}

}  // namespace

TEST_CASE("torus period series matches the brute-force constant-term oracle") {
  for (const auto& [a, i0] : {std::pair{p1_matrix(), std::size_t{1}}, std::pair{hesse_matrix(), std::size_t{0}},
                              std::pair{lattice::homogenize({{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0, 0}}, 2), std::size_t{4}}}) {
    const int order = 8;
    const auto s = torus_period_series(a, std::nullopt, order);
    const auto oracle = constant_term_oracle(a, i0, order);
    CHECK(s.terms.size() == oracle.size());
    for (const auto& [m, c] : oracle) {
      IntVector l(m.begin(), m.end());
      long long total = 0;
      for (auto v : m) total += v;
      l[i0] = -total;
      auto it = s.terms.find(series::SeriesKey{l, std::vector<int>(a.num_points(), 0)});
      REQUIRE(it != s.terms.end());
      CHECK(it->second == c);
    }
  }
}

TEST_CASE("torus period series: named families") {
  const auto p1 = torus_period_series(p1_matrix(), 1, 10);
  for (long long k = 0; 2 * k <= 10; ++k)
    CHECK(p1.terms.at(series::SeriesKey{{k, -2 * k, k}, {0, 0, 0}}) == Rational(binomial(2 * k, k)));
  const auto hesse = torus_period_series(hesse_matrix(), std::nullopt, 9);
  for (long long k = 0; k <= 3; ++k) {
    const Rational mag(factorial(3 * k), factorial(k) * factorial(k) * factorial(k));
    CHECK(abs(hesse.terms.at(series::SeriesKey{{-3 * k, k, k, k}, {0, 0, 0, 0}})) == mag);
  }
  const auto single = torus_period_series(lattice::homogenize({{}}, 0), std::nullopt, 5);
  REQUIRE(single.terms.size() == 1);
  CHECK(single.gamma == RationalVector{-1});
  CHECK(single.terms.begin()->second == 1);
}

TEST_CASE("torus period series is annihilated by the CY system and has degree -1") {
  for (const auto& a : {p1_matrix(), hesse_matrix()}) {
    const auto spec = tautsys::gkz_system(a, tautsys::calabi_yau_beta(a));
    const auto s = torus_period_series(a, std::nullopt, 10);
    CHECK(series::annihilate_check(spec, s).clean());
    for (const auto& [key, c] : s.terms) {
      Rational degree = 0;
      for (std::size_t i = 0; i < key.offset.size(); ++i) degree += s.gamma[i] + key.offset[i];
      CHECK(degree == -1);
    }
  }
}

TEST_CASE("torus period series errors") {
  const auto a = lattice::homogenize({{1}, {2}, {3}}, 1);
  try {
    torus_period_series(a, std::nullopt, 4);
    FAIL("expected NoInteriorMonomial");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoInteriorMonomial);
  }
  CHECK_THROWS_AS(torus_period_series(p1_matrix(), 0, 4), Error);
}

TEST_CASE("cycle integral: trivial, P1 and Hesse against the series") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 5; ++k) {
    const Complex a(u(rng), u(rng));
    const SectionData s{lattice::homogenize({{}}, 0), {a}, {}, {}};
    CHECK(std::abs(numeric_cycle_integral(s, {}).value - 1.0 / a) < 1e-14);
  }

  const auto p1 = torus_period_series(p1_matrix(), std::nullopt, 20);
  const Complex ap1[] = {0.01, 1.0, 0.01};
  const double r1[] = {1.0};
  const auto c1 = numeric_cycle_integral(p1_section(0.01, 1.0, 0.01), r1);
  CHECK(std::abs(c1.value - series::evaluate(p1, ap1)) < 1e-10);

  const auto hs = torus_period_series(hesse_matrix(), std::nullopt, 10);
  const Complex ah[] = {1.0, 0.05, Complex(0.03, 0.01), 0.04};
  const double r2[] = {1.0, 1.0};
  const SectionData sh{hesse_matrix(), {ah[0], ah[1], ah[2], ah[3]}, {}, {}};
  const auto c2 = numeric_cycle_integral(sh, r2);
  CHECK(std::abs(c2.value - series::evaluate(hs, ah)) < 1e-8);
}

TEST_CASE("cycle integral: scaling covariance and singular contours") {
  const double r[] = {1.0};
  const Complex lambda(1.7, -0.4);
  const auto base = numeric_cycle_integral(p1_section(0.2, 1.0, 0.3), r).value;
  const auto scaled = numeric_cycle_integral(p1_section(0.2 * lambda, lambda, 0.3 * lambda), r).value;
  CHECK(std::abs(scaled - base / lambda) < 1e-12);
  // f = x^-1 - 2 + x = (x - 1)^2 / x vanishes at x = 1 on the unit circle.
  try {
    numeric_cycle_integral(p1_section(1.0, -2.0, 1.0), r);
    FAIL("expected SingularOnContour");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularOnContour);
  }
}

TEST_CASE("chain integral from 0 to infinity for (1, 3, 1)") {
  const auto s = p1_section(1.0, 3.0, 1.0);
  const auto r = numeric_chain_integral(s, zero_to_infinity());
  CHECK(std::abs(r.value - closed_form_131()) < 1e-10);
  CHECK(std::abs(r.value - 0.860817881928008) < 1e-12);
  boost::math::quadrature::exp_sinh<long double> oracle;
  const long double q = oracle.integrate([](long double t) { return 1.0L / (1 + 3 * t + t * t); });
  CHECK(std::abs(r.value.real() - static_cast<double>(q)) < 1e-12);
}

TEST_CASE("chain integral: homotopy, reparametrization and scaling") {
  const auto s = p1_section(1.0, 3.0, 1.0);
  const Complex bend(1.0, 1.0);
  Segment line{SegmentKind::Line, {0.0, bend}, 0, Boundary::Zero, Boundary::None, 1};
  Segment ray{SegmentKind::Ray, {bend, 1.0}, 0, Boundary::None, Boundary::Infinity, 1};
  const auto deformed = numeric_chain_integral(s, ChainSpec{{line, ray}}).value;
  CHECK(std::abs(deformed - closed_form_131()) < 1e-10);

  Segment slow = zero_to_infinity().segments[0];
  slow.warp = 3;
  CHECK(std::abs(numeric_chain_integral(s, ChainSpec{{slow}}).value - closed_form_131()) < 1e-10);

  const Complex lambda(0.5, 0.25);
  const auto scaled = numeric_chain_integral(p1_section(lambda, 3.0 * lambda, lambda), zero_to_infinity()).value;
  CHECK(std::abs(scaled - closed_form_131() / lambda) < 1e-10);
}

TEST_CASE("loops, residues and zero-length chains") {
  const auto s = p1_section(1.0, 3.0, 1.0);
  const auto roots = chart_roots(s);
  REQUIRE(roots.size() == 2);
  const Complex res0 = residue_period(s, 0), res1 = residue_period(s, 1);
  CHECK(std::abs(res0 + res1) < 1e-12);
  CHECK(std::abs(numeric_chain_integral(s, circle(roots[1], 0.2)).value - res1) < 1e-10);
  CHECK(std::abs(numeric_chain_integral(s, circle(roots[0], 0.5)).value - res0) < 1e-10);
  CHECK(std::abs(numeric_chain_integral(s, circle(0.0, 0.1)).value) < 1e-12);

  Segment point{SegmentKind::Line, {0.0, 0.0}, 0, Boundary::Zero, Boundary::Zero, 1};
  CHECK(numeric_chain_integral(s, ChainSpec{{point}}).value == Complex(0.0));

  try {
    residue_period(p1_section(1.0, 2.0, 1.0), 0);
    FAIL("expected MultipleRoot");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MultipleRoot);
  }
}

TEST_CASE("chain integral errors") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind_of([] { numeric_chain_integral(p1_section(0.0, 3.0, 1.0), zero_to_infinity()); }) ==
        ErrorKind::DivergentAtBoundary);
  CHECK(kind_of([] { numeric_chain_integral(p1_section(1.0, 3.0, 0.0), zero_to_infinity()); }) ==
        ErrorKind::DivergentAtBoundary);
  Segment through{SegmentKind::Line, {-1.0, Complex(-0.2, 0)}, 0, Boundary::None, Boundary::None, 1};
  CHECK(kind_of([&] { numeric_chain_integral(p1_section(1.0, 3.0, 1.0), ChainSpec{{through}}); }) ==
        ErrorKind::PoleNearPath);
  const SectionData hesse{hesse_matrix(), {1.0, 0.1, 0.1, 0.1}, {}, {}};
  CHECK(kind_of([&] { numeric_chain_integral(hesse, zero_to_infinity()); }) == ErrorKind::UnsupportedDimension);
}

TEST_CASE("general type integrals on O(3) over P1") {
  const auto a = lattice::homogenize({{-1}, {0}, {1}, {2}}, 1);
  const std::vector<Complex> coeffs = {1.0, 2.0, 1.5, 0.5};
  auto section = [&](Complex b0, Complex b1) { return SectionData{a, coeffs, {{0}, {1}}, {b0, b1}}; };
  const auto chain = zero_to_infinity();

  CHECK(general_type_integral(section(0.0, 0.0), chain).value == Complex(0.0));

  boost::math::quadrature::exp_sinh<long double> oracle;
  for (int nu = 0; nu <= 1; ++nu) {
    const long double q = oracle.integrate([&](long double t) {
      return std::pow(t, nu) / (1.0L + 2.0L * t + 1.5L * t * t + 0.5L * t * t * t);
    });
    const auto v = general_type_integral(section(nu == 0 ? 1.0 : 0.0, nu == 1 ? 1.0 : 0.0), chain).value;
    CHECK(std::abs(v - Complex(static_cast<double>(q))) < 1e-9);
  }

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 5; ++k) {
    const Complex b0(u(rng), u(rng)), b1(u(rng), u(rng)), c0(u(rng), u(rng)), c1(u(rng), u(rng));
    const auto sum = general_type_integral(section(b0 + c0, b1 + c1), chain).value;
    const auto parts = general_type_integral(section(b0, b1), chain).value + general_type_integral(section(c0, c1), chain).value;
    CHECK(std::abs(sum - parts) < 1e-9);
  }
  CHECK_THROWS_AS(general_type_integral(SectionData{a, coeffs, {{2}}, {1.0}}, chain), Error);
  CHECK_THROWS_AS(general_type_integral(SectionData{a, coeffs, {{-1}}, {1.0}}, chain), Error);
}

TEST_CASE("central difference weights") {
  const auto w1 = central_weights(1, 2);
  const std::vector<double> e1 = {1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12};
  for (std::size_t i = 0; i < 5; ++i) CHECK(w1[i] == doctest::Approx(e1[i]).epsilon(1e-14));
  const auto w3 = central_weights(3, 3);
  const std::vector<double> e3 = {1.0 / 8, -1, 13.0 / 8, 0, -13.0 / 8, 1, -1.0 / 8};
  for (std::size_t i = 0; i < 7; ++i) CHECK(w3[i] == doctest::Approx(e3[i]).epsilon(1e-14));
  CHECK(central_weights(0, 0) == std::vector<double>{1.0});
}

TEST_CASE("finite differences: 1/a1 solves the unipotent system") {
  const auto spec = tautsys::unipotent_p1_system();
  const auto f = [](std::span<const Complex> a) { return 1.0 / a[0]; };
  const Complex a0[] = {1.0, 0.5, 0.7};
  const auto report = finite_difference_residual(spec, f, a0, 0.01);
  CHECK(report.max_residual() < 1e-10);
  const auto& euler = report.operators[1];
  CHECK(euler.observed_order == doctest::Approx(4.0).epsilon(0.05));

  FiniteDifferenceOptions threaded;
  threaded.threads = 4;
  const auto again = finite_difference_residual(spec, f, a0, 0.01, threaded);
  for (std::size_t k = 0; k < report.operators.size(); ++k) CHECK(again.operators[k].residual == report.operators[k].residual);

  const auto bad = [](std::span<const Complex> a) {
    if (a[0].real() <= 0) throw Error(ErrorKind::InvalidArgument, "outside the chart");
    return 1.0 / a[0];
  };
  const Complex edge[] = {0.01, 0.5, 0.7};
  try {
    finite_difference_residual(spec, bad, edge, 0.01);
    FAIL("expected StencilOutOfDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StencilOutOfDomain);
  }
}

TEST_CASE("finite differences: the 0 -> infinity chain solves the P1 GKZ system") {
  const auto a = p1_matrix();
  const auto spec = tautsys::gkz_system(a, tautsys::calabi_yau_beta(a));
  QuadratureSettings tight;
  tight.tolerance = 1e-14;
  const auto f = [&](std::span<const Complex> x) {
    return numeric_chain_integral(SectionData{a, {x[0], x[1], x[2]}, {}, {}}, zero_to_infinity(), tight).value;
  };
  const Complex a0[] = {1.0, 3.0, 1.0};
  const auto coarse = finite_difference_residual(spec, f, a0, 0.05);
  CHECK(coarse.max_residual() < 1e-6);
  for (const auto& o : coarse.operators)
    if (o.raw[0] > 1e-9) CHECK(o.raw[1] < o.raw[0]);
}

TEST_CASE("finite differences: series evaluation of the torus period") {
  const auto a = hesse_matrix();
  const auto spec = tautsys::gkz_system(a, tautsys::calabi_yau_beta(a));
  const auto s = torus_period_series(a, std::nullopt, 30);
  const auto f = [&](std::span<const Complex> x) { return series::evaluate(s, x); };
  const Complex a0[] = {1.0, 0.1, 0.1, 0.1};
  const auto report = finite_difference_residual(spec, f, a0, 0.01);
  CHECK(report.max_residual() < 1e-8);
}
