#include "gkz/periods.hpp"

#include "gkz/error.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

namespace gkz::periods {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
const Complex kTwoPiI(0.0, 2.0 * kPi);

bool is_origin(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

void check_section(const SectionData& s) {
  if (s.coeffs.size() != s.a.num_points())
    throw Error(ErrorKind::VariableMismatch, "coefficient count differs from the number of points");
  if (std::all_of(s.coeffs.begin(), s.coeffs.end(), [](Complex c) { return c == 0.0; }))
    throw Error(ErrorKind::InvalidArgument, "all section coefficients vanish");
  if (s.numerator_points.size() != s.numerator_coeffs.size())
    throw Error(ErrorKind::VariableMismatch, "numerator exponents and coefficients differ in length");
  for (const auto& nu : s.numerator_points)
    if (nu.size() != static_cast<std::size_t>(s.a.dim()))
      throw Error(ErrorKind::VariableMismatch, "numerator exponent has the wrong dimension");
}

// ---------------------------------------------------------------------------
// One-dimensional chart: integrand sum_k b_k t^(e_k) / f~(t).

struct Chart {
  std::vector<Complex> poly;          // f~ coefficients, ascending powers
  std::vector<long long> num_powers;  // e_k = s - 1 + nu_k
  std::vector<Complex> num_coeffs;
  long long shift = 0;                // s

  Complex denominator(Complex t) const {
    Complex v = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * t + *it;
    return v;
  }
  Complex derivative(Complex t) const {
    Complex v = 0;
    for (std::size_t k = poly.size() - 1; k >= 1; --k) v = v * t + static_cast<double>(k) * poly[k];
    return v;
  }
  Complex numerator(Complex t) const {
    Complex v = 0;
    for (std::size_t k = 0; k < num_powers.size(); ++k) v += num_coeffs[k] * std::pow(t, static_cast<int>(num_powers[k]));
    return v;
  }
  Complex operator()(Complex t) const { return numerator(t) / denominator(t); }
  long long min_power() const {
    long long m = 0;
    bool any = false;
    for (std::size_t k = 0; k < num_powers.size(); ++k)
      if (num_coeffs[k] != 0.0) {
        m = any ? std::min(m, num_powers[k]) : num_powers[k];
        any = true;
      }
    return any ? m : 0;
  }
  long long max_power() const {
    long long m = 0;
    bool any = false;
    for (std::size_t k = 0; k < num_powers.size(); ++k)
      if (num_coeffs[k] != 0.0) {
        m = any ? std::max(m, num_powers[k]) : num_powers[k];
        any = true;
      }
    return any ? m : 0;
  }
  std::size_t degree() const { return poly.size() - 1; }
};

Chart make_chart(const SectionData& s) {
  check_section(s);
  if (s.a.dim() != 1) throw Error(ErrorKind::UnsupportedDimension, "chains are supported for one-dimensional sections");
  long long lo = 0, hi = 0;
  bool first = true;
  for (const auto& mu : s.a.points()) {
    lo = first ? mu[0] : std::min(lo, mu[0]);
    hi = first ? mu[0] : std::max(hi, mu[0]);
    first = false;
  }
  Chart c;
  c.shift = -lo;
  c.poly.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (std::size_t i = 0; i < s.a.num_points(); ++i) c.poly[static_cast<std::size_t>(s.a.points()[i][0] - lo)] += s.coeffs[i];
  while (c.poly.size() > 1 && c.poly.back() == 0.0) c.poly.pop_back();
  if (s.numerator_points.empty()) {
    c.num_powers = {c.shift - 1};
    c.num_coeffs = {1.0};
  } else {
    for (std::size_t k = 0; k < s.numerator_points.size(); ++k) {
      c.num_powers.push_back(c.shift - 1 + s.numerator_points[k][0]);
      c.num_coeffs.push_back(s.numerator_coeffs[k]);
    }
  }
  return c;
}

std::vector<Complex> polynomial_roots(std::vector<Complex> poly) {
  while (poly.size() > 1 && poly.back() == 0.0) poly.pop_back();
  const std::size_t d = poly.size() - 1;
  std::vector<Complex> roots;
  if (d == 0) return roots;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -poly[i] / poly[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    Complex r = solver.eigenvalues()[i];
    auto eval = [&](Complex z) {
      Complex v = 0, dv = 0;
      for (auto c = poly.rbegin(); c != poly.rend(); ++c) {
        dv = dv * z + v;
        v = v * z + *c;
      }
      return std::pair{v, dv};
    };
    for (int it = 0; it < 4; ++it) {  // Newton polish, kept only while it helps
      const auto [v, dv] = eval(r);
      if (v == 0.0 || dv == 0.0) break;
      const Complex next = r - v / dv;
      if (!(std::abs(eval(next).first) < std::abs(v))) break;
      r = next;
    }
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots;
}

// Parametrized path piece s in [0, 1] -> (t, dt/ds).
struct Piece {
  const Segment* seg;
  double theta0 = 0, radius = 0;

  std::pair<Complex, Complex> at(double s) const {
    const double w = seg->warp;
    const double phi = std::pow(s, w);
    const double dphi = w == 1 ? 1.0 : w * std::pow(s, w - 1);
    const auto& p = seg->points;
    switch (seg->kind) {
      case SegmentKind::Line:
        return {p[0] + (p[1] - p[0]) * phi, (p[1] - p[0]) * dphi};
      case SegmentKind::Ray: {
        const double tau = phi / (1 - s);
        const double dtau = (dphi * (1 - s) + phi) / ((1 - s) * (1 - s));
        return {p[0] + p[1] * tau, p[1] * dtau};
      }
      case SegmentKind::Arc: {
        const double theta = theta0 + seg->sweep * phi;
        const Complex e = std::polar(radius, theta);
        return {p[0] + e, Complex(0, 1) * e * seg->sweep * dphi};
      }
    }
    return {};
  }

  Complex start() const { return seg->kind == SegmentKind::Arc ? seg->points[0] + std::polar(radius, theta0) : seg->points[0]; }
  Complex finish() const {
    if (seg->kind == SegmentKind::Line) return seg->points[1];
    return seg->points[0] + std::polar(radius, theta0 + seg->sweep);
  }

  double distance(Complex z) const {
    const auto& p = seg->points;
    switch (seg->kind) {
      case SegmentKind::Line:
      case SegmentKind::Ray: {
        const Complex d = seg->kind == SegmentKind::Line ? p[1] - p[0] : p[1];
        const double len2 = std::norm(d);
        if (len2 == 0) return std::abs(z - p[0]);
        double u = ((z - p[0]) * std::conj(d)).real() / len2;
        u = std::max(0.0, seg->kind == SegmentKind::Line ? std::min(1.0, u) : u);
        return std::abs(z - (p[0] + u * d));
      }
      case SegmentKind::Arc: {
        const Complex rel = z - p[0];
        const double r = std::abs(rel);
        if (std::abs(seg->sweep) >= 2 * kPi) return std::abs(r - radius);
        double ang = std::arg(rel) - theta0;
        const double sign = seg->sweep >= 0 ? 1.0 : -1.0;
        ang *= sign;
        ang = std::fmod(ang, 2 * kPi);
        if (ang < 0) ang += 2 * kPi;
        if (ang <= std::abs(seg->sweep) && r > 0) return std::abs(r - radius);
        return std::min(std::abs(z - start()), std::abs(z - finish()));
      }
    }
    return 0;
  }
};

Piece make_piece(const Segment& seg) {
  Piece piece{&seg};
  const std::size_t need = 2;
  if (seg.points.size() != need) throw Error(ErrorKind::InvalidArgument, "segment needs exactly two points");
  if (!(seg.warp > 0)) throw Error(ErrorKind::InvalidArgument, "segment warp must be positive");
  if (seg.kind == SegmentKind::Ray && seg.points[1] == 0.0)
    throw Error(ErrorKind::InvalidArgument, "ray direction must be nonzero");
  if (seg.kind == SegmentKind::Arc) {
    piece.radius = std::abs(seg.points[1] - seg.points[0]);
    if (piece.radius == 0) throw Error(ErrorKind::InvalidArgument, "arc radius must be positive");
    piece.theta0 = std::arg(seg.points[1] - seg.points[0]);
  }
  return piece;
}

class Adaptive {
 public:
  template <class F>
  QuadratureResult run(const F& f, const QuadratureSettings& q) const {
    QuadratureResult r;
    const Complex whole = panel(f, 0, 1, r.evaluations);
    r.value = refine(f, 0, 1, whole, q, 0, r);
    return r;
  }

 private:
  using Rule = boost::math::quadrature::gauss<double, 20>;

  template <class F>
  static Complex panel(const F& f, double a, double b, std::size_t& evals) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    Complex sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) {
        sum += w[i] * f(mid);
        ++evals;
      } else {
        sum += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
        evals += 2;
      }
    }
    return sum * half;
  }

  template <class F>
  Complex refine(const F& f, double a, double b, Complex whole, const QuadratureSettings& q, std::size_t depth,
                 QuadratureResult& r) const {
    const double mid = 0.5 * (a + b);
    const Complex left = panel(f, a, mid, r.evaluations);
    const Complex right = panel(f, mid, b, r.evaluations);
    const Complex both = left + right;
    const double diff = std::abs(both - whole);
    if (diff <= std::max(q.tolerance * (b - a), 4e-16 * std::abs(both))) {
      r.error += diff;
      return both;
    }
    if (depth >= q.max_depth || r.evaluations > q.max_points * 8)
      throw Error(ErrorKind::NonConvergent, "adaptive quadrature did not reach the tolerance");
    return refine(f, a, mid, left, q, depth + 1, r) + refine(f, mid, b, right, q, depth + 1, r);
  }
};

QuadratureResult integrate_chain(const Chart& chart, const ChainSpec& chain, const QuadratureSettings& q) {
  std::vector<Piece> pieces;
  for (const auto& seg : chain.segments) pieces.push_back(make_piece(seg));
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
    if (pieces[k].seg->kind == SegmentKind::Ray) throw Error(ErrorKind::InvalidArgument, "a ray must be the last segment");
    const Complex x = pieces[k].finish(), y = pieces[k + 1].start();
    if (std::abs(x - y) > 1e-12 * std::max(1.0, std::abs(x)))
      throw Error(ErrorKind::InvalidArgument, "consecutive segments do not meet");
  }

  const long long lo = chart.min_power(), hi = chart.max_power();
  const bool zero_ok = chart.poly[0] != 0.0 && lo >= 0;
  const bool infinity_ok = chart.poly.back() != 0.0 && static_cast<long long>(chart.degree()) - hi >= 2;
  auto check_zero_flag = [&](Complex z) {
    if (std::abs(z) > 1e-12) throw Error(ErrorKind::InvalidArgument, "endpoint flagged at zero is not at t = 0");
    if (!zero_ok) throw Error(ErrorKind::DivergentAtBoundary, "integrand has a pole at t = 0");
  };
  for (const auto& piece : pieces) {
    const Segment& seg = *piece.seg;
    if (seg.start == Boundary::Zero) check_zero_flag(piece.start());
    if (seg.start == Boundary::Infinity) throw Error(ErrorKind::InvalidArgument, "a segment cannot start at infinity");
    if (seg.kind == SegmentKind::Ray) {
      if (seg.end == Boundary::Zero) throw Error(ErrorKind::InvalidArgument, "a ray ends at infinity");
      if (!infinity_ok) throw Error(ErrorKind::DivergentAtBoundary, "integrand does not decay at t = infinity");
    } else {
      if (seg.end == Boundary::Infinity) throw Error(ErrorKind::InvalidArgument, "only rays reach infinity");
      if (seg.end == Boundary::Zero) check_zero_flag(piece.finish());
    }
  }

  std::vector<Complex> poles = polynomial_roots(chart.poly);
  if (lo < 0 && chart.poly[0] != 0.0) poles.push_back(0.0);
  for (const auto& piece : pieces)
    for (Complex z : poles)
      if (piece.distance(z) < q.clearance)
        throw Error(ErrorKind::PoleNearPath, "chain passes within the clearance of a pole of the integrand");

  QuadratureResult total;
  Adaptive rule;
  for (const auto& piece : pieces) {
    auto integrand = [&](double s) {
      const auto [t, dt] = piece.at(s);
      if (dt == 0.0) return Complex(0);
      return chart(t) * dt;
    };
    const auto r = rule.run(integrand, q);
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Finite differences.

struct StencilPoint {
  int level;
  std::vector<int> offset;
  auto operator<=>(const StencilPoint&) const = default;
};

int stencil_radius(int derivative, int accuracy) {
  if (derivative == 0) return 0;
  return (derivative - 1) / 2 + accuracy / 2;
}

}  // namespace

series::ExactSeries torus_period_series(const lattice::ExponentMatrix& a, std::optional<std::size_t> i0,
                                        long long order) {
  if (order < 0) throw Error(ErrorKind::InvalidArgument, "negative truncation order");
  const std::size_t p = a.num_points();
  std::size_t idx;
  if (i0) {
    if (*i0 >= p) throw Error(ErrorKind::InvalidArgument, "distinguished index out of range");
    if (!is_origin(a.points()[*i0])) throw Error(ErrorKind::NoInteriorMonomial, "distinguished monomial is not x^0");
    idx = *i0;
  } else {
    const int o = a.origin_index();
    if (o < 0) throw Error(ErrorKind::NoInteriorMonomial, "no point at the origin");
    idx = static_cast<std::size_t>(o);
  }
  series::ExactSeries s;
  s.gamma.assign(p, 0);
  s.gamma[idx] = -1;
  s.truncation = order;
  s.order_weight = IntVector(p, 0);
  (*s.order_weight)[idx] = -1;
  const auto kernel = lattice::integer_kernel(a);
  for (const auto& l : series::lattice_points(kernel.vectors, p, 2 * order)) {
    bool inside = -l[idx] <= order;
    for (std::size_t i = 0; i < p && inside; ++i)
      if (i != idx && l[i] < 0) inside = false;
    if (!inside) continue;
    const long long total = -l[idx];
    Rational c(factorial(total));
    for (std::size_t i = 0; i < p; ++i)
      if (i != idx) c /= factorial(l[i]);
    if (total % 2) c = -c;
    s.add(series::SeriesKey{l, std::vector<int>(p, 0)}, c);
  }
  return s;
}

QuadratureResult numeric_cycle_integral(const SectionData& s, std::span<const double> radii,
                                        const QuadratureSettings& q) {
  check_section(s);
  const std::size_t n = static_cast<std::size_t>(s.a.dim());
  if (radii.size() != n) throw Error(ErrorKind::VariableMismatch, "one radius per torus coordinate is required");
  for (double r : radii)
    if (!(r > 0)) throw Error(ErrorKind::InvalidArgument, "radii must be positive");

  const std::vector<IntVector> num_points = s.numerator_points.empty() ? std::vector<IntVector>{IntVector(n, 0)}
                                                                       : s.numerator_points;
  const std::vector<Complex> num_coeffs = s.numerator_coeffs.empty() ? std::vector<Complex>{1.0} : s.numerator_coeffs;
  double scale = 0;
  for (std::size_t i = 0; i < s.a.num_points(); ++i) {
    double m = std::abs(s.coeffs[i]);
    for (std::size_t k = 0; k < n; ++k) m *= std::pow(radii[k], static_cast<double>(s.a.points()[i][k]));
    scale += m;
  }

  auto grid_mean = [&](std::size_t m) {
    std::vector<std::size_t> index(n, 0);
    std::vector<Complex> x(n);
    Complex sum = 0;
    std::size_t count = 0;
    while (true) {
      for (std::size_t k = 0; k < n; ++k)
        x[k] = std::polar(radii[k], 2 * kPi * static_cast<double>(index[k]) / static_cast<double>(m));
      auto laurent = [&](const std::vector<IntVector>& pts, const std::vector<Complex>& cs) {
        Complex v = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          Complex term = cs[i];
          for (std::size_t k = 0; k < n; ++k) term *= std::pow(x[k], static_cast<int>(pts[i][k]));
          v += term;
        }
        return v;
      };
      const Complex f = laurent(s.a.points(), s.coeffs);
      if (std::abs(f) <= 1e-13 * scale) throw Error(ErrorKind::SingularOnContour, "f vanishes on the torus cycle");
      sum += laurent(num_points, num_coeffs) / f;
      ++count;
      std::size_t k = 0;
      while (k < n && ++index[k] == m) index[k++] = 0;
      if (k == n) break;
    }
    return sum / static_cast<double>(count);
  };

  QuadratureResult r;
  std::size_t m = 8;
  Complex prev = grid_mean(m);
  r.evaluations = n == 0 ? 1 : static_cast<std::size_t>(std::pow(m, n));
  if (n == 0) {
    r.value = prev;
    return r;
  }
  while (true) {
    m *= 2;
    const double points = std::pow(static_cast<double>(m), static_cast<double>(n));
    if (points > static_cast<double>(q.max_points))
      throw Error(ErrorKind::NonConvergent, "torus grid reached the point cap before converging");
    const Complex cur = grid_mean(m);
    r.evaluations += static_cast<std::size_t>(points);
    const double diff = std::abs(cur - prev);
    prev = cur;
    if (diff <= q.tolerance * std::max(1.0, std::abs(cur))) {
      r.value = cur;
      r.error = diff;
      return r;
    }
  }
}

std::vector<Complex> chart_roots(const SectionData& s) { return polynomial_roots(make_chart(s).poly); }

QuadratureResult numeric_chain_integral(const SectionData& s, const ChainSpec& chain, const QuadratureSettings& q) {
  return integrate_chain(make_chart(s), chain, q);
}

QuadratureResult general_type_integral(const SectionData& s, const ChainSpec& chain, const QuadratureSettings& q) {
  const Chart chart = make_chart(s);
  if (s.numerator_points.empty()) throw Error(ErrorKind::InvalidArgument, "general type integral needs a numerator");
  long long lo = 0, hi = 0;
  for (std::size_t i = 0; i < s.a.num_points(); ++i) {
    lo = i ? std::min(lo, s.a.points()[i][0]) : s.a.points()[i][0];
    hi = i ? std::max(hi, s.a.points()[i][0]) : s.a.points()[i][0];
  }
  for (std::size_t k = 0; k < s.numerator_points.size(); ++k) {
    const long long nu = s.numerator_points[k][0];
    if (nu <= lo || nu >= hi)
      throw Error(ErrorKind::InvalidArgument, "numerator exponent " + std::to_string(nu) + " is not interior");
  }
  return integrate_chain(chart, chain, q);
}

Complex residue_period(const SectionData& s, std::size_t root_index) {
  const Chart chart = make_chart(s);
  const auto roots = polynomial_roots(chart.poly);
  if (root_index >= roots.size()) throw Error(ErrorKind::InvalidArgument, "root index out of range");
  const Complex r = roots[root_index];
  double scale = 0;
  for (Complex c : chart.poly) scale = std::max(scale, std::abs(c));
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (k != root_index && std::abs(roots[k] - r) <= 1e-6 * std::max(1.0, std::abs(r)))
      throw Error(ErrorKind::MultipleRoot, "selected root is repeated");
  // A double root splits into a pair about sqrt(eps) apart, where f~' is of
  // the same size.
  const Complex d = chart.derivative(r);
  if (std::abs(d) <= 1e-6 * scale * std::pow(std::max(1.0, std::abs(r)), static_cast<double>(chart.degree() - 1))) throw Error(ErrorKind::MultipleRoot, "selected root is repeated");
  return kTwoPiI * chart.numerator(r) / d;
}

std::vector<double> central_weights(int derivative, int radius) {
  const int npts = 2 * radius + 1;
  if (derivative < 0 || derivative >= npts) throw Error(ErrorKind::InvalidArgument, "stencil too small for derivative");
  // Fornberg's recursion on the nodes -radius..radius.
  std::vector<double> x(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) x[static_cast<std::size_t>(i)] = i - radius;
  const int m = derivative;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(npts), std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1, c4 = x[0];
  c[0][0] = 1;
  for (int i = 1; i < npts; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const int mn = std::min(i, m);
    double c2 = 1;
    const double c5 = c4;
    c4 = x[ui];
    for (int j = 0; j < i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double c3 = x[ui] - x[uj];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          const auto uk = static_cast<std::size_t>(k);
          c[ui][uk] = c1 * (k * c[ui - 1][uk - 1] - c5 * c[ui - 1][uk]) / c2;
        }
        c[ui][0] = -c1 * c5 * c[ui - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        const auto uk = static_cast<std::size_t>(k);
        c[uj][uk] = (c4 * c[uj][uk] - k * c[uj][uk - 1]) / c3;
      }
      c[uj][0] = c4 * c[uj][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w;
  for (int i = 0; i < npts; ++i) w.push_back(c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]);
  return w;
}

double FiniteDifferenceReport::max_residual() const {
  double m = 0;
  for (const auto& o : operators) m = std::max(m, std::abs(o.residual));
  return m;
}

FiniteDifferenceReport finite_difference_residual(const tautsys::SystemSpec& spec, const SampledFunction& f,
                                                  std::span<const Complex> a0, double h,
                                                  const FiniteDifferenceOptions& options) {
  const std::size_t p = spec.nvars();
  if (a0.size() != p) throw Error(ErrorKind::VariableMismatch, "base point has the wrong number of coordinates");
  if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  if (options.accuracy != 2 && options.accuracy != 4) throw Error(ErrorKind::InvalidArgument, "accuracy must be 2 or 4");
  constexpr int kLevels = 3;

  // Every stencil point needed by every operator term at every level.
  std::map<StencilPoint, std::size_t> index;
  std::map<int, std::vector<double>> weights;
  auto stencil = [&](int k) -> const std::vector<double>& {
    auto it = weights.find(k);
    if (it == weights.end()) it = weights.emplace(k, central_weights(k, stencil_radius(k, options.accuracy))).first;
    return it->second;
  };
  auto for_each_offset = [&](const std::vector<int>& w, auto&& visit) {
    std::vector<int> offset(p, 0), radius(p);
    for (std::size_t i = 0; i < p; ++i) radius[i] = stencil_radius(w[i], options.accuracy);
    for (std::size_t i = 0; i < p; ++i) offset[i] = -radius[i];
    while (true) {
      double weight = 1;
      for (std::size_t i = 0; i < p; ++i) weight *= stencil(w[i])[static_cast<std::size_t>(offset[i] + radius[i])];
      if (weight != 0) visit(offset, weight);
      std::size_t i = 0;
      while (i < p && ++offset[i] > radius[i]) {
        offset[i] = -radius[i];
        ++i;
      }
      if (i == p) break;
    }
  };
  for (int level = 0; level < kLevels; ++level)
    for (const auto& op : spec.operators)
      for (const auto& [mono, jet] : op.op.terms())
        for_each_offset(mono.w, [&](const std::vector<int>& off, double) {
          index.emplace(StencilPoint{level, off}, 0);
        });
  std::vector<const StencilPoint*> order;
  for (auto& [pt, i] : index) {
    i = order.size();
    order.push_back(&pt);
  }

  std::vector<Complex> values(order.size());
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, order.size()));
  std::vector<std::exception_ptr> failures(threads);
  auto work = [&](std::size_t t) {
    try {
      std::vector<Complex> x(p);
      for (std::size_t k = t; k < order.size(); k += threads) {
        const double step = h / static_cast<double>(1 << order[k]->level);
        for (std::size_t i = 0; i < p; ++i) x[i] = a0[i] + step * order[k]->offset[i];
        const Complex v = f(x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw Error(ErrorKind::StencilOutOfDomain, "sampled function is not finite on the stencil");
        values[k] = v;
      }
    } catch (...) {
      failures[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : failures) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::StencilOutOfDomain) throw;
      throw Error(ErrorKind::StencilOutOfDomain, err.what());
    } catch (const std::exception& err) {
      throw Error(ErrorKind::StencilOutOfDomain, err.what());
    }
  }

  FiniteDifferenceReport report;
  for (const auto& op : spec.operators) {
    Complex raw[kLevels];
    for (int level = 0; level < kLevels; ++level) {
      const double step = h / static_cast<double>(1 << level);
      Complex total = 0;
      for (const auto& [mono, jet] : op.op.terms()) {
        Complex deriv = 0;
        for_each_offset(mono.w, [&](const std::vector<int>& off, double weight) {
          deriv += weight * values[index.at(StencilPoint{level, off})];
        });
        deriv /= std::pow(step, mono.order());
        Complex coef = to_long_double(jet[0]);
        for (std::size_t i = 0; i < p; ++i) coef *= std::pow(a0[i], mono.u[i]);
        total += coef * deriv;
      }
      raw[level] = total;
    }
    OperatorFdResidual r;
    const double gain = std::pow(2.0, options.accuracy);
    r.residual = options.richardson ? (gain * raw[1] - raw[0]) / (gain - 1) : raw[0];
    for (auto v : raw) r.raw.push_back(std::abs(v));
    r.observed_order = (r.raw[0] > 0 && r.raw[1] > 0) ? std::log2(r.raw[0] / r.raw[1]) : 0;
    report.operators.push_back(std::move(r));
  }
  return report;
}

}  // namespace gkz::periods
