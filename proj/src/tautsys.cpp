#include "gkz/tautsys.hpp"

#include "gkz/error.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>

namespace gkz::tautsys {

using weyl::Jet;
using weyl::Monomial;
using weyl::WeylElement;

const char* to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::Box: return "box";
    case OperatorKind::Euler: return "euler";
    case OperatorKind::Symmetry: return "symmetry";
  }
  return "?";
}

namespace {

std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p; ++i) names.push_back(std::to_string(i + 1));
  return names;
}

// ---------------------------------------------------------------------------
// Binomial Buchberger. A binomial x^lead - x^trail with lead > trail in
// grevlex where variable `last` is the smallest.

struct Binomial {
  IntVector lead;
  IntVector trail;
};

class Grevlex {
 public:
  Grevlex(std::size_t n, std::size_t last) {
    for (std::size_t i = 0; i < n; ++i)
      if (i != last) order_.push_back(i);
    order_.push_back(last);
  }

  // True when x^a > x^b.
  bool greater(const IntVector& a, const IntVector& b) const {
    long long da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da > db;
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const long long diff = a[*it] - b[*it];
      if (diff != 0) return diff < 0;
    }
    return false;
  }

 private:
  std::vector<std::size_t> order_;
};

bool divides(const IntVector& a, const IntVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::optional<Binomial> orient(IntVector u, IntVector v, const Grevlex& order) {
  if (u == v) return std::nullopt;
  if (order.greater(u, v)) return Binomial{std::move(u), std::move(v)};
  return Binomial{std::move(v), std::move(u)};
}

IntVector reduce_monomial(IntVector m, const std::vector<Binomial>& basis) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : basis)
      if (divides(g.lead, m)) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += g.trail[i] - g.lead[i];
        changed = true;
        break;
      }
  }
  return m;
}

std::vector<Binomial> groebner(std::vector<Binomial> basis, const Grevlex& order, std::size_t cap,
                               std::size_t& steps) {
  std::deque<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
  while (!pairs.empty()) {
    auto [i, j] = pairs.front();
    pairs.pop_front();
    const auto& gi = basis[i];
    const auto& gj = basis[j];
    const std::size_t n = gi.lead.size();
    bool coprime = true;
    IntVector lcm(n);
    for (std::size_t k = 0; k < n; ++k) {
      lcm[k] = std::max(gi.lead[k], gj.lead[k]);
      if (gi.lead[k] > 0 && gj.lead[k] > 0) coprime = false;
    }
    if (coprime) continue;
    if (++steps > cap) throw Error(ErrorKind::SaturationBudgetExceeded, "binomial Buchberger step cap reached");
    IntVector u(n), v(n);
    for (std::size_t k = 0; k < n; ++k) {
      u[k] = lcm[k] - gi.lead[k] + gi.trail[k];
      v[k] = lcm[k] - gj.lead[k] + gj.trail[k];
    }
    auto s = orient(reduce_monomial(std::move(u), basis), reduce_monomial(std::move(v), basis), order);
    if (!s) continue;
    basis.push_back(std::move(*s));
    for (std::size_t k = 0; k + 1 < basis.size(); ++k) pairs.emplace_back(k, basis.size() - 1);
  }
  return basis;
}

std::vector<Binomial> to_binomials(const std::vector<IntVector>& gens, const Grevlex& order) {
  std::vector<Binomial> out;
  for (const auto& l : gens) {
    IntVector plus(l.size()), minus(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
      plus[i] = std::max(0LL, l[i]);
      minus[i] = std::max(0LL, -l[i]);
    }
    if (auto b = orient(plus, minus, order)) out.push_back(std::move(*b));
  }
  return out;
}

IntVector sign_normalized(IntVector v) {
  const auto lead = std::find_if(v.begin(), v.end(), [](long long x) { return x != 0; });
  if (lead != v.end() && *lead < 0)
    for (auto& x : v) x = -x;
  return v;
}

}  // namespace

bool binomial_ideal_contains(const std::vector<IntVector>& gens, const IntVector& ell, std::size_t step_cap) {
  if (std::all_of(ell.begin(), ell.end(), [](long long x) { return x == 0; })) return true;
  if (gens.empty()) return false;
  const Grevlex order(ell.size(), ell.size() - 1);
  std::size_t steps = 0;
  const auto basis = groebner(to_binomials(gens, order), order, step_cap, steps);
  IntVector plus(ell.size()), minus(ell.size());
  for (std::size_t i = 0; i < ell.size(); ++i) {
    plus[i] = std::max(0LL, ell[i]);
    minus[i] = std::max(0LL, -ell[i]);
  }
  return reduce_monomial(plus, basis) == reduce_monomial(minus, basis);
}

std::vector<IntVector> saturate_lattice_ideal(const lattice::KernelBasis& kernel, std::size_t step_cap) {
  if (kernel.vectors.empty()) return {};
  const std::size_t n = kernel.vectors[0].size();
  std::vector<IntVector> gens = kernel.vectors;
  std::size_t steps = 0;
  for (std::size_t var = 0; var < n; ++var) {
    const Grevlex order(n, var);
    const auto basis = groebner(to_binomials(gens, order), order, step_cap, steps);
    std::set<IntVector> next;
    // Storing lead - trail drops every common monomial factor, which divides
    // out x_var (and possibly more) while staying inside the lattice ideal.
    for (const auto& g : basis) {
      IntVector l(n);
      for (std::size_t i = 0; i < n; ++i) l[i] = g.lead[i] - g.trail[i];
      next.insert(sign_normalized(std::move(l)));
    }
    gens.assign(next.begin(), next.end());
  }
  // Drop generators implied by the others, scanning from the largest.
  std::sort(gens.begin(), gens.end());
  for (std::size_t i = gens.size(); i-- > 0;) {
    std::vector<IntVector> others;
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (j != i) others.push_back(gens[j]);
    if (!others.empty() && binomial_ideal_contains(others, gens[i], step_cap)) gens = std::move(others);
  }
  return gens;
}

// ---------------------------------------------------------------------------

RationalVector calabi_yau_beta(const lattice::ExponentMatrix& a) {
  RationalVector beta(a.num_rows(), Rational(0));
  beta[0] = 1;
  return beta;
}

SystemSpec gkz_system(const lattice::ExponentMatrix& a, const RationalVector& beta, const GkzOptions& options) {
  if (beta.size() != a.num_rows())
    throw Error(ErrorKind::InvalidArgument, "beta must have length n+1");
  const std::size_t p = a.num_points();
  SystemSpec spec{{}, a, beta, "GKZ", default_names(p)};
  const auto kernel = lattice::integer_kernel(a);
  const auto relations = options.saturate ? saturate_lattice_ideal(kernel, options.saturation_steps) : kernel.vectors;
  for (const auto& l : relations) spec.operators.push_back({OperatorKind::Box, weyl::fourier_box(l)});
  for (std::size_t k = 0; k < a.num_rows(); ++k) {
    WeylElement e = WeylElement::constant(p, beta[k]);
    for (std::size_t j = 0; j < p; ++j) {
      if (a.at(k, j) == 0) continue;
      Monomial m{std::vector<int>(p, 0), std::vector<int>(p, 0)};
      m.u[j] = 1;
      m.w[j] = 1;
      e.add_term(m, Jet(Rational(a.at(k, j)), 0));
    }
    spec.operators.push_back({OperatorKind::Euler, std::move(e)});
  }
  const bool cy = beta == calabi_yau_beta(a);
  spec.label = cy ? "GKZ-CY" : "GKZ";
  return spec;
}

WeylElement symmetry_operator(const RationalMatrix& xi, const Rational& beta_xi) {
  const std::size_t p = xi.size();
  for (const auto& row : xi)
    if (row.size() != p) throw Error(ErrorKind::InvalidArgument, "symmetry matrix must be square");
  WeylElement z = WeylElement::constant(p, beta_xi);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      if (xi[i][j] == 0) continue;
      Monomial m{std::vector<int>(p, 0), std::vector<int>(p, 0)};
      m.u[i] = 1;
      m.w[j] = 1;
      z.add_term(m, Jet(xi[i][j], 0));
    }
  return z;
}

RationalMatrix p1_translation_generator() {
  // d/dt [a1 (x + t y)^2 + a0 (x + t y) y + a2 y^2] at t = 0 is 2 a1 x y + a0 y^2,
  // so the flow moves a0 by 2 a1 and a2 by a0.
  RationalMatrix xi(3, RationalVector(3, Rational(0)));
  xi[0][1] = 2;
  xi[1][2] = 1;
  return xi;
}

SystemSpec unipotent_p1_system() {
  // Columns: a1 <-> x^2 (mu = 1), a0 <-> x y (mu = 0), a2 <-> y^2 (mu = -1).
  const auto a = lattice::homogenize({{1}, {0}, {-1}}, 1);
  SystemSpec spec{{}, a, calabi_yau_beta(a), "P1-unipotent", {"1", "0", "2"}};
  const auto kernel = lattice::integer_kernel(a);
  for (const auto& l : kernel.vectors) spec.operators.push_back({OperatorKind::Box, weyl::fourier_box(l)});
  RationalMatrix identity(3, RationalVector(3, Rational(0)));
  for (std::size_t i = 0; i < 3; ++i) identity[i][i] = 1;
  spec.operators.push_back({OperatorKind::Euler, symmetry_operator(identity, 1)});
  spec.operators.push_back({OperatorKind::Symmetry, symmetry_operator(p1_translation_generator(), 0)});
  return spec;
}

std::string render(const SystemSpec& spec) {
  std::string out;
  for (const auto& o : spec.operators) {
    out += to_string(o.kind);
    out += ' ';
    out += o.op.render(spec.names);
    out += '\n';
  }
  return out;
}

}  // namespace gkz::tautsys
