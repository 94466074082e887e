#include "gkz/weyl.hpp"

#include "gkz/error.hpp"

#include <sstream>

namespace gkz::weyl {

// ---------------------------------------------------------------------------
// Jet

bool Jet::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order() != order()) throw Error(ErrorKind::VariableMismatch, "jet orders differ");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order() != order()) throw Error(ErrorKind::VariableMismatch, "jet orders differ");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(const Rational& s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) throw Error(ErrorKind::VariableMismatch, "jet orders differ");
  Jet out(a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; i + j <= a.order(); ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return out;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

int Monomial::order() const {
  int s = 0;
  for (int x : w) s += x;
  return s;
}

// ---------------------------------------------------------------------------
// WeylElement

WeylElement::WeylElement(std::size_t nvars, std::size_t jet_order) : nvars_(nvars), jet_order_(jet_order) {}

WeylElement WeylElement::constant(std::size_t nvars, const Rational& c, std::size_t jet_order) {
  WeylElement x(nvars, jet_order);
  x.add_term({std::vector<int>(nvars, 0), std::vector<int>(nvars, 0)}, Jet(c, jet_order));
  return x;
}

WeylElement WeylElement::coordinate(std::size_t nvars, std::size_t i, std::size_t jet_order) {
  Monomial m{std::vector<int>(nvars, 0), std::vector<int>(nvars, 0)};
  m.u.at(i) = 1;
  WeylElement x(nvars, jet_order);
  x.add_term(m, Jet(1, jet_order));
  return x;
}

WeylElement WeylElement::derivative(std::size_t nvars, std::size_t i, std::size_t jet_order) {
  Monomial m{std::vector<int>(nvars, 0), std::vector<int>(nvars, 0)};
  m.w.at(i) = 1;
  WeylElement x(nvars, jet_order);
  x.add_term(m, Jet(1, jet_order));
  return x;
}

WeylElement WeylElement::monomial(Monomial m, Jet coefficient) {
  if (m.u.size() != m.w.size()) throw Error(ErrorKind::VariableMismatch, "monomial exponent lengths differ");
  WeylElement x(m.u.size(), coefficient.order());
  x.add_term(m, coefficient);
  return x;
}

WeylElement WeylElement::from_word(std::size_t nvars, std::span<const Factor> word, std::size_t jet_order) {
  WeylElement acc = constant(nvars, 1, jet_order);
  for (const auto& f : word)
    acc = multiply(acc, f.is_derivative ? derivative(nvars, f.var, jet_order) : coordinate(nvars, f.var, jet_order));
  return acc;
}

int WeylElement::order() const {
  int best = 0;
  for (const auto& [m, c] : terms_) best = std::max(best, m.order());
  return best;
}

void WeylElement::add_term(const Monomial& m, const Jet& c) {
  if (m.u.size() != nvars_ || m.w.size() != nvars_)
    throw Error(ErrorKind::VariableMismatch, "monomial has wrong variable count");
  if (c.order() != jet_order_) throw Error(ErrorKind::VariableMismatch, "jet order mismatch");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void WeylElement::check_compatible(const WeylElement& o) const {
  if (o.nvars_ != nvars_) throw Error(ErrorKind::VariableMismatch, "variable counts differ");
  if (o.jet_order_ != jet_order_) throw Error(ErrorKind::VariableMismatch, "jet orders differ");
}

WeylElement& WeylElement::operator+=(const WeylElement& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

WeylElement& WeylElement::operator-=(const WeylElement& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

WeylElement& WeylElement::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

WeylElement WeylElement::operator-() const {
  WeylElement out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

WeylElement WeylElement::renormalized() const {
  WeylElement out(nvars_, jet_order_);
  for (const auto& [m, c] : terms_) {
    std::vector<Factor> word;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (int k = 0; k < m.u[i]; ++k) word.push_back({false, i});
    for (std::size_t i = 0; i < nvars_; ++i)
      for (int k = 0; k < m.w[i]; ++k) word.push_back({true, i});
    WeylElement piece = from_word(nvars_, word, jet_order_);
    for (const auto& [pm, pc] : piece.terms_) out.add_term(pm, pc * c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products

namespace {

// Expands d^{w1} a^{u2} by Leibniz, variable by variable:
//   d_i^s a_i^t = sum_k C(s,k) C(t,k) k! a_i^{t-k} d_i^{s-k}.
void leibniz(const Monomial& left, const Monomial& right, const Jet& coef, std::size_t var, Monomial& cur,
             const Rational& weight, WeylElement& out) {
  const std::size_t n = left.u.size();
  if (var == n) {
    out.add_term(cur, coef * weight);
    return;
  }
  const int s = left.w[var];
  const int t = right.u[var];
  for (int k = 0; k <= std::min(s, t); ++k) {
    const Integer c = binomial(s, k) * binomial(t, k) * factorial(k);
    cur.u[var] = left.u[var] + t - k;
    cur.w[var] = s - k + right.w[var];
    leibniz(left, right, coef, var + 1, cur, weight * c, out);
  }
}

}  // namespace

WeylElement multiply(const WeylElement& x, const WeylElement& y) {
  if (x.nvars() != y.nvars()) throw Error(ErrorKind::VariableMismatch, "variable counts differ");
  if (x.jet_order() != y.jet_order()) throw Error(ErrorKind::VariableMismatch, "jet orders differ");
  WeylElement out(x.nvars(), x.jet_order());
  for (const auto& [mx, cx] : x.terms())
    for (const auto& [my, cy] : y.terms()) {
      Monomial cur{std::vector<int>(x.nvars()), std::vector<int>(x.nvars())};
      leibniz(mx, my, cx * cy, 0, cur, Rational(1), out);
    }
  return out;
}

WeylElement commutator(const WeylElement& x, const WeylElement& y) { return multiply(x, y) - multiply(y, x); }

WeylElement fourier_box(std::span<const long long> ell, std::size_t jet_order) {
  const std::size_t n = ell.size();
  Monomial plus{std::vector<int>(n, 0), std::vector<int>(n, 0)};
  Monomial minus = plus;
  for (std::size_t i = 0; i < n; ++i) {
    if (ell[i] > 0) plus.w[i] = static_cast<int>(ell[i]);
    if (ell[i] < 0) minus.w[i] = static_cast<int>(-ell[i]);
  }
  WeylElement out(n, jet_order);
  out.add_term(plus, Jet(1, jet_order));
  out.add_term(minus, Jet(-1, jet_order));
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string eps_power(std::size_t k) {
  if (k == 0) return "";
  if (k == 1) return "eps";
  return "eps^" + std::to_string(k);
}

std::string monomial_text(const Monomial& m, std::span<const std::string> labels) {
  std::string out;
  auto emit = [&](char base, std::size_t i, int e) {
    if (e == 0) return;
    if (!out.empty()) out += ' ';
    out += base;
    out += labels.empty() ? std::to_string(i + 1) : labels[i];
    if (e > 1) out += "^" + std::to_string(e);
  };
  for (std::size_t i = 0; i < m.u.size(); ++i) emit('a', i, m.u[i]);
  for (std::size_t i = 0; i < m.w.size(); ++i) emit('d', i, m.w[i]);
  return out;
}

// Sign and magnitude text of a jet; the magnitude is empty for a bare unit
// coefficient in front of a nonempty monomial.
std::pair<bool, std::string> jet_parts(const Jet& c, bool has_monomial) {
  std::size_t nonzero = 0, last = 0;
  for (std::size_t k = 0; k <= c.order(); ++k)
    if (c[k] != 0) {
      ++nonzero;
      last = k;
    }
  if (nonzero == 1) {
    const Rational& v = c[last];
    const bool negative = v < 0;
    const Rational mag = negative ? Rational(-v) : v;
    std::string body;
    if (mag != 1 || (last == 0 && !has_monomial)) body = to_string(mag);
    if (last > 0) body += (body.empty() ? "" : " ") + eps_power(last);
    return {negative, body};
  }
  return {false, "(" + render_jet(c) + ")"};
}

}  // namespace

std::string render_jet(const Jet& c) {
  std::string out;
  for (std::size_t k = 0; k <= c.order(); ++k) {
    if (c[k] == 0) continue;
    const bool negative = c[k] < 0;
    const Rational mag = negative ? Rational(-c[k]) : c[k];
    std::string body;
    if (mag != 1 || k == 0) body = to_string(mag);
    if (k > 0) body += (body.empty() ? "" : " ") + eps_power(k);
    if (out.empty()) out = negative ? "-" + body : body;
    else out += (negative ? " - " : " + ") + body;
  }
  return out.empty() ? "0" : out;
}

std::string WeylElement::render(std::span<const std::string> labels) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    const std::string mono = monomial_text(m, labels);
    auto [negative, body] = jet_parts(c, !mono.empty());
    std::string term = body;
    if (!mono.empty()) term += (term.empty() ? "" : " ") + mono;
    if (out.empty()) out = negative ? "-" + term : term;
    else out += (negative ? " - " : " + ") + term;
  }
  return out;
}

}  // namespace gkz::weyl
