#pragma once

#include "gkz/lattice.hpp"
#include "gkz/weyl.hpp"

#include <string>
#include <vector>

namespace gkz::tautsys {

using RationalMatrix = std::vector<RationalVector>;

enum class OperatorKind { Box, Euler, Symmetry };

const char* to_string(OperatorKind kind) noexcept;

struct Operator {
  OperatorKind kind;
  weyl::WeylElement op;
};

/// Finite presentation of a tautological system: generators plus the data
/// they were built from.
struct SystemSpec {
  std::vector<Operator> operators;
  lattice::ExponentMatrix a;
  RationalVector beta;             // beta(e), then the torus directions
  std::string label;
  std::vector<std::string> names;  // variable suffixes used for rendering

  std::size_t nvars() const noexcept { return a.num_points(); }
};

struct GkzOptions {
  bool saturate = false;           // use a lattice-ideal generating set for the boxes
  std::size_t saturation_steps = 20000;
};

/// Boxes d^{l+} - d^{l-} for the kernel basis (or the saturated generating
/// set) followed by one Euler operator sum_j A_kj a_j d_j + beta_k per row.
SystemSpec gkz_system(const lattice::ExponentMatrix& a, const RationalVector& beta, const GkzOptions& options = {});

/// beta = (1, 0, ..., 0).
RationalVector calabi_yau_beta(const lattice::ExponentMatrix& a);

/// sum_ij xi_ij a_i d_j + beta_xi.
weyl::WeylElement symmetry_operator(const RationalMatrix& xi, const Rational& beta_xi);

/// Coefficient flow of the translation x -> x + t y on sections
/// a1 x^2 + a0 x y + a2 y^2 of O(2) over P^1, in variable order (a1, a0, a2).
RationalMatrix p1_translation_generator();

/// The system for P^1, L = O(2), under the unipotent translation group:
/// { d1 d2 - d0^2, a1 d1 + a0 d0 + a2 d2 + 1, 2 a1 d0 + a0 d2 }.
SystemSpec unipotent_p1_system();

/// Generating set of the lattice ideal of a saturated kernel basis, obtained
/// by saturating the basis binomial ideal by every variable (binomial
/// Buchberger in grevlex with that variable last) and discarding redundant
/// generators. Throws Error(SaturationBudgetExceeded) past the step cap.
std::vector<IntVector> saturate_lattice_ideal(const lattice::KernelBasis& kernel, std::size_t step_cap = 20000);

/// True when x^{l+} - x^{l-} lies in the binomial ideal generated by gens.
bool binomial_ideal_contains(const std::vector<IntVector>& gens, const IntVector& ell,
                             std::size_t step_cap = 20000);

/// One operator per line, "<kind> <operator text>".
std::string render(const SystemSpec& spec);

}  // namespace gkz::tautsys
