#pragma once

// Period and chain integrals of 1/f_a, residues, and finite-difference
// certificates that sampled functions of a solve a system.

#include "gkz/series.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace gkz::periods {

using Complex = std::complex<double>;

/// f_a = sum_i a_i x^mu_i, optionally with a numerator g_b = sum_k b_k x^nu_k.
struct SectionData {
  lattice::ExponentMatrix a;
  std::vector<Complex> coeffs;
  std::vector<IntVector> numerator_points;
  std::vector<Complex> numerator_coeffs;
};

struct QuadratureSettings {
  double tolerance = 1e-10;
  std::size_t max_points = std::size_t{1} << 20;
  double clearance = 1e-6;   // minimal distance from the path to a pole
  std::size_t max_depth = 48;
};

struct QuadratureResult {
  Complex value;
  double error = 0;
  std::size_t evaluations = 0;
};

/// Constant term of 1/f_a expanded in a_i / a_i0:
///   sum_{m : sum m_i mu_i = 0, |m| <= N} (-1)^|m| |m|!/prod m_i! prod a_i^m_i a_i0^(-|m|-1).
/// Throws Error(NoInteriorMonomial) unless the index points at the origin.
series::ExactSeries torus_period_series(const lattice::ExponentMatrix& a, std::optional<std::size_t> i0,
                                        long long order);

/// (2 pi i)^-n times the integral of g/f over |x_k| = r_k, by the trapezoid rule
/// with grid doubling.
QuadratureResult numeric_cycle_integral(const SectionData& s, std::span<const double> radii,
                                        const QuadratureSettings& q = {});

// ---------------------------------------------------------------------------
// Chains in the torus coordinate t of a one-dimensional section.

enum class SegmentKind { Line, Ray, Arc };
enum class Boundary { None, Zero, Infinity };

/// Line: points = {from, to}. Ray: points = {from, direction}, ends at infinity.
/// Arc: points = {center, start}, swept counterclockwise by `sweep` radians.
/// `warp` reparametrizes s -> s^warp without changing the path.
struct Segment {
  SegmentKind kind = SegmentKind::Line;
  std::vector<Complex> points;
  double sweep = 0;
  Boundary start = Boundary::None;
  Boundary end = Boundary::None;
  double warp = 1;
};

struct ChainSpec {
  std::vector<Segment> segments;
};

/// Integral of t^(s-1) g(t) dt / f~(t) with f~ = t^s f, s = -min mu, which is
/// Omega g / f with Omega = dt/t. Throws UnsupportedDimension for n != 1,
/// DivergentAtBoundary when the form does not extend over a flagged end,
/// PoleNearPath when the chain passes within the clearance of a pole.
QuadratureResult numeric_chain_integral(const SectionData& s, const ChainSpec& chain, const QuadratureSettings& q = {});

/// Same, requiring a numerator supported on interior exponents.
QuadratureResult general_type_integral(const SectionData& s, const ChainSpec& chain, const QuadratureSettings& q = {});

/// Roots of f~ sorted by real part, then imaginary part.
std::vector<Complex> chart_roots(const SectionData& s);

/// 2 pi i times the residue of the chart integrand at chart_roots(s)[root_index].
/// Throws MultipleRoot at a repeated root.
Complex residue_period(const SectionData& s, std::size_t root_index);

// ---------------------------------------------------------------------------

using SampledFunction = std::function<Complex(std::span<const Complex>)>;

struct FiniteDifferenceOptions {
  int accuracy = 4;            // 2 or 4
  bool richardson = true;
  std::size_t threads = 1;
};

struct OperatorFdResidual {
  Complex residual;            // at step h, extrapolated when requested
  std::vector<double> raw;     // |residual| without extrapolation at h, h/2, h/4
  double observed_order = 0;   // log2(raw[0] / raw[1])
};

struct FiniteDifferenceReport {
  std::vector<OperatorFdResidual> operators;
  double max_residual() const;
};

/// Applies each operator to F at a0 with central difference stencils along
/// the real directions. F failing or returning a non-finite value on the
/// stencil raises Error(StencilOutOfDomain).
FiniteDifferenceReport finite_difference_residual(const tautsys::SystemSpec& spec, const SampledFunction& f,
                                                  std::span<const Complex> a0, double h,
                                                  const FiniteDifferenceOptions& options = {});

/// Central-difference weights for the k-th derivative on offsets -r..r.
std::vector<double> central_weights(int derivative, int radius);

}  // namespace gkz::periods
