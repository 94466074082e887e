#pragma once

// Job files and reports for the gkz_forge command-line tool.

#include "gkz/error.hpp"
#include "gkz/periods.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gkz::cli {

struct Symmetry {
  tautsys::RationalMatrix xi;
  Rational beta;
};

struct Section {
  std::vector<periods::Complex> a;
  std::vector<IntVector> numerator_points;
  std::vector<periods::Complex> b;
};

/// What `verify` checks: a monomial c a^gamma, the torus period series, or
/// the Frobenius basis.
struct Candidate {
  std::string kind = "monomial";
  RationalVector gamma;
  Rational coefficient = 1;
};

struct FdSettings {
  std::vector<periods::Complex> point;
  double step = 0.01;
};

struct JobOptions {
  long long order = 10;
  double tolerance = 1e-10;
  std::size_t jet = 0;
  std::size_t threads = 1;
};

struct Job {
  int dim = 0;
  std::vector<IntVector> points;
  std::optional<RationalVector> beta;
  std::vector<IntVector> rays;
  std::optional<RationalVector> alpha;  // defaults to the torus part of beta
  std::string system = "gkz";
  std::vector<Symmetry> symmetries;
  bool saturate = false;
  std::optional<Section> section;
  std::optional<Candidate> candidate;
  std::vector<periods::ChainSpec> chains;
  std::vector<double> radii;
  std::optional<FdSettings> fd;
  JobOptions options;
};

/// Throws Error(SchemaError) on anything that does not match schema version 1.
Job parse_job(const nlohmann::json& document);
Job parse_job_text(const std::string& text);

struct Report {
  std::string text;
  nlohmann::ordered_json machine;
};

/// Commands: build, rank, series, verify, period, chain.
Report run(const std::string& command, const Job& job);

/// 2 parse/schema, 3 mathematical degeneracy, 4 non-convergence.
int exit_code(ErrorKind kind) noexcept;

/// Formats a double with 15 significant digits.
std::string format_number(double x);

}  // namespace gkz::cli
