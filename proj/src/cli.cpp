#include "gkz/cli.hpp"

#include "gkz/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace gkz::cli {

using nlohmann::json;
using nlohmann::ordered_json;
using periods::Complex;

namespace {

[[noreturn]] void schema(const std::string& message) { throw Error(ErrorKind::SchemaError, message); }

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) schema(std::string("missing field '") + key + "'");
  return obj.at(key);
}

const json* optional_field(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return nullptr;
  return &obj.at(key);
}

const json& array(const json& v, const char* what) {
  if (!v.is_array()) schema(std::string(what) + " must be an array");
  return v;
}

long long integer(const json& v, const char* what) {
  if (!v.is_number_integer()) schema(std::string(what) + " must be an integer");
  return v.get<long long>();
}

double number(const json& v, const char* what) {
  if (!v.is_number()) schema(std::string(what) + " must be a number");
  return v.get<double>();
}

Rational rational(const json& v, const char* what) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (!v.is_string()) schema(std::string(what) + " must be a rational string such as \"1/2\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    schema(std::string(what) + ": " + e.what());
  }
}

Complex complex_number(const json& v, const char* what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2) schema(std::string(what) + " must be [re, im]");
  return {number(v[0], what), number(v[1], what)};
}

IntVector int_vector(const json& v, const char* what) {
  IntVector out;
  for (const auto& x : array(v, what)) out.push_back(integer(x, what));
  return out;
}

RationalVector rational_vector(const json& v, const char* what) {
  RationalVector out;
  for (const auto& x : array(v, what)) out.push_back(rational(x, what));
  return out;
}

std::vector<Complex> complex_vector(const json& v, const char* what) {
  std::vector<Complex> out;
  for (const auto& x : array(v, what)) out.push_back(complex_number(x, what));
  return out;
}

periods::Boundary boundary(const json& obj, const char* key) {
  const json* v = optional_field(obj, key);
  if (!v) return periods::Boundary::None;
  if (!v->is_string()) schema("boundary flag must be a string");
  const auto s = v->get<std::string>();
  if (s == "none") return periods::Boundary::None;
  if (s == "zero") return periods::Boundary::Zero;
  if (s == "infinity") return periods::Boundary::Infinity;
  schema("unknown boundary flag '" + s + "'");
}

periods::Segment segment(const json& v) {
  periods::Segment seg;
  const auto& kind = field(v, "kind");
  if (!kind.is_string()) schema("segment kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "line") seg.kind = periods::SegmentKind::Line;
  else if (k == "ray") seg.kind = periods::SegmentKind::Ray;
  else if (k == "arc") seg.kind = periods::SegmentKind::Arc;
  else schema("unknown segment kind '" + k + "'");
  seg.points = complex_vector(field(v, "points"), "segment points");
  if (seg.points.size() != 2) schema("a segment has exactly two control points");
  if (const json* s = optional_field(v, "sweep")) seg.sweep = number(*s, "sweep");
  if (const json* w = optional_field(v, "warp")) seg.warp = number(*w, "warp");
  seg.start = boundary(v, "start");
  seg.end = boundary(v, "end");
  return seg;
}

std::string num(double x) { return format_number(x); }
std::string num(Complex z) { return "(" + format_number(z.real()) + ", " + format_number(z.imag()) + ")"; }
ordered_json pair(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

tautsys::SystemSpec build_system(const Job& job) {
  tautsys::SystemSpec spec = [&] {
    if (job.system == "p1_unipotent") return tautsys::unipotent_p1_system();
    const auto a = lattice::homogenize(job.points, job.dim);
    const RationalVector beta = job.beta ? *job.beta : tautsys::calabi_yau_beta(a);
    if (beta.size() != a.num_rows()) schema("beta must have dim + 1 entries");
    return tautsys::gkz_system(a, beta, tautsys::GkzOptions{job.saturate});
  }();
  for (const auto& sym : job.symmetries) {
    if (sym.xi.size() != spec.nvars()) schema("symmetry matrix must be p x p");
    for (const auto& row : sym.xi)
      if (row.size() != spec.nvars()) schema("symmetry matrix must be p x p");
    spec.operators.push_back({tautsys::OperatorKind::Symmetry, tautsys::symmetry_operator(sym.xi, sym.beta)});
  }
  return spec;
}

std::string operator_text(const tautsys::SystemSpec& spec, const tautsys::Operator& op) {
  return op.op.render(spec.names);
}

ordered_json series_json(const series::ExactSeries& s) {
  ordered_json terms = ordered_json::array();
  for (const auto& [key, value] : s.terms)
    terms.push_back({{"offset", key.offset}, {"logs", key.logs}, {"coefficient", to_string(value)}});
  ordered_json gamma = ordered_json::array();
  for (const auto& g : s.gamma) gamma.push_back(to_string(g));
  return {{"gamma", gamma}, {"order", s.truncation}, {"terms", terms}};
}

periods::SectionData section_data(const Job& job, const tautsys::SystemSpec& spec) {
  if (!job.section) schema("this command needs a 'section'");
  if (job.section->a.size() != spec.nvars()) schema("section.a must have one coefficient per point");
  return periods::SectionData{spec.a, job.section->a, job.section->numerator_points, job.section->b};
}

periods::QuadratureSettings quadrature(const Job& job) {
  periods::QuadratureSettings q;
  q.tolerance = job.options.tolerance;
  return q;
}

Report cmd_build(const Job& job) {
  const auto spec = build_system(job);
  Report r;
  r.text = fmt::format("system {}\nvariables {}\noperators {}\n", spec.label, spec.nvars(), spec.operators.size());
  r.text += tautsys::render(spec);
  ordered_json ops = ordered_json::array();
  for (const auto& op : spec.operators)
    ops.push_back({{"kind", tautsys::to_string(op.kind)}, {"operator", operator_text(spec, op)}});
  r.machine = {{"command", "build"}, {"label", spec.label}, {"variables", spec.nvars()}, {"operators", ops}};
  return r;
}

Report cmd_rank(const Job& job) {
  const auto spec = build_system(job);
  const auto& points = spec.a.points();
  const Integer volume = lattice::normalized_volume(points);
  const Integer ehrhart = lattice::ehrhart_volume_oracle(points);
  const std::size_t kernel_rank = lattice::integer_kernel(spec.a).vectors.size();
  Report r;
  r.text = fmt::format("rank {}\nnormalized_volume {}\nehrhart_volume {}\nkernel_rank {}\n", volume.str(),
                       volume.str(), ehrhart.str(), kernel_rank);
  r.machine = {{"command", "rank"},
               {"rank", volume.str()},
               {"normalized_volume", volume.str()},
               {"ehrhart_volume", ehrhart.str()},
               {"kernel_rank", kernel_rank}};
  if (!job.rays.empty()) {
    RationalVector alpha = job.alpha ? *job.alpha : RationalVector(spec.beta.begin() + 1, spec.beta.end());
    if (alpha.size() != static_cast<std::size_t>(spec.a.dim())) schema("alpha must have dim entries");
    const auto star = lattice::check_property_star(alpha, lattice::FanRays(job.rays));
    r.text += fmt::format("property_star {}\n", star.holds ? "holds" : "fails");
    ordered_json rays = ordered_json::array();
    for (std::size_t k = 0; k < star.rays.size(); ++k) {
      const auto& v = star.rays[k];
      r.text += fmt::format("  ray {} pairing {} {}\n", k + 1, to_string(v.pairing), v.passes ? "ok" : "resonant");
      rays.push_back({{"pairing", to_string(v.pairing)}, {"passes", v.passes}});
    }
    r.machine["property_star"] = {{"holds", star.holds}, {"rays", rays}};
  }
  return r;
}

Report cmd_series(const Job& job) {
  const auto spec = build_system(job);
  series::FrobeniusOptions opts;
  opts.jet_degree = job.options.jet;
  const auto basis = series::frobenius_basis(spec, job.options.order, opts);
  const std::size_t count = series::count_independent(basis);
  const Integer volume = lattice::normalized_volume(spec.a.points());
  Report r;
  r.text = fmt::format("series {}\ncount {}\nvolume {}\n", basis.size(), count, volume.str());
  ordered_json list = ordered_json::array();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    r.text += fmt::format("series {}: ", k + 1) + series::render(basis[k]);
    list.push_back(series_json(basis[k]));
  }
  r.machine = {{"command", "series"}, {"count", count}, {"volume", volume.str()}, {"series", list}};
  return r;
}

Report cmd_verify(const Job& job) {
  const auto spec = build_system(job);
  const Candidate cand = job.candidate ? *job.candidate : Candidate{"period_series", {}, 1};
  std::vector<series::ExactSeries> candidates;
  if (cand.kind == "monomial") {
    if (cand.gamma.size() != spec.nvars()) schema("candidate.gamma must have one entry per variable");
    candidates.push_back(series::monomial_series(cand.gamma, cand.coefficient, job.options.order));
  } else if (cand.kind == "period_series") {
    candidates.push_back(periods::torus_period_series(spec.a, std::nullopt, job.options.order));
  } else if (cand.kind == "frobenius") {
    series::FrobeniusOptions opts;
    opts.jet_degree = job.options.jet;
    candidates = series::frobenius_basis(spec, job.options.order, opts);
  } else {
    schema("unknown candidate kind '" + cand.kind + "'");
  }

  Report r;
  bool all_clean = true;
  ordered_json list = ordered_json::array();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto report = series::annihilate_check(spec, candidates[c]);
    std::optional<periods::FiniteDifferenceReport> fd;
    if (job.fd) {
      if (job.fd->point.size() != spec.nvars()) schema("fd.point must have one entry per variable");
      const auto& s = candidates[c];
      periods::FiniteDifferenceOptions fo;
      fo.threads = job.options.threads;
      fd = periods::finite_difference_residual(
          spec, [&](std::span<const Complex> a) { return series::evaluate(s, a); }, job.fd->point, job.fd->step, fo);
    }
    r.text += fmt::format("candidate {} ({} terms)\n", c + 1, candidates[c].terms.size());
    ordered_json ops = ordered_json::array();
    for (std::size_t o = 0; o < spec.operators.size(); ++o) {
      const auto& res = report.operators[o];
      const std::string status = res.residual.terms.empty() ? "zero" : res.clean ? "clean" : "flagged";
      all_clean = all_clean && res.clean;
      const std::size_t nonzero = res.guaranteed.terms.size();
      const std::size_t frontier = res.residual.terms.size() - nonzero;
      r.text += fmt::format("  {} {}: {}", tautsys::to_string(spec.operators[o].kind),
                            operator_text(spec, spec.operators[o]), status);
      if (status == "clean") r.text += fmt::format(" (frontier {})", frontier);
      if (status == "flagged") r.text += fmt::format(" ({} nonzero, max {})", nonzero, num(static_cast<double>(res.max_abs)));
      r.text += "\n";
      ordered_json entry = {{"kind", tautsys::to_string(spec.operators[o].kind)},
                            {"operator", operator_text(spec, spec.operators[o])},
                            {"status", status},
                            {"nonzero", nonzero},
                            {"frontier", frontier}};
      if (fd) {
        const auto& f = fd->operators[o];
        const bool has_order = f.raw[0] > 0 && f.raw[1] > 0;
        r.text += fmt::format("    fd residual {} order {}\n", num(std::abs(f.residual)),
                              has_order ? fmt::format("{:.2f}", f.observed_order) : std::string("n/a"));
        entry["fd_residual"] = std::abs(f.residual);
        entry["fd_raw"] = f.raw;
        entry["fd_order"] = has_order ? ordered_json(f.observed_order) : ordered_json(nullptr);
      }
      ops.push_back(entry);
    }
    list.push_back({{"terms", candidates[c].terms.size()}, {"operators", ops}});
  }
  r.text += fmt::format("verdict {}\n", all_clean ? "clean" : "flagged");
  r.machine = {{"command", "verify"}, {"candidate", cand.kind}, {"verdict", all_clean ? "clean" : "flagged"},
               {"candidates", list}};
  return r;
}

Report cmd_period(const Job& job) {
  const auto spec = build_system(job);
  const auto section = section_data(job, spec);
  std::vector<double> radii = job.radii;
  if (radii.empty()) radii.assign(static_cast<std::size_t>(spec.a.dim()), 1.0);
  const auto cycle = periods::numeric_cycle_integral(section, radii, quadrature(job));
  Report r;
  r.text = fmt::format("cycle {} error {}\n", num(cycle.value), num(cycle.error));
  r.machine = {{"command", "period"}, {"cycle", pair(cycle.value)}, {"error", cycle.error}};
  if (spec.a.origin_index() >= 0 && section.numerator_points.empty()) {
    const auto s = periods::torus_period_series(spec.a, std::nullopt, job.options.order);
    const Complex value = series::evaluate(s, section.coeffs);
    r.text += fmt::format("series {} order {}\ndifference {}\n", num(value), job.options.order,
                          num(std::abs(value - cycle.value)));
    r.machine["series"] = pair(value);
    r.machine["difference"] = std::abs(value - cycle.value);
  }
  return r;
}

Report cmd_chain(const Job& job) {
  const auto spec = build_system(job);
  const auto section = section_data(job, spec);
  if (job.chains.empty()) schema("this command needs at least one chain");
  Report r;
  ordered_json list = ordered_json::array();
  for (std::size_t k = 0; k < job.chains.size(); ++k) {
    const auto value = section.numerator_points.empty()
                           ? periods::numeric_chain_integral(section, job.chains[k], quadrature(job))
                           : periods::general_type_integral(section, job.chains[k], quadrature(job));
    r.text += fmt::format("chain {} value {} error {}\n", k + 1, num(value.value), num(value.error));
    list.push_back({{"value", pair(value.value)}, {"error", value.error}});
  }
  ordered_json residues = ordered_json::array();
  const auto roots = periods::chart_roots(section);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    try {
      const Complex res = periods::residue_period(section, k);
      r.text += fmt::format("root {} {} residue {}\n", k + 1, num(roots[k]), num(res));
      residues.push_back({{"root", pair(roots[k])}, {"residue", pair(res)}});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::MultipleRoot) throw;
      r.text += fmt::format("root {} {} multiple\n", k + 1, num(roots[k]));
      residues.push_back({{"root", pair(roots[k])}, {"residue", nullptr}});
    }
  }
  r.machine = {{"command", "chain"}, {"chains", list}, {"residues", residues}};
  return r;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0) x = 0;  // drop the sign of negative zero
  return fmt::format("{:.15g}", x);
}

Job parse_job(const json& doc) {
  try {
    if (!doc.is_object()) schema("job must be an object");
    if (integer(field(doc, "schema_version"), "schema_version") != 1) schema("unsupported schema_version");
    Job job;
    if (const json* s = optional_field(doc, "system")) {
      if (!s->is_string()) schema("system must be a string");
      job.system = s->get<std::string>();
      if (job.system != "gkz" && job.system != "p1_unipotent") schema("unknown system '" + job.system + "'");
    }
    if (job.system == "gkz" || doc.contains("points")) {
      job.dim = static_cast<int>(integer(field(doc, "dim"), "dim"));
      for (const auto& p : array(field(doc, "points"), "points")) {
        job.points.push_back(int_vector(p, "point"));
        if (job.points.back().size() != static_cast<std::size_t>(job.dim)) schema("point dimension differs from dim");
      }
    }
    if (const json* b = optional_field(doc, "beta")) job.beta = rational_vector(*b, "beta");
    if (const json* rays = optional_field(doc, "rays"))
      for (const auto& v : array(*rays, "rays")) job.rays.push_back(int_vector(v, "ray"));
    if (const json* a = optional_field(doc, "alpha")) job.alpha = rational_vector(*a, "alpha");
    if (const json* syms = optional_field(doc, "symmetries"))
      for (const auto& s : array(*syms, "symmetries")) {
        Symmetry sym;
        for (const auto& row : array(field(s, "xi"), "xi")) sym.xi.push_back(rational_vector(row, "xi"));
        sym.beta = rational(field(s, "beta"), "symmetry beta");
        job.symmetries.push_back(std::move(sym));
      }
    if (const json* s = optional_field(doc, "saturate")) {
      if (!s->is_boolean()) schema("saturate must be a boolean");
      job.saturate = s->get<bool>();
    }
    if (const json* s = optional_field(doc, "section")) {
      Section sec;
      sec.a = complex_vector(field(*s, "a"), "section.a");
      if (const json* np = optional_field(*s, "numerator_points"))
        for (const auto& v : array(*np, "numerator_points")) sec.numerator_points.push_back(int_vector(v, "numerator point"));
      if (const json* b = optional_field(*s, "b")) sec.b = complex_vector(*b, "section.b");
      if (sec.b.size() != sec.numerator_points.size()) schema("section.b and numerator_points differ in length");
      job.section = std::move(sec);
    }
    if (const json* c = optional_field(doc, "candidate")) {
      Candidate cand;
      if (c->is_string()) {
        cand.kind = c->get<std::string>();
      } else {
        if (const json* k = optional_field(*c, "kind")) cand.kind = k->get<std::string>();
        if (const json* g = optional_field(*c, "gamma")) cand.gamma = rational_vector(*g, "candidate.gamma");
        if (const json* k = optional_field(*c, "coefficient")) cand.coefficient = rational(*k, "candidate.coefficient");
      }
      job.candidate = std::move(cand);
    }
    if (const json* chains = optional_field(doc, "chains"))
      for (const auto& ch : array(*chains, "chains")) {
        periods::ChainSpec spec;
        for (const auto& seg : array(field(ch, "segments"), "segments")) spec.segments.push_back(segment(seg));
        job.chains.push_back(std::move(spec));
      }
    if (const json* cyc = optional_field(doc, "cycle"))
      for (const auto& r : array(field(*cyc, "radii"), "radii")) job.radii.push_back(number(r, "radius"));
    if (const json* fd = optional_field(doc, "fd")) {
      FdSettings f;
      f.point = complex_vector(field(*fd, "point"), "fd.point");
      if (const json* h = optional_field(*fd, "step")) f.step = number(*h, "fd.step");
      job.fd = std::move(f);
    }
    if (const json* opts = optional_field(doc, "options")) {
      if (const json* n = optional_field(*opts, "order")) job.options.order = integer(*n, "order");
      if (const json* t = optional_field(*opts, "tolerance")) job.options.tolerance = number(*t, "tolerance");
      if (const json* j = optional_field(*opts, "jet")) job.options.jet = static_cast<std::size_t>(integer(*j, "jet"));
    }
    if (job.options.order < 0) schema("order must be nonnegative");
    if (!(job.options.tolerance > 0)) schema("tolerance must be positive");
    return job;
  } catch (const json::exception& e) {
    schema(e.what());
  }
}

Job parse_job_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    schema(std::string("malformed job file: ") + e.what());
  }
  return parse_job(doc);
}

Report run(const std::string& command, const Job& job) {
  if (command == "build") return cmd_build(job);
  if (command == "rank") return cmd_rank(job);
  if (command == "series") return cmd_series(job);
  if (command == "verify") return cmd_verify(job);
  if (command == "period") return cmd_period(job);
  if (command == "chain") return cmd_chain(job);
  schema("unknown command '" + command + "'");
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SchemaError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::VariableMismatch:
      return 2;
    case ErrorKind::NonConvergent:
      return 4;
    default:
      return 3;
  }
}

}  // namespace gkz::cli
