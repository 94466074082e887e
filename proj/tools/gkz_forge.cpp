#include "gkz/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Build, solve and integrate GKZ / tautological systems from a JSON job file"};
  app.require_subcommand(1);

  std::string input;
  std::optional<long long> order;
  std::optional<double> tolerance;
  std::optional<std::size_t> jet;
  std::optional<std::size_t> threads;
  std::string report = "text";

  const std::pair<const char*, const char*> commands[] = {
      {"build", "print the operators of the system"},
      {"rank", "normalized volume, Ehrhart check and series count"},
      {"series", "Frobenius or torus period series"},
      {"verify", "symbolic and finite-difference residuals of a candidate"},
      {"period", "torus cycle integral against the period series"},
      {"chain", "integrals over chains and residues of the chart"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--input", input, "job file (JSON)")->required();
    sub->add_option("--order", order, "series truncation order N");
    sub->add_option("--tol", tolerance, "quadrature tolerance");
    sub->add_option("--jet", jet, "eps-jet degree for series (0: torus dimension)");
    sub->add_option("--report", report, "report format")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--threads", threads, "worker threads for sampling");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(input);
    if (!in) throw gkz::Error(gkz::ErrorKind::SchemaError, "cannot read " + input);
    std::stringstream buffer;
    buffer << in.rdbuf();
    gkz::cli::Job job = gkz::cli::parse_job_text(buffer.str());

    if (order) job.options.order = *order;
    if (tolerance) job.options.tolerance = *tolerance;
    if (jet) job.options.jet = *jet;
    if (threads) {
      job.options.threads = *threads;
    } else if (const char* env = std::getenv("GKZ_FORGE_THREADS")) {
      job.options.threads = static_cast<std::size_t>(std::max(1L, std::strtol(env, nullptr, 10)));
    }
    if (job.options.order < 0 || !(job.options.tolerance > 0))
      throw gkz::Error(gkz::ErrorKind::SchemaError, "order must be >= 0 and tolerance > 0");

    const auto result = gkz::cli::run(command, job);
    if (report == "machine")
      std::cout << result.machine.dump(2) << "\n";
    else
      std::cout << result.text;
    return 0;
  } catch (const gkz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gkz::cli::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
