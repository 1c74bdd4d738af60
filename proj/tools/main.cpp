// Command-line front end: flags to RunConfig, report to stdout.
// Default output is the text rendering; --json swaps in the JSON report,
// --output writes the JSON report to a file as well, --verbose sends the
// timing log to stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cantor/cli.hpp"
#include "cantor/rational.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cantor::Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Kakutani-Rohlin tower sequences: invariant measures, "
               "dimension-group invariants, and the continuous-eigenvalue battery"};
  app.set_version_flag("--version", std::string(cantor::kToolVersion));
  app.require_subcommand(1);

  cantor::RunConfig cfg;
  std::string spec_path;
  bool json_out = false;
  bool verbose = false;
  std::string out_path;

  app.add_flag("--json", json_out, "print the JSON report instead of text");
  app.add_flag("-v,--verbose", verbose, "print the timing log to stderr");
  app.add_option("--output", out_path, "also write the JSON report to this file");

  auto tower_opts = [&](CLI::App* c) {
    c->add_option("--catalog", cfg.catalog, "built-in system name (see `catalog`)");
    c->add_option("--spec", spec_path, "diagram spec JSON file")
        ->check(CLI::ExistingFile);
    c->add_option("--levels", cfg.levels, "tower levels to build")
        ->capture_default_str();
  };

  CLI::App* measures = app.add_subcommand("measures", "invariant measure of the tower bases");
  tower_opts(measures);
  measures->add_option("--level", cfg.level, "report the measure vector at this level")
      ->capture_default_str();
  measures->add_option("--eps", cfg.eps, "enclosure width target, a rational")
      ->capture_default_str();

  CLI::App* eigen = app.add_subcommand("eigen", "continuous-eigenvalue candidate battery");
  tower_opts(eigen);
  eigen->add_option("--alpha", cfg.alpha,
                    "candidate: \"p/q\", \"(a+b*sqrt(d))/c\", or coords:[..]@minpoly")
      ->required();
  eigen->add_option("--m", cfg.m, "battery base level")->capture_default_str();
  eigen->add_option("--N", cfg.N, "battery depth")->capture_default_str();
  eigen->add_option("--depth", cfg.depth, "height-divisibility scan depth")
      ->capture_default_str();
  eigen->add_flag("--trust-catalog", cfg.trust_catalog,
                  "certify an angle the spec declares by construction");
  eigen->add_option("--expect", cfg.expect, "assert the outcome: eigen|refuted|passes");

  CLI::App* rational = app.add_subcommand("rational", "rational eigenvalue membership");
  tower_opts(rational);
  rational->add_option("--frac", cfg.frac, "candidate p/q")->required();
  rational->add_option("--depth", cfg.depth, "levels to scan")->capture_default_str();
  rational->add_option("--expect", cfg.expect, "assert the outcome: member|nonmember");

  CLI::App* invariants =
      app.add_subcommand("invariants", "image subgroup and infinitesimal triviality");
  tower_opts(invariants);
  invariants->add_option("--level", cfg.level, "image approximant level")
      ->capture_default_str();

  CLI::App* torsion = app.add_subcommand("torsion", "invariant factors of I/E");
  torsion->add_option("--catalog", cfg.catalog, "group-level catalog entry");
  torsion->add_option("--level", cfg.level, "approximant level for leveled entries")
      ->capture_default_str();
  torsion->add_option("--field", cfg.field, "minimal polynomial, largest real root");
  torsion->add_option("--igens", cfg.igens, "comma-separated generators of I");
  torsion->add_option("--egens", cfg.egens, "comma-separated generators of E");

  CLI::App* audit = app.add_subcommand("audit", "torsion audit of the passing candidate set");
  tower_opts(audit);
  audit->add_option("--m", cfg.m, "candidate level")->capture_default_str();
  audit->add_option("--N", cfg.N, "battery depth")->capture_default_str();
  audit->add_option("--wbox", cfg.wbox, "candidate coefficient box radius")
      ->capture_default_str();
  audit->add_option("--kmax", cfg.kmax, "largest multiplier checked")->capture_default_str();
  audit->add_option("--threads", cfg.threads,
                    "worker threads (0: take CANTOR_SPECTRA_THREADS, else 1)");

  CLI::App* suffixes = app.add_subcommand("suffixes", "suffix tail-count vectors of a level");
  tower_opts(suffixes);
  suffixes->add_option("--level", cfg.level, "level whose sub-column tails are listed")
      ->capture_default_str();

  CLI::App* diagnostic =
      app.add_subcommand("diagnostic", "row-convergence rate of transition products");
  tower_opts(diagnostic);
  diagnostic->add_option("--m", cfg.m, "target level")->capture_default_str();
  diagnostic->add_option("--N", cfg.N, "deepest level")->capture_default_str();

  app.add_subcommand("catalog", "list the built-in systems");

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (!spec_path.empty()) cfg.spec_json = read_file(spec_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  cantor::CliResult res = cantor::run(cfg);

  if (verbose) std::cerr << res.log;
  std::cout << (json_out ? res.json : res.text);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 1;
    }
    out << res.json;
  }
  return res.exit_code;
}
