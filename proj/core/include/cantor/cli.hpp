#pragma once

// Command layer shared by the binary and the tests: a parsed run
// configuration in, a deterministic report out.  Reports are JSON with
// schema "cantor-spectra/1"; every numeric value is tagged "exact" or
// "interval" and rendered as exact rational strings, so a given tool
// version, input, and config yield byte-identical output.  Wall-clock
// timing goes to the log stream, never into the report.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cantor {

struct RunConfig {
  std::string command;  // measures|eigen|rational|invariants|torsion|audit|
                        // suffixes|diagnostic|catalog
  // Tower source: catalog name or inline/loaded spec JSON.
  std::optional<std::string> catalog;
  std::optional<std::string> spec_json;
  int levels = 12;

  std::optional<std::string> alpha;  // eigen: expression grammar
  int m = 2;
  int N = 25;
  int depth = 64;
  bool trust_catalog = false;
  std::optional<std::string> expect;  // "eigen" | "refuted"

  std::optional<std::string> frac;  // rational: "p/q"

  int level = 1;        // suffixes/torsion/measures single-level ops
  std::string eps = "1/1000000";  // measures enclosure target width

  int wbox = 2, kmax = 3;  // audit

  // torsion via explicit generators
  std::optional<std::string> field;  // minpoly text, largest real root
  std::optional<std::string> igens;  // comma-separated expressions
  std::optional<std::string> egens;

  int threads = 0;  // 0: take CANTOR_SPECTRA_THREADS, else 1
};

struct CliResult {
  int exit_code = 0;   // 0 ok, 1 error, 2 failed --expect assertion
  std::string json;    // the report (or an error object)
  std::string text;    // human-readable rendering
  std::string log;     // timing and progress lines, not part of the report
};

CliResult run(const RunConfig& config);

extern const char* kSchemaName;   // "cantor-spectra/1"
extern const char* kToolVersion;

}  // namespace cantor
