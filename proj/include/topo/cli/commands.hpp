#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "topo/error.hpp"

namespace topo::cli {

enum ExitCode { kOk = 0, kUsage = 1, kModelOrGap = 2, kConvergence = 3 };

struct RunConfig {
  std::string command;  // chern-bulk | verify | sweep
  std::string which;    // verify: bbc | theorem1 | theorem2 | properties
  std::string model;    // file path or builtin:<spec>
  std::string wire;     // optional wire for theorem2; defaults to L chains
  double mu = 0.0;
  double delta = 0.0;   // 0: 1e-2 times the bulk gap
  int grid = 0;         // points per axis; 0: default for the command
  int bulk_grid = 0;
  int depth = 0;        // truncation depth or exp-map strip; 0: default
  int strip = 1;
  double epsilon = 0.5;
  std::string route = "transfer";  // transfer | truncated
  std::string output;   // empty: stdout
  int jobs = 0;
  std::uint64_t seed = 42;
  std::string vary;     // sweep: delta | epsilon | grid | strip_N
  std::vector<double> values;
  int samples = 100;    // properties: random samples per suite
};

/// Parses "N" or "N,N,N"; all entries must agree since grids are uniform.
int parse_grid(const std::string& text);
std::vector<double> parse_list(const std::string& text);

/// Runs one command, writing CSV to config.output (or `out`) and diagnostics
/// to `err`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Exit code for an engine error code.
int exit_code_for(ErrorCode code);

}  // namespace topo::cli
