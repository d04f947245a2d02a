#include <iostream>

#include <CLI11.hpp>

#include "topo/cli/commands.hpp"

namespace {

void common_options(CLI::App* sub, topo::cli::RunConfig& c, std::string& grid,
                    std::string& bulk_grid) {
  sub->add_option("--model", c.model, "model file or builtin:<spec>")->required();
  sub->add_option("--mu", c.mu, "Fermi level");
  sub->add_option("--delta", c.delta, "imaginary part of the energy (0: 1e-2 x gap)");
  sub->add_option("--grid", grid, "points per axis, N or N,N,N");
  sub->add_option("--bulk-grid", bulk_grid, "bulk points per axis for the verify commands");
  sub->add_option("--depth", c.depth, "truncation depth, or exp-map strip for bbc");
  sub->add_option("--strip", c.strip, "strip width N of the boundary Green matrix");
  sub->add_option("--epsilon", c.epsilon, "Cayley scaling epsilon");
  sub->add_option("--route", c.route, "Green route: transfer or truncated");
  sub->add_option("--output", c.output, "CSV output file (default stdout)");
  sub->add_option("--jobs", c.jobs, "worker threads (0: all cores)");
  sub->add_option("--seed", c.seed, "seed for randomized suites");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological invariants of periodic tight-binding insulators"};
  app.require_subcommand(1);
  topo::cli::RunConfig c;
  std::string grid, bulk_grid, values;

  auto* chern = app.add_subcommand("chern-bulk", "bulk Chern number of the Fermi projection");
  common_options(chern, c, grid, bulk_grid);

  auto* verify = app.add_subcommand("verify", "bbc, theorem1, theorem2 or properties");
  verify->add_option("which", c.which, "check to run")
      ->required()
      ->check(CLI::IsMember({"bbc", "theorem1", "theorem2", "properties"}));
  common_options(verify, c, grid, bulk_grid);
  verify->get_option("--model")->required(false);
  verify->add_option("--wire", c.wire, "wire model for theorem2 (default: L chains)");
  verify->add_option("--samples", c.samples, "random samples per property suite");

  auto* sweep = app.add_subcommand("sweep", "boundary winding across a parameter");
  common_options(sweep, c, grid, bulk_grid);
  sweep->add_option("--vary", c.vary, "delta, epsilon, grid or strip_N")
      ->required()
      ->check(CLI::IsMember({"delta", "epsilon", "grid", "strip_N"}));
  sweep->add_option("--values", values, "comma separated parameter values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : topo::cli::kUsage;
  }
  for (auto* sub : {chern, verify, sweep}) {
    if (sub->parsed()) c.command = sub->get_name();
  }
  try {
    if (!grid.empty()) c.grid = topo::cli::parse_grid(grid);
    if (!bulk_grid.empty()) c.bulk_grid = topo::cli::parse_grid(bulk_grid);
    if (!values.empty()) c.values = topo::cli::parse_list(values);
  } catch (const topo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return topo::cli::kUsage;
  }
  if (c.model.empty() && !(c.command == "verify" && c.which == "properties")) {
    std::cerr << "error: --model is required\n";
    return topo::cli::kUsage;
  }
  return topo::cli::run(c, std::cout, std::cerr);
}
