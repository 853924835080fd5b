#include <CLI11.hpp>

#include <iostream>

#include "dirichlet/error.hpp"
#include "dirichlet/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet problem of the Laplace equation on the disk and on mapped curves"};
  app.require_subcommand(1);

  std::string path;
  std::optional<int> k, grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::vector<int> levels;

  auto common = [&](CLI::App* sub) {
    sub->add_option("scenario", path, "Scenario file (YAML)")->required();
    sub->add_option("--k", k, "Number of harmonics K");
    sub->add_option("--tol", tol, "Quadrature relative tolerance");
    sub->add_option("--out", out, "Output file");
  };
  CLI::App* solve = app.add_subcommand("solve", "Solve and write u on a grid (CSV)");
  common(solve);
  solve->add_option("--grid", grid, "Grid points per axis");
  CLI::App* verify = app.add_subcommand("verify", "Solve and write a verification report");
  common(verify);
  verify->add_option("--seed", seed, "Seed for random test points");
  CLI::App* classify = app.add_subcommand("classify", "Classify the annotated boundary points");
  common(classify);
  CLI::App* chain = app.add_subcommand("chain", "Print Taylor coefficients of chain members");
  common(chain);
  chain->add_option("--levels", levels, "Chain levels (negative: primitives)");
  CLI::App* map_info = app.add_subcommand("map-info", "Print the map, its corners and the boundary length");
  common(map_info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    dirichlet::Scenario s = dirichlet::load_scenario(path);
    if (k) {
      s.harmonics = *k;
      s.classify_harmonics = *k;
    }
    if (tol) s.quadrature.rel_tol = *tol;
    if (grid) s.grid = *grid;
    if (seed) s.seed = *seed;
    if (!levels.empty()) s.chain_levels = levels;
    if (out) s.grid_path = s.report_path = *out;
    if (s.grid < 2 || s.harmonics < 1) throw dirichlet::Error(dirichlet::ErrorCode::ScenarioError, "--grid must be >= 2 and --k >= 1");
    return dirichlet::run(app.get_subcommands().front()->get_name(), s, std::cout, std::cerr);
  } catch (const dirichlet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dirichlet::exit_status(e.code());
  }
}
