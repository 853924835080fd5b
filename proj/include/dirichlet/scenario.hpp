#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dirichlet/boundary.hpp"
#include "dirichlet/conformal.hpp"
#include "dirichlet/quadrature.hpp"

namespace dirichlet {

struct DomainSpec {
  enum class Kind { Disk, Map, Polygon };
  Kind kind = Kind::Disk;
  std::string map;  // identity, mobius, cardioid, perturbed
  std::complex<double> mobius_a = 0.0;
  double mobius_phi = 0.0;
  double perturbed_eps = 0.0;
  std::vector<std::complex<double>> vertices;

  std::string describe() const;
};

struct BoundarySpec {
  std::string builtin;
  std::vector<double> params;
  std::string expression;
  /// Parameter period of an expression; the disk uses 2 pi, curves their length.
  std::optional<double> period;
  std::vector<SingularityAnnotation> annotations;
};

/// A YAML scenario:
///
///   name: square-wave
///   problem:
///     domain: disk                    # or cardioid, {map: mobius, a: [x, y], phi: p},
///                                     # {map: perturbed, eps: e}, {polygon: [[x, y], ...]}
///     boundary:
///       builtin: square_wave          # or expression: "cos(2*pi*t/8)"
///       params: []
///       annotations: [{position: 0, kind: jump}]
///   solver: {K: 256, rel_tol: 1e-10, max_depth: 60, correspondence_grid: 4096, polygon_tol: 1e-10}
///   outputs: {grid: 33, format: text, grid_path: u.csv, report_path: report.txt, probes: [[0.3, 0.4]]}
///   verify: {seed: 20240611}
///   classify: {K: 16384, positions: [0.0]}
///   chain: {levels: [-1, 0, 1], count: 8}
struct Scenario {
  std::string name = "scenario";
  DomainSpec domain;
  BoundarySpec boundary;

  int harmonics = 256;
  QuadratureConfig quadrature;
  int correspondence_grid = 4096;
  double polygon_tol = 1e-10;

  int grid = 33;
  bool key_values = false;
  std::string grid_path;
  std::string report_path;
  std::vector<std::complex<double>> probes;

  std::uint64_t seed = 20240611;
  int classify_harmonics = 16384;
  std::vector<double> classify_positions;
  std::vector<int> chain_levels{-1, 0, 1};
  int chain_count = 8;
};

/// Throws ScenarioError on malformed input.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// Map for a non-disk domain.
ConformalMap build_map(const Scenario& s);
/// Boundary data over [0, period).
BoundaryFunction build_boundary(const BoundarySpec& spec, double period);

/// Runs a subcommand (solve, verify, classify, chain, map-info). Results go to
/// the scenario's output path when set, otherwise to `out`; diagnostics go to
/// `err`. Returns 0 on success, 1 for input errors, 2 when validation fails
/// and 3 for numerical failures (including a failing verification report).
int run(const std::string& command, const Scenario& s, std::ostream& out, std::ostream& err);

int exit_status(ErrorCode code);

}  // namespace dirichlet
