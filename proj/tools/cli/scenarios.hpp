#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "netsync/coupling_design.hpp"
#include "netsync/duality.hpp"
#include "netsync/dynamics.hpp"
#include "netsync/graph.hpp"

namespace netsync::cli {

std::filesystem::path default_fixture_dir();

/// Uniform draws in [center - spread, center + spread] per node and component.
Matrix seeded_initial_state(std::mt19937_64& rng, int n_nodes, const Vector& center, double spread);

struct SimulationDefaults {
  double t_end = 1.0;
  double dt = 1e-3;
  double tol = 1e-3;
};

struct Example1Fixture {
  Matrix A;
  Topology topology;
  Matrix laplacian_reference;
  double lambda2_reference;
  CMatrix modal_basis;
  std::vector<double> modal_entries_H2;
  Matrix H1, H2, H3;
  double sigma;
  SimulationDefaults sim;
};

struct DirectedEntryDesign {
  double modulus;
  double argument_deg;
  std::vector<cplx> entries;
};

struct Example2Fixture {
  Matrix A;
  Topology topology;
  Matrix laplacian_reference;
  cplx complex_pair_reference;
  double theta_max_deg_reference;
  DirectedEntryDesign design_H4, design_H5;
  Matrix H4, H5;
  double sigma;
  SimulationDefaults sim;
};

struct Example3Fixture {
  Matrix A;
  Topology topology;
  Matrix laplacian_reference;
  Matrix B6, B7, K;
  double c;
  Matrix H6, H7;
  SimulationDefaults sim;
};

struct RosslerFixture {
  RosslerParams params;
  double eps;
  double delta;
  Matrix psi1;
  double eps_baseline_sync;
  Vector initial_center;
  double initial_spread;
  double t_end;
  double dt;
  double relative_tol;
  double window_start;
  double window_end;
};

Example1Fixture load_example1(const std::filesystem::path& dir);
Example2Fixture load_example2(const std::filesystem::path& dir);
Example3Fixture load_example3(const std::filesystem::path& dir);
RosslerFixture load_rossler(const std::filesystem::path& dir);

struct ReproduceOptions {
  std::filesystem::path fixture_dir = default_fixture_dir();
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 42;
  std::optional<double> t_end;
  std::optional<double> dt;
  bool baseline = false;
  /// Stride for CSV rows; analysis always uses every step.
  int csv_every = 10;
};

struct ScenarioOutcome {
  std::string name;
  bool verdict = false;
  /// Human-readable findings, one per line.
  std::vector<std::string> notes;
};

/// Runs one named scenario (example1..example4, rossler) and writes its
/// artifacts under out_dir/<name>. Throws std::invalid_argument for unknown names.
ScenarioOutcome reproduce(const std::string& name, const ReproduceOptions& options);

// Building blocks shared with the acceptance suite.

/// Rossler ring run with the designed state-dependent coupling (H_eff form).
Trajectory rossler_designed_run(const RosslerFixture& fx, double eps, std::uint64_t seed,
                                const TimeGrid& grid);
/// Rossler ring run with the original y-selector coupling (connection form).
Trajectory rossler_baseline_run(const RosslerFixture& fx, double eps, std::uint64_t seed,
                                const TimeGrid& grid);

}  // namespace netsync::cli
