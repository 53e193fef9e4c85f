#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "netsync/coupling_design.hpp"
#include "netsync/duality.hpp"
#include "netsync/dynamics.hpp"
#include "netsync/errors.hpp"
#include "netsync/graph.hpp"
#include "netsync/io.hpp"
#include "scenarios.hpp"

namespace netsync::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string topology;
  std::string a_path;
  std::string mode;
  std::string poles;
  double sigma = 1.0;
  std::optional<double> margin;
  std::optional<double> uniform_h;
  std::optional<double> argument_deg;
  std::optional<double> modulus;
  std::optional<double> theta_max_deg;
  std::string b_path;
  std::string k_path;
  std::string h_path;
  double c = 1.0;
  std::string direction;
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<double> tol;
  std::uint64_t seed = 42;
  std::string out = ".";
  bool baseline = false;
  std::string scenario;
  std::string fixtures;
  int csv_every = 10;
};

Matrix load_matrix(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string("missing required option ") + flag);
  return io::matrix_from_json(io::read_json(path));
}

Topology load_topology(const std::string& path) {
  if (path.empty()) throw UsageError("missing required option --topology");
  return io::topology_from_json(io::read_json(path));
}

std::vector<double> parse_poles(const std::string& text) {
  std::vector<double> poles;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      poles.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse pole '" + item + "'");
    }
  }
  return poles;
}

int cmd_spectrum(const Config& cfg, std::ostream& out) {
  const Laplacian lap = build_laplacian(load_topology(cfg.topology));
  const auto spec = spectrum(lap);
  const bool connected = is_connected(spec);
  io::write_json(fs::path(cfg.out) / "spectrum.json", io::spectrum_to_json(spec, connected));
  out << "lambda2 = " << spec.lambda2.real() << (spec.lambda2.imag() < 0 ? " - " : " + ")
      << std::abs(spec.lambda2.imag()) << "i, theta_max = " << spec.theta_max / kDeg
      << " deg, connected = " << (connected ? "true" : "false") << "\n";
  return kOk;
}

int cmd_design(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Matrix a = load_matrix(cfg.a_path, "--A");
  const Topology topo = load_topology(cfg.topology);
  const std::string mode = cfg.mode.empty() ? (topo.directed() ? "directed" : "undirected") : cfg.mode;
  if ((mode == "undirected" && topo.directed()) || (mode == "directed" && !topo.directed())) {
    throw UsageError(mode + " design requested for a" + (topo.directed() ? " directed" : "n undirected") + " topology");
  }
  const auto spec = spectrum(build_laplacian(topo));
  if (spec.defective) throw PreconditionViolation("Laplacian spectrum is flagged defective");
  if (!is_connected(spec)) throw PreconditionViolation("topology is not connected");

  const ModalDecomposition decomp = decompose(a, {.allow_defective = true});
  if (decomp.defective) err << "warning: A is not reliably diagonalizable; only scalar couplings can be realized\n";
  std::optional<std::vector<double>> poles;
  if (!cfg.poles.empty()) poles = parse_poles(cfg.poles);

  ModalCouplingSpec modal;
  if (cfg.uniform_h) {
    modal.entries.assign(static_cast<std::size_t>(decomp.dimension()), cplx(*cfg.uniform_h, 0.0));
    modal.sigma = cfg.sigma;
  } else if (mode == "undirected") {
    UndirectedDesign d;
    d.poles = poles;
    d.sigma = cfg.sigma;
    if (cfg.margin) d.margin = *cfg.margin;
    modal = design_undirected(decomp, spec.lambda2.real(), d);
  } else if (mode == "directed") {
    if (!cfg.argument_deg) throw UsageError("directed design needs --argument DEG");
    DirectedDesign d;
    d.argument = *cfg.argument_deg * kDeg;
    d.poles = poles;
    d.modulus = cfg.modulus;
    d.sigma = cfg.sigma;
    if (cfg.margin) d.margin = *cfg.margin;
    const double theta_max = cfg.theta_max_deg ? *cfg.theta_max_deg * kDeg : spec.theta_max;
    modal = design_directed(decomp, largest_argument_eigenvalue(spec), theta_max, d);
  } else {
    throw UsageError("--mode must be undirected or directed");
  }

  const CouplingMatrices coupling = realize(modal, decomp);
  const ModeAnalysis analysis = verify(a, coupling.H_eff, modal.sigma, spec);
  io::write_json(fs::path(cfg.out) / "design_report.json", io::design_report(modal, coupling, analysis));
  out << "hurwitz = " << (analysis.overall_hurwitz ? "true" : "false")
      << ", slowest transverse rate = " << analysis.slowest_rate() << "\n";
  return analysis.overall_hurwitz ? kOk : kDomainFailure;
}

int cmd_dualize(const Config& cfg, std::ostream& out) {
  const Matrix b = load_matrix(cfg.b_path, "--B");
  json report = {{"B", io::matrix_to_json(b)}, {"c", cfg.c}};
  std::optional<int> rank;
  if (!cfg.a_path.empty()) {
    const Matrix a = load_matrix(cfg.a_path, "--A");
    rank = controllability(a, b);
    report["controllability_rank"] = *rank;
  }
  if (cfg.direction == "gain-to-h") {
    const Matrix k = load_matrix(cfg.k_path, "--K");
    const Matrix h_kn = k.cols() == 1 && k.rows() == b.rows() && b.cols() == 1 ? Matrix(k.transpose()) : k;
    const Matrix h = h_from_gain(b, h_kn);
    report["K"] = io::matrix_to_json(h_kn);
    report["H"] = io::matrix_to_json(h);
    report["residual"] = 0.0;
  } else if (cfg.direction == "h-to-gain") {
    const Matrix h = load_matrix(cfg.h_path, "--H");
    const GainRecovery rec = gain_from_h(b, h);
    report["H"] = io::matrix_to_json(h);
    report["K"] = io::matrix_to_json(rec.K);
    report["residual"] = rec.residual;
  } else {
    throw UsageError("--direction must be gain-to-h or h-to-gain");
  }
  io::write_json(fs::path(cfg.out) / "dualize_report.json", report);
  out << report.dump() << "\n";
  if (rank && *rank < b.rows()) {
    throw PreconditionViolation("(A, B) is not controllable (rank " + std::to_string(*rank) + ")");
  }
  return kOk;
}

int cmd_simulate(const Config& cfg, std::ostream& out, std::ostream& err) {
  const Matrix a = load_matrix(cfg.a_path, "--A");
  const Matrix h = load_matrix(cfg.h_path, "--H");
  const Laplacian lap = build_laplacian(load_topology(cfg.topology));
  TimeGrid grid;
  grid.t_end = cfg.t_end.value_or(10.0);
  grid.dt = cfg.dt.value_or(1e-3);
  const LinearNetworkSystem sys{a, h, cfg.sigma, lap};
  const double stiff = stiffness(sys);
  if (stiff * grid.dt >= 2.5) {
    err << "warning: |max eig| * dt = " << stiff * grid.dt << " exceeds the RK4 stability guard 2.5\n";
  }
  std::mt19937_64 rng(cfg.seed);
  const Matrix x0 = seeded_initial_state(rng, lap.n_nodes(), Vector::Zero(a.rows()), 1.0);
  const Trajectory traj = simulate_linear(sys, x0, grid);
  const SyncReport r = sync_error(traj, cfg.tol.value_or(1e-3));
  io::write_text_atomic(fs::path(cfg.out) / "trajectory.csv", io::trajectory_csv(traj));
  io::write_json(fs::path(cfg.out) / "sync_report.json", io::sync_report_to_json(r));
  out << io::sync_report_to_json(r).dump() << "\n";
  if (traj.diverged) err << "warning: trajectory diverged and was truncated\n";
  return kOk;
}

int cmd_reproduce(const Config& cfg, std::ostream& out) {
  ReproduceOptions o;
  if (!cfg.fixtures.empty()) o.fixture_dir = cfg.fixtures;
  o.out_dir = cfg.out;
  o.seed = cfg.seed;
  o.t_end = cfg.t_end;
  o.dt = cfg.dt;
  o.baseline = cfg.baseline;
  o.csv_every = cfg.csv_every;

  std::vector<std::pair<std::string, bool>> runs;
  if (cfg.scenario == "all") {
    for (const char* name : {"example1", "example2", "example3", "example4", "rossler"}) runs.emplace_back(name, false);
    runs.emplace_back("rossler", true);
  } else {
    static const std::vector<std::string> known{"example1", "example2", "example3", "example4", "rossler"};
    if (std::find(known.begin(), known.end(), cfg.scenario) == known.end()) {
      throw UsageError("unknown scenario '" + cfg.scenario + "'");
    }
    runs.emplace_back(cfg.scenario, cfg.baseline);
  }

  bool all_ok = true;
  for (const auto& [name, baseline] : runs) {
    o.baseline = baseline;
    const ScenarioOutcome outcome = reproduce(name, o);
    out << outcome.name << ": " << (outcome.verdict ? "expected verdict" : "UNEXPECTED verdict") << "\n";
    for (const auto& note : outcome.notes) out << "  " << note << "\n";
    all_ok = all_ok && outcome.verdict;
  }
  return all_ok ? kOk : kDomainFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inner coupling design and verification for synchronizing networks", "netsync"};
  app.require_subcommand(1);
  Config cfg;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "Output directory"); };

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Laplacian spectrum of a topology");
  spectrum_cmd->add_option("--topology", cfg.topology, "Topology JSON")->required();
  add_out(spectrum_cmd);

  auto* design_cmd = app.add_subcommand("design", "Design, realize and verify an inner coupling matrix");
  design_cmd->add_option("--topology", cfg.topology, "Topology JSON")->required();
  design_cmd->add_option("--A", cfg.a_path, "Isolated dynamics matrix JSON")->required();
  design_cmd->add_option("--mode", cfg.mode, "undirected|directed (default from topology)");
  design_cmd->add_option("--poles", cfg.poles, "Comma-separated desired poles p1,...,pn");
  design_cmd->add_option("--sigma", cfg.sigma, "Coupling strength");
  design_cmd->add_option("--margin", cfg.margin, "Stability margin when no poles are given");
  design_cmd->add_option("--uniform-h", cfg.uniform_h, "Uniform real modal entry (effective sign)");
  design_cmd->add_option("--argument", cfg.argument_deg, "Directed design: |arg h_ii| in degrees");
  design_cmd->add_option("--modulus", cfg.modulus, "Directed design: |h_ii|");
  design_cmd->add_option("--theta-max", cfg.theta_max_deg, "Override the topology's theta_max (degrees)");
  add_out(design_cmd);

  auto* dualize_cmd = app.add_subcommand("dualize", "Convert between feedback gains and inner coupling");
  dualize_cmd->add_option("--direction", cfg.direction, "gain-to-h|h-to-gain")->required();
  dualize_cmd->add_option("--B", cfg.b_path, "Input matrix JSON")->required();
  dualize_cmd->add_option("--K", cfg.k_path, "Gain matrix JSON (gain-to-h)");
  dualize_cmd->add_option("--H", cfg.h_path, "Inner coupling H_inner JSON (h-to-gain)");
  dualize_cmd->add_option("--A", cfg.a_path, "Agent dynamics JSON for the controllability check");
  dualize_cmd->add_option("--c", cfg.c, "Coupling strength");
  add_out(dualize_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a linear network with a given H_eff");
  simulate_cmd->add_option("--topology", cfg.topology, "Topology JSON")->required();
  simulate_cmd->add_option("--A", cfg.a_path, "Isolated dynamics matrix JSON")->required();
  simulate_cmd->add_option("--H", cfg.h_path, "Effective coupling H_eff JSON")->required();
  simulate_cmd->add_option("--sigma", cfg.sigma, "Coupling strength");
  simulate_cmd->add_option("--t-end", cfg.t_end, "Horizon");
  simulate_cmd->add_option("--dt", cfg.dt, "Step size");
  simulate_cmd->add_option("--tol", cfg.tol, "Synchronization tolerance");
  simulate_cmd->add_option("--seed", cfg.seed, "Seed for initial conditions");
  add_out(simulate_cmd);

  auto* reproduce_cmd = app.add_subcommand("reproduce", "Reproduce a reference scenario");
  reproduce_cmd->add_option("name", cfg.scenario, "example1|example2|example3|example4|rossler|all")->required();
  reproduce_cmd->add_flag("--baseline", cfg.baseline, "Rossler: original y-selector coupling");
  reproduce_cmd->add_option("--seed", cfg.seed, "Seed for initial conditions");
  reproduce_cmd->add_option("--t-end", cfg.t_end, "Override the horizon");
  reproduce_cmd->add_option("--dt", cfg.dt, "Override the step size");
  reproduce_cmd->add_option("--fixtures", cfg.fixtures, "Fixture directory");
  reproduce_cmd->add_option("--csv-every", cfg.csv_every, "Write every k-th sample to CSV");
  add_out(reproduce_cmd);

  std::vector<std::string> argv_storage{"netsync"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageFailure;
  }

  try {
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, out);
    if (design_cmd->parsed()) return cmd_design(cfg, out, err);
    if (dualize_cmd->parsed()) return cmd_dualize(cfg, out);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, out, err);
    if (reproduce_cmd->parsed()) return cmd_reproduce(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const InvalidTopology& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return kUsageFailure;
  } catch (const InvalidLaplacian& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return kUsageFailure;
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return kDomainFailure;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const io::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kUsageFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageFailure;
  }
  return kUsageFailure;
}

}  // namespace netsync::cli
