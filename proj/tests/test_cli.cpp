#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "netsync/io.hpp"

namespace fs = std::filesystem;
using netsync::cli::run_cli;

namespace {

const fs::path kData = fs::path(NETSYNC_FIXTURE_DIR).parent_path();

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string topo(const char* name) { return (kData / "topologies" / name).string(); }
std::string mat(const char* name) { return (kData / "matrices" / name).string(); }

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("spectrum command") {
  TempDir dir("netsync_cli_spectrum");
  auto r = run({"spectrum", "--topology", topo("example1.json"), "--out", dir.str()});
  CHECK(r.code == 0);
  const auto j = netsync::io::read_json(dir.path / "spectrum.json");
  CHECK(j["lambda2"][0].get<double>() == doctest::Approx(0.3820).epsilon(1e-3));
  CHECK(j["connected"] == true);

  r = run({"spectrum", "--topology", topo("disconnected.json"), "--out", dir.str()});
  CHECK(r.code == 0);
  CHECK(netsync::io::read_json(dir.path / "spectrum.json")["connected"] == false);

  r = run({"spectrum", "--topology", topo("single_node.json"), "--out", dir.str()});
  CHECK(r.code == 2);
  CHECK(r.err.find("InvalidTopology") != std::string::npos);

  CHECK(run({"spectrum", "--topology", (dir.path / "absent.json").string()}).code == 2);
  CHECK(run({"spectrum"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("design command") {
  TempDir dir("netsync_cli_design");
  auto r = run({"design", "--topology", topo("example1.json"), "--A", mat("A_example1.json"), "--uniform-h", "-20",
                "--out", dir.str()});
  CHECK(r.code == 0);
  auto j = netsync::io::read_json(dir.path / "design_report.json");
  CHECK(j["hurwitz"] == true);
  CHECK(j["H_eff"][3][3] == -20.0);
  CHECK(j["H_eff"][0][1] == 0.0);

  r = run({"design", "--topology", topo("example2.json"), "--A", mat("A_example2.json"), "--argument", "153.4349",
           "--modulus", "1.118033988749895", "--out", dir.str()});
  CHECK(r.code == 0);
  j = netsync::io::read_json(dir.path / "design_report.json");
  const double h4[2][2] = {{-1.1768, -0.5303}, {0.5303, -0.8232}};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) CHECK(j["H_eff"][i][k].get<double>() == doctest::Approx(h4[i][k]).epsilon(1e-4));

  r = run({"design", "--topology", topo("cycle3.json"), "--A", mat("A_example2.json"), "--argument", "100", "--out",
           dir.str()});
  CHECK(r.code == 1);
  CHECK(r.err.find("ArgumentMarginViolation") != std::string::npos);

  r = run({"design", "--topology", topo("example2.json"), "--A", mat("A_example2.json"), "--mode", "undirected",
           "--out", dir.str()});
  CHECK(r.code == 2);
  r = run({"design", "--topology", topo("example1.json"), "--A", mat("A_example1.json"), "--mode", "directed",
           "--argument", "160", "--out", dir.str()});
  CHECK(r.code == 2);

  r = run({"design", "--topology", topo("example1.json"), "--A", mat("A_example1.json"), "--poles=-2,-1,-2,-2,-2",
           "--out", dir.str()});
  CHECK(r.code == 1);
  CHECK(r.err.find("PreconditionViolation") != std::string::npos);

  r = run({"design", "--topology", topo("example1.json"), "--A", mat("A_example1.json"), "--poles=-2,-2,-2,-2,-2",
           "--out", dir.str()});
  CHECK(r.code == 0);

  r = run({"design", "--topology", topo("example1.json"), "--A", mat("A_example1.json"), "--poles=-2,x", "--out",
           dir.str()});
  CHECK(r.code == 2);
}

TEST_CASE("design on a defective model needs a scalar coupling") {
  TempDir dir("netsync_cli_defective");
  // The margin path gives a uniform entry, which is realizable.
  auto r = run({"design", "--topology", topo("example1.json"), "--A", mat("A_example1.json"), "--out", dir.str()});
  CHECK(r.code == 0);
  // A directed design on a model with complex modes and a Jordan block is not.
  r = run({"design", "--topology", topo("example2.json"), "--A", mat("A_example1.json"), "--argument", "160",
           "--out", dir.str()});
  CHECK(r.code == 1);
  CHECK(r.err.find("DefectiveMatrix") != std::string::npos);
}

TEST_CASE("dualize command") {
  TempDir dir("netsync_cli_dualize");
  auto r = run({"dualize", "--direction", "gain-to-h", "--B", mat("B6_example3.json"), "--K", mat("K_example3.json"),
                "--A", mat("A_example3.json"), "--out", dir.str()});
  CHECK(r.code == 0);
  auto j = netsync::io::read_json(dir.path / "dualize_report.json");
  CHECK(j["H"] == netsync::io::json::parse("[[-1.0, -0.9], [1.0, 0.9]]"));
  CHECK(j["controllability_rank"] == 2);

  r = run({"dualize", "--direction", "h-to-gain", "--B", mat("B6_example3.json"), "--H", mat("H6_example3.json"),
           "--out", dir.str()});
  CHECK(r.code == 0);
  j = netsync::io::read_json(dir.path / "dualize_report.json");
  CHECK(j["K"][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(j["K"][0][1].get<double>() == doctest::Approx(0.9));
  CHECK(j["residual"].get<double>() <= 1e-12);

  {
    std::ofstream(dir.path / "B.json") << "[[1], [0]]";
    std::ofstream(dir.path / "H.json") << "[[0, 0], [1, 1]]";
  }
  r = run({"dualize", "--direction", "h-to-gain", "--B", (dir.path / "B.json").string(), "--H",
           (dir.path / "H.json").string(), "--out", dir.str()});
  CHECK(r.code == 1);
  CHECK(r.err.find("ZeroGain") != std::string::npos);

  {
    std::ofstream(dir.path / "B2.json") << "[[1, 2], [2, 4]]";
  }
  r = run({"dualize", "--direction", "h-to-gain", "--B", (dir.path / "B2.json").string(), "--H",
           (dir.path / "H.json").string(), "--out", dir.str()});
  CHECK(r.code == 1);
  CHECK(r.err.find("RankDeficient") != std::string::npos);

  CHECK(run({"dualize", "--direction", "sideways", "--B", mat("B6_example3.json")}).code == 2);
}

TEST_CASE("simulate command is deterministic") {
  TempDir a("netsync_cli_sim_a"), b("netsync_cli_sim_b");
  const std::vector<std::string> base{"simulate", "--topology", topo("example3.json"), "--A", mat("A_example3.json"),
                                      "--H", mat("H6_example3.json"), "--sigma", "0.755", "--t-end", "2", "--seed", "7"};
  auto args = base;
  args.insert(args.end(), {"--out", a.str()});
  CHECK(run(args).code == 0);
  args = base;
  args.insert(args.end(), {"--out", b.str()});
  CHECK(run(args).code == 0);
  CHECK(slurp(a.path / "trajectory.csv") == slurp(b.path / "trajectory.csv"));
  CHECK(slurp(a.path / "sync_report.json") == slurp(b.path / "sync_report.json"));
  CHECK(slurp(a.path / "trajectory.csv").rfind("t,node,x1,x2\n", 0) == 0);
}

TEST_CASE("reproduce command") {
  TempDir a("netsync_cli_rep_a"), b("netsync_cli_rep_b");
  auto r = run({"reproduce", "example3", "--out", a.str()});
  CHECK(r.code == 0);
  CHECK(r.out.find("H7 synchronizes faster than H6: yes") != std::string::npos);
  CHECK(run({"reproduce", "example3", "--out", b.str()}).code == 0);
  for (const char* f : {"trajectory_H6.csv", "sync_report_H6.json", "design_report_H7.json"}) {
    CHECK(fs::exists(a.path / "example3" / f));
    CHECK(slurp(a.path / "example3" / f) == slurp(b.path / "example3" / f));
  }

  r = run({"reproduce", "example4", "--out", a.str()});
  CHECK(r.code == 0);
  r = run({"reproduce", "rossler", "--baseline", "--out", a.str()});
  CHECK(r.code == 0);
  CHECK(r.out.find("selector_eps0.1: converged=false") != std::string::npos);

  CHECK(run({"reproduce", "example9", "--out", a.str()}).code == 2);
  CHECK(run({"reproduce", "example1", "--fixtures", (a.path / "nowhere").string(), "--out", a.str()}).code == 2);
}
