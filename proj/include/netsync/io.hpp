#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "netsync/coupling_design.hpp"
#include "netsync/dynamics.hpp"
#include "netsync/graph.hpp"

namespace netsync::io {

using nlohmann::json;

/// Thrown for unreadable files and malformed documents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& doc);

/// Row-major array of arrays; a flat array is read as a column vector.
Matrix matrix_from_json(const json& j);
json matrix_to_json(const Matrix& m);
json complex_to_json(cplx z);

/// { "directed": bool, "weights": [[...], ...] }. Throws FormatError for
/// malformed JSON, InvalidTopology when the invariants fail.
Topology topology_from_json(const json& j);
json topology_to_json(const Topology& t);

json spectrum_to_json(const LaplacianSpectrum& spec, bool connected);

/// { "h_entries", "sigma", "H_eff", "H_paper", "modes", "hurwitz" }
json design_report(const ModalCouplingSpec& spec, const CouplingMatrices& coupling,
                   const ModeAnalysis& analysis);
/// Same schema for a coupling that did not come from a modal design.
json design_report(double sigma, const Matrix& h_eff, const ModeAnalysis& analysis);

/// { "sync_time": t|null, "converged": bool, "tol": v, "final_error": e }
json sync_report_to_json(const SyncReport& r);

/// Header "t,node,x1..xn", one row per (time, node), nodes 1-based.
std::string trajectory_csv(const Trajectory& traj);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace netsync::io
