#include "netsync/io.hpp"

#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>

namespace netsync::io {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << text;
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text_atomic(path, doc.dump(2) + "\n");
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("matrix must be a nonempty array");
  if (!j.front().is_array()) {
    Matrix m(static_cast<Eigen::Index>(j.size()), 1);
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number()) throw FormatError("matrix entries must be numbers");
      m(static_cast<Eigen::Index>(i), 0) = j[i].get<double>();
    }
    return m;
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  if (cols == 0) throw FormatError("matrix rows must be nonempty");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw FormatError("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw FormatError("matrix entries must be numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c) + 0.0);
    out.push_back(std::move(row));
  }
  return out;
}

json complex_to_json(cplx z) { return json::array({z.real() + 0.0, z.imag() + 0.0}); }

Topology topology_from_json(const json& j) {
  if (!j.is_object() || !j.contains("weights")) {
    throw FormatError("topology must be an object with a \"weights\" array");
  }
  bool directed = false;
  if (j.contains("directed")) {
    if (!j["directed"].is_boolean()) throw FormatError("\"directed\" must be a boolean");
    directed = j["directed"].get<bool>();
  }
  return Topology(matrix_from_json(j["weights"]), directed);
}

json topology_to_json(const Topology& t) {
  return {{"directed", t.directed()}, {"weights", matrix_to_json(t.weights())}};
}

json spectrum_to_json(const LaplacianSpectrum& spec, bool connected) {
  json values = json::array();
  for (cplx v : spec.eigenvalues) values.push_back(complex_to_json(v));
  return {{"eigenvalues", values},
          {"lambda2", complex_to_json(spec.lambda2)},
          {"theta_max", spec.theta_max},
          {"theta_max_deg", spec.theta_max * 180.0 / std::numbers::pi},
          {"connected", connected},
          {"defective", spec.defective}};
}

namespace {

json modes_to_json(const ModeAnalysis& analysis) {
  json modes = json::array();
  for (const auto& m : analysis.modes) {
    modes.push_back({{"k", m.k}, {"lambda", complex_to_json(m.lambda)}, {"max_real_part", m.max_real_part}});
  }
  return modes;
}

}  // namespace

json design_report(const ModalCouplingSpec& spec, const CouplingMatrices& coupling,
                   const ModeAnalysis& analysis) {
  json entries = json::array();
  for (cplx h : spec.entries) entries.push_back(complex_to_json(h));
  return {{"h_entries", entries},
          {"sigma", spec.sigma},
          {"H_eff", matrix_to_json(coupling.H_eff)},
          {"H_paper", matrix_to_json(coupling.H_inner)},
          {"modes", modes_to_json(analysis)},
          {"hurwitz", analysis.overall_hurwitz}};
}

json design_report(double sigma, const Matrix& h_eff, const ModeAnalysis& analysis) {
  return {{"h_entries", json::array()},
          {"sigma", sigma},
          {"H_eff", matrix_to_json(h_eff)},
          {"H_paper", matrix_to_json(-h_eff)},
          {"modes", modes_to_json(analysis)},
          {"hurwitz", analysis.overall_hurwitz}};
}

json sync_report_to_json(const SyncReport& r) {
  json out = {{"sync_time", nullptr}, {"converged", r.converged}, {"tol", r.tol}, {"final_error", r.final_error}};
  if (r.sync_time) out["sync_time"] = *r.sync_time;
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,node";
  for (int c = 1; c <= traj.dim(); ++c) out += ",x" + std::to_string(c);
  out += '\n';
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Matrix& x = traj.states[k];
    const std::string t = format_double(traj.times[k]);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out += t;
      out += ',';
      out += std::to_string(i + 1);
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        out += ',';
        out += format_double(x(i, c));
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace netsync::io
