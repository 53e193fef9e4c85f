#include "netsync/coupling_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "netsync/errors.hpp"
#include "netsync/gershgorin.hpp"

namespace netsync {

namespace {

double condition_number(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || !std::isfinite(s(0))) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionMismatch(std::string(what) + " must be a nonempty square matrix");
  }
}

// Poles of a conjugate mode pair produce real, hence equal, entries.
void check_pole_pairs(const std::vector<double>& poles, const std::vector<int>& partner) {
  for (std::size_t k = 0; k < poles.size(); ++k) {
    if (poles[k] != poles[static_cast<std::size_t>(partner[k])]) {
      throw PreconditionViolation("poles of a conjugate mode pair must be equal (modes " +
                                  std::to_string(k) + " and " + std::to_string(partner[k]) + ")");
    }
  }
}

void check_poles(const std::vector<double>& poles, int n, double max_re) {
  if (static_cast<int>(poles.size()) != n) {
    throw PreconditionViolation("expected " + std::to_string(n) + " poles, got " +
                                std::to_string(poles.size()));
  }
  for (double p : poles) {
    if (!(p < 0.0)) throw PreconditionViolation("requested poles must be negative");
    if (p > max_re) {
      throw PreconditionViolation("requested pole " + std::to_string(p) +
                                  " is slower than the slowest isolated mode");
    }
  }
}

}  // namespace

double ModalDecomposition::max_real_part() const {
  double m = -std::numeric_limits<double>::infinity();
  for (cplx v : mode_eigenvalues) m = std::max(m, v.real());
  return m;
}

ModalDecomposition decompose(const Matrix& a, DecomposeOptions options) {
  require_square(a, "A");
  const auto n = a.rows();
  Eigen::EigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw EigensolverFailure("eigensolver did not converge on the isolated dynamics");
  }

  const double scale = std::max(1.0, inf_norm(a));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const CVector values = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return complex_less(values(i), values(j), 1e-9 * scale);
  });

  ModalDecomposition d;
  d.P.resize(n, n);
  const CMatrix vectors = es.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    d.mode_eigenvalues.push_back(values(order[k]));
    d.P.col(k) = vectors.col(order[k]);
  }
  d.condition = condition_number(d.P);
  d.defective = !(d.condition < kDefectiveCondition) ||
                nearly_parallel_cluster(d.mode_eigenvalues, d.P, scale);
  if (!d.defective) {
    d.P_inv = d.P.inverse();
    CVector lam(n);
    for (Eigen::Index k = 0; k < n; ++k) lam(k) = d.mode_eigenvalues[k];
    const CMatrix recon = d.P * lam.asDiagonal() * d.P_inv;
    const double err = inf_norm(recon - a.cast<cplx>());
    d.defective = !(err <= 1e-8 * scale);
  }
  if (d.defective && !options.allow_defective) {
    throw DefectiveMatrix("A is not reliably diagonalizable (cond(P) = " +
                          std::to_string(d.condition) + ")");
  }
  return d;
}

ModalDecomposition decompose_with_basis(const Matrix& a, CMatrix p) {
  require_square(a, "A");
  if (p.rows() != a.rows() || p.cols() != a.cols()) {
    throw DimensionMismatch("basis must match the dimension of A");
  }
  ModalDecomposition d;
  d.condition = condition_number(p);
  if (!(d.condition < kDefectiveCondition)) {
    throw DefectiveMatrix("supplied basis is numerically singular");
  }
  d.P = std::move(p);
  d.P_inv = d.P.inverse();
  const CMatrix j = d.P_inv * a.cast<cplx>() * d.P;
  const auto n = a.rows();
  const double tol = 1e-8 * std::max(1.0, inf_norm(a));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (c == r) continue;
      if (c == r + 1) {
        if (std::abs(j(r, c)) > tol) {
          if (std::abs(j(r, r) - j(c, c)) > tol) {
            throw DefectiveMatrix("Jordan chain couples distinct eigenvalues");
          }
          d.jordan = true;
        }
      } else if (std::abs(j(r, c)) > tol) {
        throw DefectiveMatrix("basis does not bring A to Jordan form");
      }
    }
    d.mode_eigenvalues.push_back(j(r, r));
  }
  return d;
}

std::vector<int> conjugate_partners(const std::vector<cplx>& modes, double tol) {
  const int n = static_cast<int>(modes.size());
  std::vector<int> partner(modes.size(), -1);
  for (int k = 0; k < n; ++k) {
    if (partner[k] >= 0) continue;
    const double scale = tol * std::max(1.0, std::abs(modes[k]));
    if (std::abs(modes[k].imag()) <= scale) {
      partner[k] = k;
      continue;
    }
    for (int j = k + 1; j < n; ++j) {
      if (partner[j] < 0 && std::abs(modes[k] - std::conj(modes[j])) <= scale) {
        partner[k] = j;
        partner[j] = k;
        break;
      }
    }
    if (partner[k] < 0) partner[k] = k;
  }
  return partner;
}

CMatrix ModalCouplingSpec::modal_matrix() const {
  const auto n = static_cast<Eigen::Index>(entries.size());
  CMatrix h = CMatrix::Zero(n, n);
  if (off_diagonal.size() != 0) {
    if (off_diagonal.rows() != n || off_diagonal.cols() != n) {
      throw DimensionMismatch("off-diagonal override must be n x n");
    }
    h = off_diagonal;
  }
  for (Eigen::Index k = 0; k < n; ++k) h(k, k) = entries[static_cast<std::size_t>(k)];
  return h;
}

bool ModalCouplingSpec::is_scalar() const {
  if (entries.empty()) return false;
  if (off_diagonal.size() != 0) {
    for (Eigen::Index r = 0; r < off_diagonal.rows(); ++r) {
      for (Eigen::Index c = 0; c < off_diagonal.cols(); ++c) {
        if (r != c && off_diagonal(r, c) != cplx{}) return false;
      }
    }
  }
  return entries.front().imag() == 0.0 &&
         std::all_of(entries.begin(), entries.end(), [&](cplx h) { return h == entries.front(); });
}

ModalCouplingSpec design_undirected(const ModalDecomposition& decomp, double lambda2,
                                    const UndirectedDesign& design) {
  if (!(lambda2 > 0.0)) throw PreconditionViolation("lambda2 must be positive (connected topology)");
  if (!(design.sigma > 0.0)) throw PreconditionViolation("sigma must be positive");
  if (!(design.margin >= 0.0)) throw PreconditionViolation("margin must be nonnegative");

  const int n = decomp.dimension();
  const double max_re = decomp.max_real_part();
  const double gain = design.sigma * lambda2;

  ModalCouplingSpec spec;
  spec.sigma = design.sigma;
  spec.entries.reserve(static_cast<std::size_t>(n));
  if (design.poles) {
    check_poles(*design.poles, n, max_re);
    check_pole_pairs(*design.poles, conjugate_partners(decomp.mode_eigenvalues));
    for (double p : *design.poles) spec.entries.emplace_back(-(max_re - p) / gain, 0.0);
  } else {
    const double re = std::min(0.0, -(max_re + design.margin) / gain);
    spec.entries.assign(static_cast<std::size_t>(n), cplx(re, 0.0));
  }
  return spec;
}

ModalCouplingSpec design_directed(const ModalDecomposition& decomp, cplx lambda2,
                                  double theta_max, const DirectedDesign& design) {
  using std::numbers::pi;
  if (!(lambda2.real() > 0.0)) throw PreconditionViolation("Re(lambda2) must be positive");
  if (!(theta_max >= 0.0 && theta_max < pi / 2.0)) {
    throw PreconditionViolation("theta_max must lie in [0, pi/2)");
  }
  if (!(design.sigma > 0.0)) throw PreconditionViolation("sigma must be positive");
  if (!(design.argument <= pi)) throw PreconditionViolation("argument must not exceed pi");
  if (!(design.argument - theta_max > pi / 2.0)) {
    throw ArgumentMarginViolation("argument " + std::to_string(design.argument * 180.0 / pi) +
                                  " deg minus theta_max " + std::to_string(theta_max * 180.0 / pi) +
                                  " deg does not exceed 90 deg");
  }

  const int n = decomp.dimension();
  const double max_re = decomp.max_real_part();
  const double gain = design.sigma * lambda2.real();
  const auto partner = conjugate_partners(decomp.mode_eigenvalues);
  const double slope = std::abs(std::tan(design.argument));

  std::vector<double> re(static_cast<std::size_t>(n));
  if (design.modulus) {
    if (!(*design.modulus >= 0.0)) throw PreconditionViolation("modulus must be nonnegative");
    const double r = *design.modulus * std::cos(design.argument);
    if (!(gain * r + max_re < 0.0)) {
      throw PreconditionViolation("modulus too small: sigma * Re(lambda2) * Re(h) + max Re(mode) >= 0");
    }
    std::fill(re.begin(), re.end(), r);
  } else if (design.poles) {
    check_poles(*design.poles, n, max_re);
    check_pole_pairs(*design.poles, partner);
    for (int k = 0; k < n; ++k) re[k] = -(max_re - (*design.poles)[k]) / gain;
  } else {
    if (!(design.margin >= 0.0)) throw PreconditionViolation("margin must be nonnegative");
    // Every nonzero lambda_k with Re >= Re(lambda2) and |arg| <= theta_max
    // gives Re(lambda_k h) <= Re(lambda2) Re(h) (1 - tan(theta_max) |tan(phi)|).
    const double shrink = 1.0 - std::tan(theta_max) * slope;
    for (int k = 0; k < n; ++k) {
      const double factor = partner[k] == k ? 1.0 : shrink;
      re[k] = std::min(0.0, -(max_re + design.margin) / (gain * factor));
    }
  }

  ModalCouplingSpec spec;
  spec.sigma = design.sigma;
  for (int k = 0; k < n; ++k) {
    const cplx mode = decomp.mode_eigenvalues[static_cast<std::size_t>(k)];
    if (partner[k] == k) {
      spec.entries.emplace_back(re[k], 0.0);
    } else {
      const double im = std::abs(re[k]) * slope;
      spec.entries.emplace_back(re[k], mode.imag() > 0.0 ? im : -im);
    }
  }
  return spec;
}

CouplingMatrices realize(const ModalCouplingSpec& spec, const ModalDecomposition& decomp) {
  const auto n = static_cast<Eigen::Index>(decomp.mode_eigenvalues.size());
  if (static_cast<Eigen::Index>(spec.entries.size()) != n) {
    throw DimensionMismatch("modal coupling has " + std::to_string(spec.entries.size()) +
                            " entries for a " + std::to_string(n) + "-dimensional system");
  }
  CouplingMatrices out;
  if (spec.is_scalar()) {
    // A real scalar commutes with every basis change.
    out.H_eff = Matrix::Identity(n, n) * spec.entries.front().real();
  } else {
    if (decomp.defective) {
      throw DefectiveMatrix("non-scalar modal coupling needs a reliable eigenbasis of A");
    }
    const CMatrix full = decomp.P * spec.modal_matrix() * decomp.P_inv;
    out.H_eff = real_projection(full);
    out.imaginary_residue = full.imag().cwiseAbs().maxCoeff();
    if (!out.H_eff.allFinite()) throw RealizationResidue("realized coupling is not finite");
    const double tol = 1e-8 * inf_norm(out.H_eff) + 1e-14;
    if (out.imaginary_residue > tol) {
      throw RealizationResidue("imaginary residue " + std::to_string(out.imaginary_residue) +
                               " exceeds tolerance; modal coupling is not conjugate-closed");
    }
  }
  out.H_inner = -out.H_eff;
  return out;
}

double ModeAnalysis::slowest_rate() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& r : modes) m = std::max(m, r.max_real_part);
  return m;
}

ModeAnalysis verify(const Matrix& a, const Matrix& h_eff, double sigma,
                    const LaplacianSpectrum& spec) {
  require_square(a, "A");
  if (h_eff.rows() != a.rows() || h_eff.cols() != a.cols()) {
    throw PreconditionViolation("H_eff must have the dimensions of A");
  }
  if (!(sigma > 0.0)) throw PreconditionViolation("sigma must be positive");
  if (spec.defective) throw PreconditionViolation("Laplacian spectrum is flagged defective");
  if (!is_connected(spec)) throw PreconditionViolation("topology is not connected");

  const CMatrix ac = a.cast<cplx>();
  const CMatrix hc = h_eff.cast<cplx>();
  ModeAnalysis out;
  out.overall_hurwitz = true;
  for (std::size_t idx = 1; idx < spec.eigenvalues.size(); ++idx) {
    ModeRecord rec;
    rec.k = static_cast<int>(idx) + 1;
    rec.lambda = spec.eigenvalues[idx];
    const CMatrix mode = ac + sigma * rec.lambda * hc;
    Eigen::ComplexEigenSolver<CMatrix> es(mode, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
      throw EigensolverFailure("eigensolver did not converge on mode " + std::to_string(rec.k));
    }
    rec.max_real_part = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
      const cplx v = es.eigenvalues()(j);
      rec.eigenvalues.push_back(v);
      rec.max_real_part = std::max(rec.max_real_part, v.real());
    }
    std::sort(rec.eigenvalues.begin(), rec.eigenvalues.end(),
              [](cplx x, cplx y) { return complex_less(x, y); });
    out.overall_hurwitz = out.overall_hurwitz && rec.max_real_part < kHurwitzThreshold;
    out.modes.push_back(std::move(rec));
  }
  return out;
}

}  // namespace netsync
