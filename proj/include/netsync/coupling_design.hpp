#pragma once

#include <optional>
#include <vector>

#include "netsync/graph.hpp"
#include "netsync/types.hpp"

namespace netsync {

// Inner coupling synthesis for the linear network
//
//   x' = (I_N (x) A + sigma * L (x) H_eff) x,
//
// which synchronizes iff A + sigma * lambda_k * H_eff is Hurwitz for every
// nonzero Laplacian eigenvalue lambda_k. H_eff carries negative real parts;
// the inner coupling matrix of the connection-matrix form (G = -L) is
// H_inner = -H_eff.

/// Modal basis of the isolated dynamics: A = P * J * P^-1 with J diagonal
/// (or upper bidiagonal for a user-supplied Jordan-chain basis).
struct ModalDecomposition {
  CMatrix P;
  CMatrix P_inv;
  std::vector<cplx> mode_eigenvalues;
  double condition = 1.0;
  /// The eigenvector matrix failed the conditioning gate. Only scalar
  /// modal couplings (which commute with any basis) can be realized.
  bool defective = false;
  /// P is a Jordan-chain basis; P^-1 A P has nonzero superdiagonal entries.
  bool jordan = false;

  int dimension() const { return static_cast<int>(mode_eigenvalues.size()); }
  double max_real_part() const;
};

struct DecomposeOptions {
  /// Return a flagged decomposition instead of throwing DefectiveMatrix.
  bool allow_defective = false;
};

/// Eigendecomposition of A with modes sorted by ascending real part, then
/// ascending imaginary part. Throws DefectiveMatrix when cond(P) >= 1e12 or
/// the reconstruction check fails, EigensolverFailure on non-convergence.
ModalDecomposition decompose(const Matrix& a, DecomposeOptions options = {});

/// Builds a decomposition from a caller-chosen basis whose columns are
/// eigenvectors or Jordan chains of A. Throws DefectiveMatrix if P is
/// singular or P^-1 A P is not upper bidiagonal.
ModalDecomposition decompose_with_basis(const Matrix& a, CMatrix p);

/// partner[k] is the index of the mode conjugate to mode k, or k itself for
/// real modes. Pairing uses |lambda_k - conj(lambda_j)| <= tol * max(1, |lambda_k|).
std::vector<int> conjugate_partners(const std::vector<cplx>& modes, double tol = 1e-8);

/// Complex modal coupling in the eigenbasis of A, together with the
/// coupling strength it was designed for.
struct ModalCouplingSpec {
  std::vector<cplx> entries;
  /// Optional user override; n x n with zero diagonal when present.
  CMatrix off_diagonal;
  double sigma = 1.0;

  CMatrix modal_matrix() const;
  /// All diagonal entries equal and real, no off-diagonal coupling.
  bool is_scalar() const;
};

struct UndirectedDesign {
  std::optional<std::vector<double>> poles;
  double margin = 1.0;
  double sigma = 1.0;
};

/// Diagonal real modal coupling for an undirected topology.
///   poles given:  Re h_ii = -(max Re mode - p_i) / (sigma * lambda2)
///   otherwise:    Re h_ii = min(0, -(max Re mode + margin) / (sigma * lambda2))
/// Throws PreconditionViolation for lambda2 <= 0, nonnegative poles, a pole
/// slower than the slowest isolated mode, or unequal poles on a conjugate pair.
ModalCouplingSpec design_undirected(const ModalDecomposition& decomp, double lambda2,
                                    const UndirectedDesign& design = {});

struct DirectedDesign {
  /// |arg h_ii| for complex modes, radians in (pi/2, pi].
  double argument = 0.0;
  std::optional<std::vector<double>> poles;
  /// Fixes |h_ii| directly instead of deriving Re h_ii from the bound or poles.
  std::optional<double> modulus;
  double margin = 1.0;
  double sigma = 1.0;
};

/// Complex diagonal modal coupling for a directed topology whose worst-case
/// eigenvalue is lambda2 with argument theta_max. Complex modes get
/// h = Re h * (1 + i tan(phi)) with the sign of Im h following Im of the
/// mode; real modes get real entries. Re h uses Re(lambda2): the pole and
/// modulus paths apply the lambda2 bound as is; the margin path divides by
/// 1 - tan(theta_max) |tan(phi)| on complex modes so that every eigenvalue
/// with real part >= Re(lambda2) and argument within theta_max is covered.
///
/// Throws ArgumentMarginViolation when argument - theta_max <= pi/2, and
/// PreconditionViolation for Re(lambda2) <= 0, theta_max outside [0, pi/2),
/// bad poles, or a modulus that does not satisfy the stability bound.
ModalCouplingSpec design_directed(const ModalDecomposition& decomp, cplx lambda2,
                                  double theta_max, const DirectedDesign& design);

struct CouplingMatrices {
  Matrix H_eff;
  Matrix H_inner;
  /// max |Im(P * H * P^-1)|
  double imaginary_residue = 0.0;
};

/// H_eff = Re(P * H * P^-1), H_inner = -H_eff. Throws RealizationResidue when
/// the imaginary residue exceeds 1e-8 * ||H_eff||_inf, DefectiveMatrix when a
/// non-scalar coupling meets a defective decomposition.
CouplingMatrices realize(const ModalCouplingSpec& spec, const ModalDecomposition& decomp);

struct ModeRecord {
  int k = 0;  ///< 1-based Laplacian mode index (k = 2..N)
  cplx lambda;
  std::vector<cplx> eigenvalues;
  double max_real_part = 0.0;
};

struct ModeAnalysis {
  std::vector<ModeRecord> modes;
  bool overall_hurwitz = false;

  /// Largest max_real_part over the transverse modes.
  double slowest_rate() const;
};

inline constexpr double kHurwitzThreshold = -1e-9;

/// Spectra of A + sigma * lambda_k * H_eff for k = 2..N. Throws
/// PreconditionViolation for flagged or disconnected spectra or mismatched
/// dimensions, EigensolverFailure on non-convergence.
ModeAnalysis verify(const Matrix& a, const Matrix& h_eff, double sigma,
                    const LaplacianSpectrum& spec);

}  // namespace netsync
