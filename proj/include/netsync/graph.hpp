#pragma once

#include <vector>

#include "netsync/types.hpp"

namespace netsync {

/// Weighted network topology. `weights(i, j)` is the weight of the edge
/// that carries information from node j to node i.
class Topology {
 public:
  /// Throws InvalidTopology when N < 2, the matrix is not square, a weight is
  /// negative or non-finite, a self-loop is present, or an undirected
  /// topology has asymmetric weights.
  Topology(Matrix weights, bool directed);

  int n_nodes() const { return static_cast<int>(weights_.rows()); }
  bool directed() const { return directed_; }
  const Matrix& weights() const { return weights_; }

 private:
  Matrix weights_;
  bool directed_;
};

/// Zero-row-sum matrix D - A with nonpositive off-diagonal entries.
class Laplacian {
 public:
  /// Validates an explicit matrix; throws InvalidLaplacian on violation.
  static Laplacian from_matrix(Matrix m);

  const Matrix& matrix() const { return matrix_; }
  int n_nodes() const { return static_cast<int>(matrix_.rows()); }
  bool symmetric() const;

  /// Connection matrix G = -L used by the complex-network literature.
  Matrix connection() const { return -matrix_; }

 private:
  explicit Laplacian(Matrix m) : matrix_(std::move(m)) {}
  friend Laplacian build_laplacian(const Topology&);

  Matrix matrix_;
};

struct LaplacianSpectrum {
  /// Sorted by ascending real part, ties by ascending imaginary part.
  std::vector<cplx> eigenvalues;
  /// Columns aligned with `eigenvalues`.
  CMatrix eigenvectors;
  cplx lambda2;
  /// Largest |arg| over the nonzero eigenvalues, in radians.
  double theta_max = 0.0;
  /// Modulus below which an eigenvalue counts as zero.
  double zero_tolerance = 0.0;
  /// Condition number of the eigenvector matrix.
  double condition = 1.0;
  /// Set when the eigenvector matrix is numerically singular or a cluster of
  /// close eigenvalues shares a degenerate eigenvector subspace (Jordan blocks).
  bool defective = false;
};

inline constexpr double kDefectiveCondition = 1e12;

Laplacian build_laplacian(const Topology& topology);

/// Dense eigendecomposition of the Laplacian. Throws EigensolverFailure when
/// the QR iteration does not converge.
LaplacianSpectrum spectrum(const Laplacian& lap);

/// True iff exactly one eigenvalue has modulus <= tol and every other
/// eigenvalue has real part > tol.
bool is_connected(const LaplacianSpectrum& spec, double tol);

/// Nonzero eigenvalue with the largest |argument| (the one attaining
/// theta_max); the member of a conjugate pair with negative imaginary part.
cplx largest_argument_eigenvalue(const LaplacianSpectrum& spec);
/// True when eigenvalues within 1e-5 * max(1, scale) of each other have
/// eigenvectors spanning a numerically degenerate subspace (smallest singular
/// value of the normalized columns below 1e-6). Catches the 2x2 Jordan blocks
/// that a finite-precision eigensolver splits with a moderate condition number.
bool nearly_parallel_cluster(const std::vector<cplx>& values, const CMatrix& vectors, double scale);

inline bool is_connected(const LaplacianSpectrum& spec) {
  return is_connected(spec, spec.zero_tolerance);
}

}  // namespace netsync
