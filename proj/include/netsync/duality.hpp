#pragma once

#include <optional>

#include "netsync/types.hpp"

namespace netsync {

// Synchronization <-> consensus duality. The multi-agent closed loop
//   x_i' = A x_i + c B K sum_j a_ij (x_i - x_j)
// is the linear network with H_eff = B K and sigma = c, i.e. H_inner = -B K.

struct AgentModel {
  Matrix A;
  Matrix B;
  Matrix K;
  double c = 1.0;
};

inline constexpr double kRankTolerance = 1e-10;

/// H_inner = -B K. Throws DimensionMismatch.
Matrix h_from_gain(const Matrix& b, const Matrix& k);

/// (B^T B)^-1 B^T. Throws RankDeficient when rank(B) < cols(B).
Matrix pseudo_inverse(const Matrix& b);

struct GainRecovery {
  Matrix K;
  /// ||H_inner + B K||_inf; zero when H_inner = -B K for some K.
  double residual = 0.0;
};

/// K = -B^+ H_inner (least squares when H is not exactly representable).
/// Throws RankDeficient, DimensionMismatch, or ZeroGain when B^+ H = 0.
GainRecovery gain_from_h(const Matrix& b, const Matrix& h_inner);

/// Numerical rank of [B, AB, ..., A^(n-1) B] (singular values above
/// 1e-10 * sigma_max).
int controllability(const Matrix& a, const Matrix& b);

int numerical_rank(const Matrix& m, double rel_tol = kRankTolerance);

}  // namespace netsync
