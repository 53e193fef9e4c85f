#pragma once

#include <vector>

#include "netsync/types.hpp"

namespace netsync {

// Gersgorin disc geometry: rotation of discs by a right-half-plane scalar and
// the real-part projection of a complex matrix.

struct DiscSet {
  std::vector<cplx> centers;
  std::vector<double> radii;             ///< off-diagonal row sums of |z_ij|
  std::vector<double> center_arguments;  ///< principal argument in (-pi, pi]
  std::vector<double> center_moduli;

  std::size_t size() const { return centers.size(); }
};

enum class HalfPlane { Left, Right, Mixed };

/// Throws DimensionMismatch when Z is not square.
DiscSet discs(const CMatrix& z);

HalfPlane half_plane(const DiscSet& d);

/// Rotation test for rho*Z: every disc must satisfy
///   r_ii * sin|theta| >= R_i  and  |phi_ii| - 2|theta| > pi/2,
/// where theta = arg(rho). A true result certifies that rho*Z has all
/// eigenvalues in the open left half-plane.
///
/// At theta = 0 the first inequality only admits zero radii.
///
/// Throws PreconditionViolation if Re(rho) <= 0 or some disc of Z is not in
/// the open left half-plane.
bool rotation_admissible(const CMatrix& z, cplx rho);

/// Entrywise real part. If every disc of Z lies strictly in one half-plane,
/// so do the eigenvalues of the result (its discs are no larger).
Matrix real_projection(const CMatrix& z);

}  // namespace netsync
