#include "netsync/gershgorin.hpp"

#include <cmath>
#include <numbers>

#include "netsync/errors.hpp"

namespace netsync {

DiscSet discs(const CMatrix& z) {
  if (z.rows() != z.cols()) throw DimensionMismatch("Gersgorin discs need a square matrix");
  const auto n = z.rows();
  DiscSet d;
  d.centers.reserve(n);
  d.radii.reserve(n);
  d.center_arguments.reserve(n);
  d.center_moduli.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx c = z(i, i);
    double radius = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) radius += std::abs(z(i, j));
    }
    d.centers.push_back(c);
    d.radii.push_back(radius);
    d.center_arguments.push_back(std::atan2(c.imag(), c.real()));
    d.center_moduli.push_back(std::abs(c));
  }
  return d;
}

HalfPlane half_plane(const DiscSet& d) {
  bool left = true;
  bool right = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    left = left && d.centers[i].real() + d.radii[i] < 0.0;
    right = right && d.centers[i].real() - d.radii[i] > 0.0;
  }
  if (left) return HalfPlane::Left;
  if (right) return HalfPlane::Right;
  return HalfPlane::Mixed;
}

bool rotation_admissible(const CMatrix& z, cplx rho) {
  if (!(rho.real() > 0.0)) {
    throw PreconditionViolation("rho must lie in the open right half-plane");
  }
  const DiscSet d = discs(z);
  if (half_plane(d) != HalfPlane::Left) {
    throw PreconditionViolation("all Gersgorin discs of Z must lie in the left half-plane");
  }
  const double theta = std::abs(std::atan2(rho.imag(), rho.real()));
  const double sin_theta = std::sin(theta);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d.center_moduli[i] * sin_theta >= d.radii[i])) return false;
    if (!(std::abs(d.center_arguments[i]) - 2.0 * theta > std::numbers::pi / 2.0)) return false;
  }
  return true;
}

Matrix real_projection(const CMatrix& z) { return z.real(); }

}  // namespace netsync
