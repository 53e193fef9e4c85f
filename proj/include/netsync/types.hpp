#pragma once

#include <complex>

#include <Eigen/Dense>

namespace netsync {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

/// Max row sum of absolute values.
template <typename Derived>
double inf_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Orders complex numbers by real part, then imaginary part. Real parts
/// closer than `tol` count as equal so that conjugate pairs with a few ulps
/// of disagreement still sort by their imaginary part.
inline bool complex_less(cplx a, cplx b, double tol = 1e-12) {
  if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace netsync
