#include "netsync/duality.hpp"

#include <string>

#include "netsync/errors.hpp"

namespace netsync {

Matrix h_from_gain(const Matrix& b, const Matrix& k) {
  if (b.cols() != k.rows()) {
    throw DimensionMismatch("B has " + std::to_string(b.cols()) + " columns but K has " +
                            std::to_string(k.rows()) + " rows");
  }
  if (b.rows() != k.cols()) throw DimensionMismatch("B K must be square");
  return -(b * k);
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++rank;
  }
  return rank;
}

Matrix pseudo_inverse(const Matrix& b) {
  if (b.cols() > b.rows() || numerical_rank(b) < b.cols()) {
    throw RankDeficient("B must have full column rank");
  }
  const Matrix gram = b.transpose() * b;
  return gram.ldlt().solve(b.transpose());
}

GainRecovery gain_from_h(const Matrix& b, const Matrix& h_inner) {
  if (h_inner.rows() != b.rows() || h_inner.cols() != b.rows()) {
    throw DimensionMismatch("H must be n x n with n = rows(B)");
  }
  const Matrix b_pinv = pseudo_inverse(b);
  const Matrix projected = b_pinv * h_inner;
  const double scale = std::max(h_inner.cwiseAbs().maxCoeff(), 1e-300);
  if (projected.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    throw ZeroGain("B^+ H vanishes; H has no component in the range of B");
  }
  GainRecovery out;
  out.K = -projected;
  out.residual = inf_norm(h_inner + b * out.K);
  return out;
}

int controllability(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) throw DimensionMismatch("A must be square");
  if (b.rows() != a.rows()) throw DimensionMismatch("B must have as many rows as A");
  const auto n = a.rows();
  const auto m = b.cols();
  Matrix ctrb(n, n * m);
  Matrix block = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * m, m) = block;
    block = a * block;
  }
  return numerical_rank(ctrb);
}

}  // namespace netsync
