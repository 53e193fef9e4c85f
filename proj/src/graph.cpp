#include "netsync/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "netsync/errors.hpp"

namespace netsync {

Topology::Topology(Matrix weights, bool directed)
    : weights_(std::move(weights)), directed_(directed) {
  const auto n = weights_.rows();
  if (n != weights_.cols()) throw InvalidTopology("weight matrix is not square");
  if (n < 2) throw InvalidTopology("a topology needs at least two nodes");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw InvalidTopology("weight (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") must be finite and nonnegative");
      }
      if (i == j && w != 0.0) {
        throw InvalidTopology("self-loop at node " + std::to_string(i));
      }
      if (!directed_ && w != weights_(j, i)) {
        throw InvalidTopology("undirected topology has asymmetric weights at (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

Laplacian Laplacian::from_matrix(Matrix m) {
  const auto n = m.rows();
  if (n != m.cols() || n < 2) throw InvalidLaplacian("Laplacian must be square with N >= 2");
  if (!m.allFinite()) throw InvalidLaplacian("Laplacian has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double row_tol = 1e-12 * static_cast<double>(n) * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(m.row(i).sum()) > row_tol) {
      throw InvalidLaplacian("row " + std::to_string(i) + " does not sum to zero");
    }
    if (m(i, i) < 0.0) throw InvalidLaplacian("negative diagonal entry");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && m(i, j) > 0.0) throw InvalidLaplacian("positive off-diagonal entry");
    }
  }
  return Laplacian(std::move(m));
}

bool Laplacian::symmetric() const { return matrix_ == matrix_.transpose(); }

Laplacian build_laplacian(const Topology& topology) {
  const Matrix& a = topology.weights();
  Matrix l = -a;
  l.diagonal() = a.rowwise().sum();
  return Laplacian(std::move(l));
}

namespace {

double condition_number(const CMatrix& u) {
  Eigen::JacobiSVD<CMatrix> svd(u);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace

bool nearly_parallel_cluster(const std::vector<cplx>& values, const CMatrix& vectors, double scale) {
  const double cluster_tol = 1e-5 * std::max(1.0, scale);
  const auto n = static_cast<Eigen::Index>(values.size());
  std::vector<bool> seen(values.size(), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<Eigen::Index> members{i};
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!seen[j] && std::abs(values[j] - values[i]) <= cluster_tol) {
        members.push_back(j);
        seen[j] = true;
      }
    }
    if (members.size() < 2) continue;
    CMatrix block(vectors.rows(), static_cast<Eigen::Index>(members.size()));
    for (std::size_t c = 0; c < members.size(); ++c) {
      const double norm = vectors.col(members[c]).norm();
      if (norm == 0.0) return true;
      block.col(static_cast<Eigen::Index>(c)) = vectors.col(members[c]) / norm;
    }
    Eigen::JacobiSVD<CMatrix> svd(block);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-6) return true;
  }
  return false;
}

LaplacianSpectrum spectrum(const Laplacian& lap) {
  const Matrix& l = lap.matrix();
  const auto n = l.rows();

  std::vector<cplx> values(static_cast<std::size_t>(n));
  CMatrix vectors(n, n);
  if (lap.symmetric()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(l);
    if (es.info() != Eigen::Success) {
      throw EigensolverFailure("symmetric eigensolver did not converge on the Laplacian");
    }
    for (Eigen::Index k = 0; k < n; ++k) values[k] = es.eigenvalues()(k);
    vectors = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::EigenSolver<Matrix> es(l);
    if (es.info() != Eigen::Success) {
      throw EigensolverFailure("eigensolver did not converge on the Laplacian");
    }
    for (Eigen::Index k = 0; k < n; ++k) values[k] = es.eigenvalues()(k);
    vectors = es.eigenvectors();
  }

  const double scale = inf_norm(l);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return complex_less(values[a], values[b], 1e-12 * std::max(1.0, scale));
  });

  LaplacianSpectrum out;
  out.eigenvalues.reserve(values.size());
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues.push_back(values[order[k]]);
    out.eigenvectors.col(k) = vectors.col(order[k]);
  }
  out.lambda2 = out.eigenvalues[1];
  out.zero_tolerance = 1e-9 * std::max(scale, std::numeric_limits<double>::min());
  for (cplx v : out.eigenvalues) {
    if (std::abs(v) > out.zero_tolerance) {
      out.theta_max = std::max(out.theta_max, std::abs(std::arg(v)));
    }
  }
  out.condition = condition_number(out.eigenvectors);
  out.defective = !(out.condition < kDefectiveCondition) ||
                  nearly_parallel_cluster(out.eigenvalues, out.eigenvectors, scale);
  return out;
}

bool is_connected(const LaplacianSpectrum& spec, double tol) {
  int zeros = 0;
  for (cplx v : spec.eigenvalues) {
    if (std::abs(v) <= tol) {
      ++zeros;
    } else if (v.real() <= tol) {
      return false;
    }
  }
  return zeros == 1;
}

cplx largest_argument_eigenvalue(const LaplacianSpectrum& spec) {
  cplx best = spec.lambda2;
  double best_arg = -1.0;
  for (cplx v : spec.eigenvalues) {
    if (std::abs(v) <= spec.zero_tolerance) continue;
    const double a = std::abs(std::arg(v));
    if (a > best_arg + 1e-12 || (std::abs(a - best_arg) <= 1e-12 && v.imag() < best.imag())) {
      best = v;
      best_arg = a;
    }
  }
  return best;
}

}  // namespace netsync
