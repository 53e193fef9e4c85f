#include "netsync/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "netsync/errors.hpp"

namespace netsync {

namespace {

/// Rows sum_j W_ij (y_j - y_i); equals W * Y for zero-row-sum W and vanishes
/// exactly on identical rows.
Matrix diffusion(const Matrix& w, const Matrix& y) {
  Matrix out = Matrix::Zero(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      if (j == i || w(i, j) == 0.0) continue;
      out.row(i) += w(i, j) * (y.row(j) - y.row(i));
    }
  }
  return out;
}

void check_grid(const TimeGrid& grid) {
  if (!(grid.dt > 0.0) || !(grid.t_end > 0.0)) {
    throw PreconditionViolation("t_end and dt must be positive");
  }
  if (grid.dt > grid.t_end) throw PreconditionViolation("dt must not exceed t_end");
}

void check_initial_state(const Matrix& x0, Eigen::Index n_nodes, Eigen::Index dim) {
  if (x0.rows() != n_nodes || x0.cols() != dim) {
    throw DimensionMismatch("initial state must be " + std::to_string(n_nodes) + " x " +
                            std::to_string(dim));
  }
  if (!x0.allFinite()) throw PreconditionViolation("initial state has non-finite entries");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_linear(const LinearNetworkSystem& sys) {
  if (sys.A.rows() != sys.A.cols() || sys.A.rows() == 0) {
    throw DimensionMismatch("A must be a nonempty square matrix");
  }
  if (sys.H_eff.rows() != sys.A.rows() || sys.H_eff.cols() != sys.A.cols()) {
    throw DimensionMismatch("H_eff must have the dimensions of A");
  }
  if (!(sys.sigma > 0.0)) throw PreconditionViolation("sigma must be positive");
}

}  // namespace

double stiffness(const LinearNetworkSystem& sys) {
  check_linear(sys);
  const auto nodes = sys.laplacian.n_nodes();
  const Matrix full = kron(Matrix::Identity(nodes, nodes), sys.A) +
                      sys.sigma * kron(sys.laplacian.matrix(), sys.H_eff);
  Eigen::EigenSolver<Matrix> es(full, false);
  if (es.info() != Eigen::Success) throw EigensolverFailure("stiffness estimate did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Trajectory simulate_linear(const LinearNetworkSystem& sys, const Matrix& x0, const TimeGrid& grid) {
  check_linear(sys);
  check_grid(grid);
  check_initial_state(x0, sys.laplacian.n_nodes(), sys.A.rows());
  const Matrix& l = sys.laplacian.matrix();
  const auto nodes = l.rows();
  const auto n = sys.A.rows();
  return integrate_rk4(
      [&](double, const Matrix& x) -> Matrix {
        // Row-wise products keep identical rows bitwise identical.
        Matrix hx(nodes, n);
        Matrix dx(nodes, n);
        for (Eigen::Index i = 0; i < nodes; ++i) {
          const Vector xi = x.row(i).transpose();
          hx.row(i) = (sys.H_eff * xi).transpose();
          dx.row(i) = (sys.A * xi).transpose();
        }
        dx.noalias() += sys.sigma * diffusion(l, hx);
        return dx;
      },
      x0, grid);
}

Trajectory simulate_agents(const AgentModel& model, const Laplacian& laplacian, const Matrix& x0,
                           const TimeGrid& grid) {
  const auto n = model.A.rows();
  if (model.A.cols() != n || model.B.rows() != n || model.K.rows() != model.B.cols() ||
      model.K.cols() != n) {
    throw DimensionMismatch("inconsistent agent model dimensions");
  }
  if (!(model.c > 0.0)) throw PreconditionViolation("coupling strength c must be positive");
  check_grid(grid);
  const auto nodes = laplacian.n_nodes();
  check_initial_state(x0, nodes, n);

  const Matrix& l = laplacian.matrix();
  return integrate_rk4(
      [&](double, const Matrix& x) -> Matrix {
        Matrix dx(nodes, n);
        Vector disagreement(n);
        for (Eigen::Index i = 0; i < nodes; ++i) {
          disagreement.setZero();
          for (Eigen::Index j = 0; j < nodes; ++j) {
            if (j == i) continue;
            const double a_ij = -l(i, j);
            if (a_ij != 0.0) disagreement += a_ij * (x.row(i) - x.row(j)).transpose();
          }
          const Vector u = model.c * (model.K * disagreement);
          dx.row(i) = (model.A * x.row(i).transpose() + model.B * u).transpose();
        }
        return dx;
      },
      x0, grid);
}

Vector rossler_vector_field(const Vector& s, const RosslerParams& p) {
  Vector d(3);
  d << -(s(1) + s(2)), s(0) + p.a * s(1), p.b + s(2) * (s(0) - p.c);
  return d;
}

Matrix rossler_jacobian(const Vector& s, const RosslerParams& p) {
  Matrix j(3, 3);
  j << 0.0, -1.0, -1.0,
       1.0, p.a, 0.0,
       s(2), 0.0, s(0) - p.c;
  return j;
}

Matrix three_oscillator_connection(double eps, double delta) {
  const double self = -2.0 * eps / 3.0;
  const double fwd = eps / 3.0 + delta / std::sqrt(3.0);
  const double bwd = eps / 3.0 - delta / std::sqrt(3.0);
  Matrix g(3, 3);
  g << self, fwd, bwd,
       bwd, self, fwd,
       fwd, bwd, self;
  return g;
}

NonlinearNetworkSystem build_three_oscillator(double eps, double delta, MatrixField coupling,
                                              CouplingForm form, const RosslerParams& p) {
  NonlinearNetworkSystem sys;
  sys.node_dynamics = [p](const Vector& s) { return rossler_vector_field(s, p); };
  sys.coupling_matrix_fn = std::move(coupling);
  sys.connection = three_oscillator_connection(eps, delta);
  sys.form = form;
  return sys;
}

Matrix y_selector() {
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = 1.0;
  return h;
}

NonlinearCouplingSpec rossler_coupling_spec(double kappa, const Matrix& psi1, const RosslerParams& p) {
  NonlinearCouplingSpec spec;
  spec.Phi1.resize(3, 3);
  spec.Phi1 << 0.0, -1.0, -1.0,
               1.0, p.a, 0.0,
               0.0, 0.0, -p.c;
  spec.Phi2 = [](const Vector& s) {
    Matrix m = Matrix::Zero(3, 3);
    m(2, 0) = s(2);
    m(2, 2) = s(0);
    return m;
  };
  spec.Psi1 = psi1;
  spec.kappa = kappa;
  spec.rho = Vector::Ones(3);
  return spec;
}

MatrixField design_nonlinear_coupling(const NonlinearCouplingSpec& spec) {
  if (spec.kappa == 0.0) throw PreconditionViolation("kappa must be nonzero");
  if (!spec.Phi2) throw PreconditionViolation("Phi2 is not set");
  const auto n = spec.Psi1.rows();
  const Vector rho = spec.rho.size() == 0 ? Vector::Ones(n) : spec.rho;
  if (rho.size() != n) throw DimensionMismatch("rho must have one entry per state component");
  return [psi1 = spec.Psi1, phi2 = spec.Phi2, inv_kappa = 1.0 / spec.kappa, rho](const Vector& x) {
    const Vector scaled = rho.cwiseProduct(x);
    return Matrix(psi1 - inv_kappa * phi2(scaled));
  };
}

double jacobian_split_error(const NonlinearCouplingSpec& spec,
                            const std::function<Matrix(const Vector&)>& jacobian,
                            std::span<const Vector> samples) {
  double worst = 0.0;
  for (const Vector& s : samples) {
    worst = std::max(worst, (spec.Phi1 + spec.Phi2(s) - jacobian(s)).cwiseAbs().maxCoeff());
  }
  return worst;
}

Trajectory simulate_nonlinear(const NonlinearNetworkSystem& sys, const Matrix& x0,
                              const TimeGrid& grid) {
  const auto nodes = sys.connection.rows();
  if (sys.connection.cols() != nodes || nodes < 2) {
    throw DimensionMismatch("connection matrix must be square with N >= 2");
  }
  const double row_tol = 1e-12 * static_cast<double>(nodes) *
                         std::max(1.0, sys.connection.cwiseAbs().maxCoeff());
  if ((sys.connection.rowwise().sum().cwiseAbs().array() > row_tol).any()) {
    throw PreconditionViolation("connection matrix rows must sum to zero");
  }
  if (!sys.node_dynamics || !sys.coupling_matrix_fn) {
    throw PreconditionViolation("node dynamics and coupling must be set");
  }
  check_grid(grid);
  check_initial_state(x0, nodes, x0.cols());

  const Matrix weights = sys.form == CouplingForm::Connection ? sys.connection : Matrix(-sys.connection);
  const auto n = x0.cols();
  return integrate_rk4(
      [&](double, const Matrix& x) -> Matrix {
        Matrix coupled(nodes, n);
        Matrix dx(nodes, n);
        for (Eigen::Index j = 0; j < nodes; ++j) {
          const Vector xj = x.row(j).transpose();
          coupled.row(j) = (sys.coupling_matrix_fn(xj) * xj).transpose();
          dx.row(j) = sys.node_dynamics(xj).transpose();
        }
        dx.noalias() += diffusion(weights, coupled);
        return dx;
      },
      x0, grid);
}

namespace {

double pairwise_error(const Matrix& x, std::span<const int> components) {
  double e = 0.0;
  auto column_spread = [&](Eigen::Index c) {
    return x.col(c).maxCoeff() - x.col(c).minCoeff();
  };
  if (components.empty()) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) e = std::max(e, column_spread(c));
  } else {
    for (int c : components) e = std::max(e, column_spread(c));
  }
  return e;
}

}  // namespace

SyncReport sync_error(const Trajectory& traj, double tol) { return sync_error(traj, tol, {}); }

SyncReport sync_error(const Trajectory& traj, double tol, std::span<const int> components) {
  if (traj.states.empty()) throw PreconditionViolation("trajectory is empty");
  if (!(tol > 0.0)) throw PreconditionViolation("tolerance must be positive");
  for (int c : components) {
    if (c < 0 || c >= traj.dim()) throw DimensionMismatch("component index out of range");
  }
  SyncReport r;
  r.tol = tol;
  r.error_series.reserve(traj.states.size());
  for (const Matrix& x : traj.states) r.error_series.push_back(pairwise_error(x, components));
  r.final_error = r.error_series.back();

  // Walk back from the horizon while the error stays below tol.
  std::size_t first = r.error_series.size();
  while (first > 0 && r.error_series[first - 1] < tol) --first;
  if (first < r.error_series.size() && !traj.diverged) {
    r.sync_time = traj.times[first];
    r.converged = true;
  }
  return r;
}

double max_error_in_window(const Trajectory& traj, const SyncReport& report, double t0, double t1) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    if (traj.times[k] >= t0 && traj.times[k] <= t1) worst = std::max(worst, report.error_series[k]);
  }
  return worst;
}

double rms_amplitude(const Trajectory& traj) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const Matrix& x : traj.states) {
    sum += x.squaredNorm();
    count += static_cast<std::size_t>(x.size());
  }
  return count == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(count));
}

}  // namespace netsync
