#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "netsync/duality.hpp"
#include "netsync/graph.hpp"
#include "netsync/rk4.hpp"
#include "netsync/types.hpp"

namespace netsync {

// Time-domain simulation of linear and nonlinear diffusively coupled
// networks. States are N x n matrices with one row per node.

struct LinearNetworkSystem {
  Matrix A;
  Matrix H_eff;
  double sigma = 1.0;
  Laplacian laplacian;
};

/// Largest eigenvalue modulus of I (x) A + sigma L (x) H_eff. RK4 is stable
/// when this times dt stays below about 2.5.
double stiffness(const LinearNetworkSystem& sys);

/// x_i' = A x_i + sigma sum_j L_ij H_eff x_j. Throws DimensionMismatch or
/// PreconditionViolation on inconsistent inputs.
Trajectory simulate_linear(const LinearNetworkSystem& sys, const Matrix& x0, const TimeGrid& grid);

/// Multi-agent closed loop x_i' = A x_i + B u_i, u_i = c K sum_j a_ij (x_i - x_j),
/// evaluated from the adjacency weights a_ij = -L_ij.
Trajectory simulate_agents(const AgentModel& model, const Laplacian& laplacian, const Matrix& x0,
                           const TimeGrid& grid);

// --- Rossler three-oscillator probe -----------------------------------------

struct RosslerParams {
  double a = 0.2;
  double b = 0.2;
  double c = 7.0;
};

Vector rossler_vector_field(const Vector& s, const RosslerParams& p = {});
Matrix rossler_jacobian(const Vector& s, const RosslerParams& p = {});

using VectorField = std::function<Vector(const Vector&)>;
using MatrixField = std::function<Matrix(const Vector&)>;

/// How the connection matrix G enters the coupling.
enum class CouplingForm {
  /// x_i' = F(x_i) + sum_j G_ij M(x_j) x_j  (M with the inner-coupling sign)
  Connection,
  /// x_i' = F(x_i) + sum_j L_ij M(x_j) x_j with L = -G  (M with the H_eff sign)
  Effective,
};

struct NonlinearNetworkSystem {
  VectorField node_dynamics;
  MatrixField coupling_matrix_fn;
  /// N x N, zero row sums.
  Matrix connection;
  CouplingForm form = CouplingForm::Effective;

  int n_nodes() const { return static_cast<int>(connection.rows()); }
};

/// Circulant connection of the three-oscillator ring: diagonal -2 eps/3,
/// forward neighbor eps/3 + delta/sqrt(3), backward neighbor eps/3 - delta/sqrt(3).
/// Its eigenvalues are {0, -eps +- i delta}.
Matrix three_oscillator_connection(double eps, double delta);

NonlinearNetworkSystem build_three_oscillator(double eps, double delta, MatrixField coupling,
                                              CouplingForm form, const RosslerParams& p = {});

/// Original probe coupling: only the y component, weight 1, connection form.
Matrix y_selector();

/// Split of the node Jacobian DF = Phi1 + Phi2(x) plus the constant part of
/// the designed coupling.
struct NonlinearCouplingSpec {
  Matrix Phi1;
  MatrixField Phi2;
  Matrix Psi1;
  double kappa = 1.0;
  /// Per-component state scaling; empty means all ones.
  Vector rho;
};

/// Rossler split: Phi1 holds the constant entries of DF, Phi2(x) the z and x
/// entries of the third row.
NonlinearCouplingSpec rossler_coupling_spec(double kappa, const Matrix& psi1,
                                            const RosslerParams& p = {});

/// M(x) = Psi1 - (1/kappa) Phi2(diag(rho) x), in the H_eff sign convention.
/// Throws PreconditionViolation for kappa = 0.
MatrixField design_nonlinear_coupling(const NonlinearCouplingSpec& spec);

/// max |Phi1 + Phi2(s) - J(s)| over the sample states.
double jacobian_split_error(const NonlinearCouplingSpec& spec,
                            const std::function<Matrix(const Vector&)>& jacobian,
                            std::span<const Vector> samples);

/// RK4 of x_i' = F(x_i) + sum_j W_ij M(x_j) x_j with W = G or -G per `form`.
Trajectory simulate_nonlinear(const NonlinearNetworkSystem& sys, const Matrix& x0,
                              const TimeGrid& grid);

// --- Synchronization metrics -------------------------------------------------

struct SyncReport {
  /// e(t) = max_{i,j} ||x_i(t) - x_j(t)||_inf over the selected components.
  std::vector<double> error_series;
  std::optional<double> sync_time;
  bool converged = false;
  double tol = 0.0;
  double final_error = 0.0;
};

/// sync_time is the first sample time after which e stays below tol until the
/// end of the horizon. A diverged trajectory never counts as converged.
SyncReport sync_error(const Trajectory& traj, double tol);
SyncReport sync_error(const Trajectory& traj, double tol, std::span<const int> components);

/// Largest e(t) over samples with t0 <= t <= t1.
double max_error_in_window(const Trajectory& traj, const SyncReport& report, double t0, double t1);

/// Root mean square of all state entries over the whole trajectory.
double rms_amplitude(const Trajectory& traj);

}  // namespace netsync
