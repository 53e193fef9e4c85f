#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "netsync/errors.hpp"
#include "netsync/gershgorin.hpp"

using namespace netsync;
using std::numbers::pi;

namespace {

const cplx I(0.0, 1.0);

std::vector<cplx> eigenvalues(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  REQUIRE(es.info() == Eigen::Success);
  return {es.eigenvalues().begin(), es.eigenvalues().end()};
}

std::vector<cplx> eigenvalues(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  REQUIRE(es.info() == Eigen::Success);
  return {es.eigenvalues().begin(), es.eigenvalues().end()};
}

/// Complex matrix whose discs all lie strictly in the left half-plane:
/// Re center in [-5, -1], radius at most 0.8 |Re center|.
CMatrix random_left_matrix(std::mt19937_64& rng, int n, double radius_fraction = 0.8) {
  std::uniform_real_distribution<double> re(-5.0, -1.0), im(-5.0, 5.0), unit(0.0, 1.0), angle(-pi, pi);
  CMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    z(i, i) = cplx(re(rng), im(rng));
    const double radius = radius_fraction * unit(rng) * std::abs(z(i, i).real());
    std::vector<double> share(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      share[static_cast<std::size_t>(j)] = unit(rng);
      total += share[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double mag = total > 0.0 ? radius * share[static_cast<std::size_t>(j)] / total : 0.0;
      z(i, j) = std::polar(mag, angle(rng));
    }
  }
  return z;
}

}  // namespace

TEST_CASE("disc geometry") {
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = -1.0;
  z(1, 1) = -2.0;
  DiscSet d = discs(z);
  CHECK(d.centers[0] == cplx(-1.0));
  CHECK(d.centers[1] == cplx(-2.0));
  CHECK(d.radii[0] == 0.0);
  CHECK(d.radii[1] == 0.0);
  CHECK(half_plane(d) == HalfPlane::Left);

  z << -3.0, 1.0, 0.5, -2.0;
  d = discs(z);
  CHECK(d.radii[0] == 1.0);
  CHECK(d.radii[1] == 0.5);
  CHECK(d.centers[0] == cplx(-3.0));
  CHECK(half_plane(d) == HalfPlane::Left);

  z << -1.0 + I, 1.0 - I, 0.0, -2.0;
  d = discs(z);
  CHECK(d.radii[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(d.center_arguments[0] == doctest::Approx(3.0 * pi / 4.0));
  CHECK(d.center_moduli[0] == doctest::Approx(std::sqrt(2.0)));

  z << -1.0, 2.0, 0.0, -1.0;
  CHECK(half_plane(discs(z)) == HalfPlane::Mixed);
  z << 3.0, 1.0, 0.0, 2.0;
  CHECK(half_plane(discs(z)) == HalfPlane::Right);

  CHECK_THROWS_AS(discs(CMatrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("rotation test examples") {
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = z(1, 1) = -1.0;
  CHECK(rotation_admissible(z, 1.0));

  z(0, 0) = -1.0 + 0.5 * I;
  z(1, 1) = -1.0 - 0.5 * I;
  const double theta = 27.34 * pi / 180.0;
  CHECK(rotation_admissible(z, std::polar(1.0, theta)));
  CHECK(rotation_admissible(z, std::polar(2.0, -theta)));

  z << -1.0, 0.9, 0.0, -1.0;
  CHECK_FALSE(rotation_admissible(z, std::polar(1.0, pi / 4.0)));
}

TEST_CASE("rotation test preconditions") {
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = z(1, 1) = -1.0;
  CHECK_THROWS_AS(rotation_admissible(z, -1.0), PreconditionViolation);
  CHECK_THROWS_AS(rotation_admissible(z, I), PreconditionViolation);
  z(0, 1) = 2.0;
  CHECK_THROWS_AS(rotation_admissible(z, 1.0), PreconditionViolation);
}

TEST_CASE("real projection examples") {
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = -1.0 + 5.0 * I;
  z(1, 1) = -1.0 - 5.0 * I;
  CHECK(real_projection(z).isApprox(-Matrix::Identity(2, 2)));
  Matrix r(2, 2);
  r << 1.5, -2.0, 0.25, 4.0;
  CHECK(real_projection(r.cast<cplx>()) == r);
}

TEST_CASE("rotation test is sound over random left matrices") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_real_distribution<double> theta_dist(-pi / 2.0 + 1e-3, pi / 2.0 - 1e-3), mod(0.1, 3.0);
  int admitted = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    // Small radii and wide arguments make admissible samples common.
    const CMatrix z = random_left_matrix(rng, n, trial % 2 == 0 ? 0.8 : 0.1);
    const cplx rho = std::polar(mod(rng), trial % 3 == 0 ? theta_dist(rng) / 4.0 : theta_dist(rng));
    if (!rotation_admissible(z, rho)) continue;
    ++admitted;
    for (const cplx& ev : eigenvalues(CMatrix(rho * z))) CHECK(ev.real() < -1e-10);
  }
  MESSAGE("admitted trials: " << admitted);
  CHECK(admitted > 50);
}

TEST_CASE("real projection keeps the half-plane") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    CMatrix z = random_left_matrix(rng, n);
    const bool right = trial % 2 == 1;
    if (right) z = -z;
    const auto before = discs(z);
    REQUIRE(half_plane(before) == (right ? HalfPlane::Right : HalfPlane::Left));

    const Matrix re = real_projection(z);
    for (const cplx& ev : eigenvalues(re)) {
      if (right) CHECK(ev.real() > 1e-10);
      else CHECK(ev.real() < -1e-10);
    }
    const auto after = discs(re.cast<cplx>());
    for (std::size_t i = 0; i < after.size(); ++i) CHECK(after.radii[i] <= before.radii[i] + 1e-15);
  }
}

TEST_CASE("rotation test is monotone in the rotation angle") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(1, 5);
  std::uniform_real_distribution<double> theta_dist(0.0, pi / 2.0 - 1e-3), unit(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const CMatrix z = random_left_matrix(rng, size(rng), 0.1);
    const double theta = theta_dist(rng);
    if (!rotation_admissible(z, std::polar(1.0, theta))) continue;
    ++checked;
    const double smaller = theta * unit(rng);
    // The radius condition tightens as |theta| shrinks, so only the argument
    // condition is monotone for matrices with nonzero off-diagonal mass.
    CMatrix diagonal = CMatrix::Zero(z.rows(), z.cols());
    diagonal.diagonal() = z.diagonal();
    CHECK(rotation_admissible(diagonal, std::polar(1.0, smaller)));
    CHECK(rotation_admissible(diagonal, std::polar(1.0, -smaller)));
  }
  CHECK(checked > 20);
}

TEST_CASE("the radius condition tightens as the rotation shrinks") {
  CMatrix z(2, 2);
  z << -1.0, 0.5, 0.0, -1.0;
  CHECK(rotation_admissible(z, std::polar(1.0, 40.0 * pi / 180.0)));
  CHECK_FALSE(rotation_admissible(z, std::polar(1.0, 20.0 * pi / 180.0)));
}
