#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "isoflow/errors.hpp"
#include "isoflow/schrodinger.hpp"
#include "oracles.hpp"

using namespace isoflow;

TEST_CASE("free box levels") {
  const Grid g = make_grid(256, std::numbers::pi, BoundaryKind::BoxDirichlet);
  const auto spec = eigen(build_hamiltonian(Field(g)), 3);
  REQUIRE(spec.eigenvalues.size() == 3);
  for (std::size_t m = 1; m <= 3; ++m) {
    CHECK(std::abs(spec.eigenvalues[m - 1] - oracle::box_level(m, std::numbers::pi)) < 1e-3);
  }
}

TEST_CASE("a constant potential shifts every level") {
  const Grid g = make_grid(128, 5.0, BoundaryKind::BoxDirichlet);
  const auto base = eigen(build_hamiltonian(Field(g)), 5);
  const auto shifted = eigen(build_hamiltonian(sample(g, [](double) { return 2.5; })), 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(shifted.eigenvalues[i] - base.eigenvalues[i] == doctest::Approx(2.5).epsilon(1e-10));
  }
}

TEST_CASE("soliton well has a single bound state") {
  const Grid g = make_grid(512, 60.0, BoundaryKind::Periodic);
  const Field v = soliton_potential(g, {4.0, 0.0}, 0.0);
  CHECK(count_bound_states(v) == 1);
  const auto spec = eigen(build_hamiltonian(v), 2);
  CHECK(std::abs(spec.eigenvalues[0] - oracle::soliton_bound_state(4.0)) < 1e-4);
  CHECK(spec.eigenvalues[1] > -1e-3);
}

TEST_CASE("eigen on small known matrices") {
  const Grid g = make_grid(8, 1.0, BoundaryKind::Periodic);
  const auto id = eigen(OperatorMatrix(ComplexMatrix::Identity(8, 8), g));
  for (double e : id.eigenvalues) CHECK(e == doctest::Approx(1.0));
  ComplexMatrix d = ComplexMatrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i) d(i, i) = static_cast<double>(7 - i);
  const auto diag = eigen(OperatorMatrix(d, g), 3, true);
  REQUIRE(diag.eigenvalues.size() == 3);
  CHECK(diag.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(diag.eigenvalues[2] == doctest::Approx(2.0));
  REQUIRE(diag.eigenvectors);
  CHECK(std::abs(std::abs((*diag.eigenvectors)(7, 0)) - 1.0) < 1e-12);
  CHECK(diag.residual < 1e-12);
}

TEST_CASE("eigen rejects non-Hermitian input") {
  const Grid g = make_grid(8, 1.0, BoundaryKind::Periodic);
  ComplexMatrix m = ComplexMatrix::Identity(8, 8);
  m(0, 1) = 1.0;
  const OperatorMatrix op(m, g);
  CHECK(op.hermitian_defect() > 0.1);
  CHECK_THROWS_AS(eigen(op), PreconditionError);
}

TEST_CASE("spectrum is invariant under unitary conjugation") {
  std::mt19937 rng(12345);
  std::normal_distribution<double> normal;
  const int n = 16;
  const Grid g = make_grid(n, 1.0, BoundaryKind::Periodic);
  ComplexMatrix a(n, n);
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = {normal(rng), normal(rng)};
      z(i, j) = {normal(rng), normal(rng)};
    }
  }
  const ComplexMatrix h = (a + a.adjoint()) / 2.0;
  const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(z).householderQ();
  const auto e1 = eigen(OperatorMatrix(h, g)).eigenvalues;
  ComplexMatrix conj = q * h * q.adjoint();
  conj = (conj + conj.adjoint()).eval() / 2.0;
  const auto e2 = eigen(OperatorMatrix(conj, g)).eigenvalues;
  for (int i = 0; i < n; ++i) CHECK(std::abs(e1[i] - e2[i]) < 1e-10);
}

TEST_CASE("eigenvectors are orthonormal and satisfy the eigen equation") {
  const Grid g = make_grid(96, 20.0, BoundaryKind::Periodic);
  const Field v = sample(g, [](double q) { return -1.5 / std::cosh(q); });
  const OperatorMatrix h = build_hamiltonian(v);
  CHECK(h.hermitian_defect() < 1e-14);
  const auto spec = eigen(h, 6, true);
  REQUIRE(spec.eigenvectors);
  const ComplexMatrix& vecs = *spec.eigenvectors;
  const ComplexMatrix gram = vecs.adjoint() * vecs;
  CHECK((gram - ComplexMatrix::Identity(6, 6)).norm() < 1e-10);
  CHECK(spec.residual < 1e-9);
  for (std::size_t i = 1; i < spec.eigenvalues.size(); ++i) {
    CHECK(spec.eigenvalues[i] >= spec.eigenvalues[i - 1]);
  }
}

TEST_CASE("hermitian defect helper") {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  CHECK(hermitian_defect(m) == 0.0);
  m(0, 1) = Complex(0.0, 1.0);
  m(1, 0) = Complex(0.0, -1.0);
  CHECK(hermitian_defect(m) == 0.0);
  m(1, 0) = Complex(0.0, 1.0);
  CHECK(hermitian_defect(m) > 0.5);
}

TEST_CASE("isospectrality report over a soliton flow") {
  const Grid g = make_grid(256, 40.0, BoundaryKind::Periodic);
  const auto traj = evolve(soliton_potential(g, {4.0, -5.0}, 0.0), 1.0, KdvParams{1e-3}, 4);
  const auto report = isospectrality_report(traj, 1);
  REQUIRE(report.eigenvalues.size() == 5);
  CHECK(report.pass);
  CHECK(report.max_drift < 1e-8);
  CHECK(report.eigenvalues[0][0] == doctest::Approx(-1.0).epsilon(1e-4));
}

TEST_CASE("spectral drift shrinks under grid refinement") {
  auto drift = [](std::size_t n) {
    const Grid g = make_grid(n, 30.0, BoundaryKind::Periodic);
    const Field v = sample(g, [](double q) { return -2.0 * std::exp(-q * q / 2.0); });
    const auto traj = evolve(v, 0.5, KdvParams{1e-3}, 5);
    return isospectrality_report(traj, 2).max_drift;
  };
  const double coarse = drift(64);
  const double fine = drift(128);
  CHECK(fine < coarse);
  CHECK(std::log2(coarse / fine) >= 2.0);
}
