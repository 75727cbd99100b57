#include <doctest.h>

#include <Eigen/Dense>

#include "qharmony/eigensolve.hpp"
#include "qharmony/rng.hpp"

using namespace qharmony;

namespace {

Eigen::MatrixXd random_symmetric(int n, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = 2.0 * rng.next_double() - 1.0;
      a(i, j) = v;
      a(j, i) = v;
    }
  return a;
}

}  // namespace

TEST_CASE("identity eigendecomposition") {
  const auto eig = jacobi_eigh(Eigen::MatrixXd::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(eig.eigenvalues(i) == doctest::Approx(1.0));
  CHECK((eig.eigenvectors.transpose() * eig.eigenvectors - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("diag(2,1) sorts ascending with permuted basis") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 0, 0, 1;
  const auto eig = jacobi_eigh(a);
  CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(std::abs(eig.eigenvectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.eigenvectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("reconstruction and orthonormality on random symmetric matrices") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    for (int n : {5, 16, 49}) {
      const Eigen::MatrixXd a = random_symmetric(n, seed * 100 + n);
      const auto eig = jacobi_eigh(a);
      const Eigen::MatrixXd reconstructed = eig.eigenvectors *
                                            eig.eigenvalues.asDiagonal() *
                                            eig.eigenvectors.transpose();
      CHECK((reconstructed - a).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((eig.eigenvectors.transpose() * eig.eigenvectors -
             Eigen::MatrixXd::Identity(n, n))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
      for (int i = 0; i + 1 < n; ++i) CHECK(eig.eigenvalues(i) <= eig.eigenvalues(i + 1));
    }
  }
}

TEST_CASE("asymmetric input is rejected") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(jacobi_eigh(a), std::invalid_argument);
}

TEST_CASE("deterministic output") {
  const Eigen::MatrixXd a = random_symmetric(30, 77);
  const auto e1 = jacobi_eigh(a);
  const auto e2 = jacobi_eigh(a);
  CHECK((e1.eigenvalues - e2.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((e1.eigenvectors - e2.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("power iteration matches Jacobi extremes") {
  for (uint64_t seed : {11u, 12u}) {
    Eigen::MatrixXd a = random_symmetric(40, seed);
    a.diagonal().array() += 5.0;  // keep it comfortably definite
    const auto eig = jacobi_eigh(a, false);
    const auto [lo, hi] = extremal_eigenvalues(a);
    CHECK(lo == doctest::Approx(eig.eigenvalues(0)).epsilon(1e-7));
    CHECK(hi == doctest::Approx(eig.eigenvalues(39)).epsilon(1e-9));
  }
}

TEST_CASE("power iteration handles a dominant negative extreme") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a.diagonal() << -10.0, 1.0, 2.0;
  const auto [lo, hi] = extremal_eigenvalues(a);
  CHECK(lo == doctest::Approx(-10.0).epsilon(1e-8));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-6));
}
