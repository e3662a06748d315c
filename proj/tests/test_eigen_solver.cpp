#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "acons/eigen_solver.hpp"
#include "support/scenarios.hpp"

using namespace acons;

namespace {

// Durand-Kerner on a monic polynomial, coefficients highest degree first.
std::vector<Complex> polynomial_roots(const std::vector<double>& monic) {
  const std::size_t degree = monic.size() - 1;
  std::vector<Complex> z(degree);
  for (std::size_t i = 0; i < degree; ++i) z[i] = std::pow(Complex(0.4, 0.9), static_cast<double>(i));
  auto eval = [&](Complex x) {
    Complex acc = 0.0;
    for (double c : monic) acc = acc * x + c;
    return acc;
  };
  for (int iter = 0; iter < 500; ++iter) {
    for (std::size_t i = 0; i < degree; ++i) {
      Complex denom = 1.0;
      for (std::size_t j = 0; j < degree; ++j) {
        if (j != i) denom *= z[i] - z[j];
      }
      z[i] -= eval(z[i]) / denom;
    }
  }
  return z;
}

// Routh-Hurwitz for a cubic c0 l^3 + c1 l^2 + c2 l + c3.
bool routh_hurwitz_cubic(const std::vector<double>& c) {
  return c[0] > 0 && c[1] > 0 && c[2] > 0 && c[3] > 0 && c[1] * c[2] > c[0] * c[3];
}

double nearest(const std::vector<Complex>& set, Complex mu) {
  double best = INFINITY;
  for (Complex s : set) best = std::min(best, std::abs(s - mu));
  return best;
}

}  // namespace

TEST_CASE("identity has eigenvalue one three times") {
  for (Complex mu : eigenvalues(Matrix::Identity(3, 3))) CHECK(std::abs(mu - 1.0) < 1e-14);
}

TEST_CASE("rotation generator has eigenvalues +-i") {
  Matrix m(2, 2);
  m << 0, -1, 1, 0;
  const std::vector<Complex> eig = eigenvalues(m);
  REQUIRE(eig.size() == 2);
  CHECK(std::abs(eig[0] - Complex(0, -1)) < 1e-14);
  CHECK(std::abs(eig[1] - Complex(0, 1)) < 1e-14);
}

TEST_CASE("companion matrix of l^3 + 3 l^2 + 5 l + 2") {
  Matrix c(3, 3);
  c << 0, 0, -2, 1, 0, -5, 0, 1, -3;
  const std::vector<Complex> eig = eigenvalues(c);
  const std::vector<Complex> roots = polynomial_roots({1, 3, 5, 2});
  for (Complex mu : eig) CHECK(nearest(roots, mu) < 1e-10);
  CHECK(routh_hurwitz_cubic({1, 3, 5, 2}));
  CHECK(spectral_abscissa(eig) < 0.0);
  CHECK_FALSE(routh_hurwitz_cubic({1, 1, 1, 2}));
  Matrix unstable(3, 3);
  unstable << 0, 0, -2, 1, 0, -1, 0, 1, -1;
  CHECK(spectral_abscissa(eigenvalues(unstable)) > 0.0);
}

TEST_CASE("-(E + L) for the two-node path") {
  Matrix m(2, 2);
  m << -2, 1, 1, -1;
  const std::vector<Complex> eig = eigenvalues(m);
  CHECK(eig[0].real() == doctest::Approx((-3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  CHECK(eig[1].real() == doctest::Approx((-3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  CHECK(std::abs(eig[0].imag()) + std::abs(eig[1].imag()) == 0.0);
}

TEST_CASE("trace, determinant and residuals on random matrices") {
  testing::Rng rng(17);
  std::uniform_int_distribution<int> size(2, 30);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = size(rng);
    Matrix a(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) a(i, j) = std::normal_distribution<double>(0.0, 1.0)(rng);
    }
    const std::vector<Complex> eig = eigenvalues(a);
    REQUIRE(eig.size() == static_cast<std::size_t>(m));
    Complex sum = 0.0;
    Complex product = 1.0;
    for (Complex mu : eig) {
      sum += mu;
      product *= mu;
      CHECK(eigen_residual(a, mu) < 1e-8 * (1.0 + a.norm()));
    }
    const double trace = a.trace();
    CHECK(std::abs(sum - trace) <= 1e-8 * std::max(1.0, a.cwiseAbs().sum() / m));
    const double det = a.partialPivLu().determinant();
    CHECK(std::abs(product - det) <= 1e-6 * std::max(1.0, std::abs(det)));

    const Eigen::VectorXcd ref = Eigen::EigenSolver<Matrix>(a, false).eigenvalues();
    for (Eigen::Index i = 0; i < ref.size(); ++i) CHECK(nearest(eig, ref(i)) < 1e-8 * (1.0 + a.norm()));
  }
}

TEST_CASE("abscissa and radius") {
  const std::vector<Complex> s{{-1.0, 2.0}, {-0.5, 0.0}, {-3.0, 0.0}};
  CHECK(spectral_abscissa(s) == -0.5);
  CHECK(spectral_radius(s) == 3.0);
}

TEST_CASE("matrix exponential") {
  CHECK((expm_oracle(Matrix::Zero(4, 4), 3.0) - Matrix::Identity(4, 4)).norm() < 1e-15);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.5;
  d(1, 1) = -7.0;
  const Matrix e = expm_oracle(d);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.5)).epsilon(1e-14));
  CHECK(e(1, 1) == doctest::Approx(std::exp(-7.0)).epsilon(1e-14));
  CHECK(std::abs(e(0, 1)) + std::abs(e(1, 0)) == 0.0);

  testing::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = Matrix::Zero(6, 6);
    for (Eigen::Index i = 0; i < 6; ++i) {
      for (Eigen::Index j = 0; j < 6; ++j) a(i, j) = std::normal_distribution<double>(0.0, 2.0)(rng);
    }
    const Matrix ref = (a * 0.7).exp();
    CHECK((expm_oracle(a, 0.7) - ref).norm() <= 1e-10 * ref.norm());
  }
}
