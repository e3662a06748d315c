#include <doctest.h>

#include <cmath>

#include "acons/graph.hpp"
#include "support/scenarios.hpp"

using namespace acons;

TEST_CASE("laplacian of the unit path on two nodes") {
  const Matrix l = laplacian(Topology::path(2));
  Matrix expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK((l - expected).norm() == 0.0);
}

TEST_CASE("laplacian rows sum to zero") {
  testing::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix l = laplacian(testing::random_connected_graph(rng, 7));
    CHECK(l.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("ring of six has spectrum 2 - 2 cos(pi k / 3)") {
  const std::vector<double> eig = symmetric_eigenvalues(laplacian(Topology::ring(6)));
  const std::vector<double> expected{0, 1, 1, 3, 3, 4};
  REQUIRE(eig.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(eig[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("connectivity") {
  Matrix two(2, 2);
  two << 0, 1, 1, 0;
  CHECK(is_connected(two));
  CHECK_FALSE(is_connected(Matrix::Zero(2, 2)));
  Matrix ring = Topology::ring(6).adjacency();
  ring(0, 5) = ring(5, 0) = 0.0;
  CHECK(is_connected(ring));
  ring(2, 3) = ring(3, 2) = 0.0;
  CHECK_FALSE(is_connected(ring));
}

TEST_CASE("topology rejects malformed adjacency") {
  CHECK_THROWS_AS(Topology(Matrix::Zero(2, 2)), InvalidInput);
  Matrix asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(Topology{asym}, InvalidInput);
  Matrix negative(2, 2);
  negative << 0, -1, -1, 0;
  CHECK_THROWS_AS(Topology{negative}, InvalidInput);
  Matrix loop(2, 2);
  loop << 1, 1, 1, 0;
  CHECK_THROWS_AS(Topology{loop}, InvalidInput);
  CHECK_THROWS_AS(Topology(Matrix::Zero(1, 1)), InvalidInput);
}

TEST_CASE("removing an agent keeps or breaks connectivity") {
  const Topology ring = Topology::ring(6);
  CHECK(ring.without_agent(0).size() == 5);
  CHECK_THROWS_AS(static_cast<void>(Topology::path(3).without_agent(1)), InvalidInput);
}

TEST_CASE("two-node decomposition") {
  const SpectralDecomposition d = spectral_decomposition(Topology::path(2));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(d.transform(0, 0) - s) < 1e-15);
  CHECK(std::abs(d.transform(1, 0) - s) < 1e-15);
  CHECK(std::abs(std::abs(d.transform(0, 1)) - s) < 1e-15);
  CHECK(d.transform(0, 1) == doctest::Approx(-d.transform(1, 1)));
  REQUIRE(d.reduced_laplacian.rows() == 1);
  CHECK(d.reduced_laplacian(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("ring-6 reduced laplacian holds the nonzero spectrum") {
  const std::vector<double> eig = symmetric_eigenvalues(spectral_decomposition(Topology::ring(6)).reduced_laplacian);
  const std::vector<double> expected{1, 1, 3, 3, 4};
  REQUIRE(eig.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(eig[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("decomposition properties over random graphs") {
  testing::Rng rng(2024);
  std::uniform_int_distribution<std::size_t> size(2, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const Topology g = testing::random_connected_graph(rng, size(rng));
    const Matrix l = laplacian(g);
    const auto n = static_cast<Eigen::Index>(g.size());
    CHECK((l - l.transpose()).norm() == 0.0);

    const std::vector<double> eig = symmetric_eigenvalues(l);
    CHECK(std::abs(eig[0]) < 1e-10);
    CHECK(eig[1] > 1e-8);

    const SpectralDecomposition d = spectral_decomposition(g);
    CHECK(spectral_norm(d.transform.transpose() * d.transform - Matrix::Identity(n, n)) < 1e-12);
    Matrix block = d.transform.transpose() * l * d.transform;
    CHECK(block.row(0).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(block.col(0).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((block.bottomRightCorner(n - 1, n - 1) - d.reduced_laplacian).cwiseAbs().maxCoeff() < 1e-10);

    const std::vector<double> reduced = symmetric_eigenvalues(d.reduced_laplacian);
    CHECK(reduced.front() > 0.0);
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      CHECK(std::abs(reduced[i] - eig[i + 1]) < 1e-9 * (1.0 + eig.back()));
    }
  }
}

TEST_CASE("decomposition is bit-identical across calls") {
  testing::Rng rng(5);
  const Topology g = testing::random_connected_graph(rng, 9);
  const SpectralDecomposition a = spectral_decomposition(g);
  const SpectralDecomposition b = spectral_decomposition(g);
  CHECK(a.transform == b.transform);
  CHECK(a.reduced_laplacian == b.reduced_laplacian);
}

TEST_CASE("symmetric eigenvalues agree with Eigen") {
  testing::Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m = Matrix::Random(8, 8);
    m = (m + m.transpose()).eval();
    const std::vector<double> ours = symmetric_eigenvalues(m);
    const Vector ref = Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues();
    for (Eigen::Index i = 0; i < ref.size(); ++i) CHECK(std::abs(ours[static_cast<std::size_t>(i)] - ref(i)) < 1e-12);
  }
}

TEST_CASE("spectral norm") {
  Matrix m(2, 2);
  m << 3, 0, 0, -4;
  CHECK(spectral_norm(m) == doctest::Approx(4.0).epsilon(1e-14));
  const Matrix r = Matrix::Random(6, 4);
  Eigen::JacobiSVD<Matrix> svd(r);
  CHECK(spectral_norm(r) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-12));
}
