#pragma once

#include <cstddef>
#include <vector>

#include "acons/types.hpp"

namespace acons {

/// Undirected weighted communication graph over n >= 2 agents.
///
/// The adjacency matrix is validated on construction: symmetric, zero
/// diagonal, nonnegative, finite, and connected. A Topology that exists is
/// always valid.
class Topology {
 public:
  explicit Topology(Matrix adjacency);

  static Topology ring(std::size_t n, double weight = 1.0);
  static Topology path(std::size_t n, double weight = 1.0);
  static Topology complete(std::size_t n, double weight = 1.0);

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(adjacency_.rows()); }
  [[nodiscard]] const Matrix& adjacency() const { return adjacency_; }
  [[nodiscard]] Vector degrees() const { return adjacency_.rowwise().sum(); }

  /// Topology with agent `index` (and its edges) removed. Throws InvalidInput
  /// when the remaining graph is disconnected or has fewer than two agents.
  [[nodiscard]] Topology without_agent(std::size_t index) const;

 private:
  Matrix adjacency_;
};

/// L = D - A.
Matrix laplacian(const Topology& topology);

/// Breadth-first reachability over positive-weight edges. Throws InvalidInput
/// when the candidate is not square, symmetric, nonnegative with zero
/// diagonal.
bool is_connected(const Matrix& adjacency);

/// Orthonormal T = [r N] with r = 1/sqrt(n) * 1, and the reduced Laplacian
/// L+ = N^T L N (symmetric positive definite on a connected graph).
struct SpectralDecomposition {
  Matrix transform;
  Matrix reduced_laplacian;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(transform.rows()); }
  /// Columns 2..n of the transform.
  [[nodiscard]] Matrix complement() const {
    return transform.rightCols(transform.cols() - 1);
  }
};

/// N is the Householder completion: T is the reflection mapping e1 onto r.
SpectralDecomposition spectral_decomposition(const Topology& topology);

/// Eigenvalues of a symmetric matrix in ascending order (Householder
/// tridiagonalization followed by implicit QL iteration).
std::vector<double> symmetric_eigenvalues(const Matrix& symmetric);

/// Largest singular value.
double spectral_norm(const Matrix& m);

}  // namespace acons
