#include "acons/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace acons {

namespace {

void validate_adjacency_shape(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidInput("adjacency matrix must be square");
  }
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i, i) != 0.0) {
      std::ostringstream msg;
      msg << "adjacency diagonal must be zero (entry " << i << ")";
      throw InvalidInput(msg.str());
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = a(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        std::ostringstream msg;
        msg << "adjacency weight (" << i << ", " << j << ") must be finite and >= 0";
        throw InvalidInput(msg.str());
      }
      if (w != a(j, i)) {
        std::ostringstream msg;
        msg << "adjacency must be symmetric: a(" << i << "," << j << ") != a(" << j << "," << i
            << ")";
        throw InvalidInput(msg.str());
      }
    }
  }
}

}  // namespace

Topology::Topology(Matrix adjacency) : adjacency_(std::move(adjacency)) {
  validate_adjacency_shape(adjacency_);
  if (adjacency_.rows() < 2) {
    throw InvalidInput("topology needs at least two agents");
  }
  if (!is_connected(adjacency_)) {
    throw InvalidInput("communication graph is not connected");
  }
}

Topology Topology::ring(std::size_t n, double weight) {
  if (n < 3) {
    return path(n, weight);
  }
  const auto m = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    a(i, j) = weight;
    a(j, i) = weight;
  }
  return Topology(std::move(a));
}

Topology Topology::path(std::size_t n, double weight) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    a(i, i + 1) = weight;
    a(i + 1, i) = weight;
  }
  return Topology(std::move(a));
}

Topology Topology::complete(std::size_t n, double weight) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Constant(m, m, weight);
  a.diagonal().setZero();
  return Topology(std::move(a));
}

Topology Topology::without_agent(std::size_t index) const {
  const auto n = static_cast<Eigen::Index>(size());
  const auto drop = static_cast<Eigen::Index>(index);
  if (drop >= n) {
    throw InvalidInput("departing agent index out of range");
  }
  Matrix reduced(n - 1, n - 1);
  for (Eigen::Index i = 0, ri = 0; i < n; ++i) {
    if (i == drop) continue;
    for (Eigen::Index j = 0, rj = 0; j < n; ++j) {
      if (j == drop) continue;
      reduced(ri, rj++) = adjacency_(i, j);
    }
    ++ri;
  }
  return Topology(std::move(reduced));
}

Matrix laplacian(const Topology& topology) {
  Matrix l = -topology.adjacency();
  l.diagonal() = topology.degrees();
  return l;
}

bool is_connected(const Matrix& adjacency) {
  validate_adjacency_shape(adjacency);
  const Eigen::Index n = adjacency.rows();
  if (n == 0) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<Eigen::Index> queue{0};
  seen[0] = true;
  Eigen::Index reached = 1;
  while (!queue.empty()) {
    const Eigen::Index i = queue.front();
    queue.pop_front();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (adjacency(i, j) > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        ++reached;
        queue.push_back(j);
      }
    }
  }
  return reached == n;
}

SpectralDecomposition spectral_decomposition(const Topology& topology) {
  const auto n = static_cast<Eigen::Index>(topology.size());
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  // u = e1 - r; H = I - 2 u u^T / (u^T u) is symmetric, orthogonal and maps
  // e1 to r, so its first column is r.
  Vector u = Vector::Constant(n, -inv_sqrt_n);
  u(0) += 1.0;
  Matrix t = Matrix::Identity(n, n) - (2.0 / u.squaredNorm()) * (u * u.transpose());
  t.col(0).setConstant(inv_sqrt_n);

  SpectralDecomposition out;
  out.transform = std::move(t);
  const Matrix complement = out.complement();
  Matrix reduced = complement.transpose() * laplacian(topology) * complement;
  out.reduced_laplacian = 0.5 * (reduced + reduced.transpose());
  return out;
}

std::vector<double> symmetric_eigenvalues(const Matrix& symmetric) {
  if (symmetric.rows() != symmetric.cols()) {
    throw InvalidInput("symmetric_eigenvalues: matrix must be square");
  }
  const Eigen::Index n = symmetric.rows();
  if (n == 0) return {};
  Matrix a = symmetric;

  // Householder tridiagonalization.
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index len = n - k - 1;
    Vector x = a.block(k + 1, k, len, 1);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    const double alpha = x(0) > 0.0 ? -xnorm : xnorm;
    Vector v = x;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    auto sub = a.block(k + 1, k + 1, len, len);
    // H S H with H = I - 2 v v^T.
    const Vector p = sub * v;
    const double kappa = v.dot(p);
    const Vector w = 2.0 * (p - kappa * v);
    sub.noalias() -= v * w.transpose() + w * v.transpose();
    a.block(k + 1, k, len, 1).setZero();
    a.block(k, k + 1, 1, len).setZero();
    a(k + 1, k) = alpha;
    a(k, k + 1) = alpha;
  }

  std::vector<double> d(static_cast<std::size_t>(n));
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    d[static_cast<std::size_t>(i)] = a(i, i);
    if (i + 1 < n) e[static_cast<std::size_t>(i)] = 0.5 * (a(i + 1, i) + a(i, i + 1));
  }

  // Implicit QL with Wilkinson-style shifts.
  const int nn = static_cast<int>(n);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < nn; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < nn - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) {
          throw NumericalError("symmetric_eigenvalues: QL iteration did not converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.rows() >= m.cols() ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
  const std::vector<double> ev = symmetric_eigenvalues(gram);
  return std::sqrt(std::max(ev.back(), 0.0));
}

}  // namespace acons
