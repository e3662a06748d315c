#include "acons/eigen_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace acons {

namespace {

void balance(Matrix& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c != 0.0 && r != 0.0) {
        double g = r / radix;
        double f = 1.0;
        const double s = c + r;
        while (c < g) {
          f *= radix;
          c *= sqrdx;
        }
        g = r * radix;
        while (c > g) {
          f /= radix;
          c /= sqrdx;
        }
        if ((c + r) / f < 0.95 * s) {
          done = false;
          g = 1.0 / f;
          a.row(i) *= g;
          a.col(i) *= f;
        }
      }
    }
  }
}

// Gaussian elimination with pivoting to upper Hessenberg form.
void reduce_to_hessenberg(Matrix& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index m = 1; m + 1 < n; ++m) {
    double x = 0.0;
    Eigen::Index pivot = m;
    for (Eigen::Index j = m; j < n; ++j) {
      if (std::abs(a(j, m - 1)) > std::abs(x)) {
        x = a(j, m - 1);
        pivot = j;
      }
    }
    if (pivot != m) {
      for (Eigen::Index j = m - 1; j < n; ++j) std::swap(a(pivot, j), a(m, j));
      for (Eigen::Index j = 0; j < n; ++j) std::swap(a(j, pivot), a(j, m));
    }
    if (x != 0.0) {
      for (Eigen::Index i = m + 1; i < n; ++i) {
        double y = a(i, m - 1);
        if (y != 0.0) {
          y /= x;
          a(i, m - 1) = 0.0;
          for (Eigen::Index j = m; j < n; ++j) a(i, j) -= y * a(m, j);
          for (Eigen::Index j = 0; j < n; ++j) a(j, m) += y * a(j, i);
        }
      }
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 2; i < n; ++i) a(i, j) = 0.0;
  }
}

double sign(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
std::vector<Complex> hessenberg_qr(Matrix& a) {
  constexpr int kMaxIterations = 60;
  const int n = static_cast<int>(a.rows());
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<Complex> wri(static_cast<std::size_t>(n));

  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  }

  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wri[static_cast<std::size_t>(nn)] = Complex(x + t, 0.0);
        --nn;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign(z, p);
            wri[static_cast<std::size_t>(nn - 1)] = Complex(x + z, 0.0);
            wri[static_cast<std::size_t>(nn)] = Complex(x + z, 0.0);
            if (z != 0.0) wri[static_cast<std::size_t>(nn)] = Complex(x - w / z, 0.0);
          } else {
            wri[static_cast<std::size_t>(nn)] = Complex(x + p, -z);
            wri[static_cast<std::size_t>(nn - 1)] = Complex(x + p, z);
          }
          nn -= 2;
        } else {
          if (its == kMaxIterations) {
            std::ostringstream msg;
            msg << "eigenvalues: QR iteration did not converge (block ending at row " << nn
                << " of " << n << ")";
            throw NumericalError(msg.str());
          }
          if (its > 0 && its % 10 == 0) {
            // Exceptional shift.
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0;
          double q = 0.0;
          double r = 0.0;
          double z = 0.0;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            double s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = a(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = sign(std::sqrt(p * p + q * q + r * r), p);
            if (s != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k + 1 != nn) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k + 1 != nn) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (nn >= 0 && l < nn - 1);
  }
  return wri;
}

}  // namespace

std::vector<Complex> eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("eigenvalues: matrix must be square");
  if (!a.allFinite()) throw InvalidInput("eigenvalues: matrix has non-finite entries");
  const Eigen::Index n = a.rows();
  if (n == 0) return {};
  if (n == 1) return {Complex(a(0, 0), 0.0)};

  Matrix h = a;
  balance(h);
  reduce_to_hessenberg(h);
  std::vector<Complex> spectrum = hessenberg_qr(h);
  std::sort(spectrum.begin(), spectrum.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return spectrum;
}

double eigen_residual(const Matrix& a, Complex mu) {
  using CMatrix = Eigen::MatrixXcd;
  using CVector = Eigen::VectorXcd;
  const Eigen::Index n = a.rows();
  const CMatrix shifted = a.cast<Complex>() - mu * CMatrix::Identity(n, n);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  // A tiny offset keeps the factorization regular when mu is exact.
  const CMatrix regular = shifted + Complex(1e-13 * scale, 1e-13 * scale) * CMatrix::Identity(n, n);
  const Eigen::PartialPivLU<CMatrix> lu(regular);
  CVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = Complex(1.0 + 0.1 * static_cast<double>(i), 0.3);
  x.normalize();
  double best = (shifted * x).norm();
  for (int iter = 0; iter < 4; ++iter) {
    CVector y = lu.solve(x);
    const double norm = y.norm();
    if (!std::isfinite(norm) || norm == 0.0) break;
    x = y / norm;
    best = std::min(best, (shifted * x).norm());
  }
  return best;
}

double spectral_abscissa(const std::vector<Complex>& spectrum) {
  double out = -std::numeric_limits<double>::infinity();
  for (const Complex& mu : spectrum) out = std::max(out, mu.real());
  return out;
}

double spectral_radius(const std::vector<Complex>& spectrum) {
  double out = 0.0;
  for (const Complex& mu : spectrum) out = std::max(out, std::abs(mu));
  return out;
}

Matrix expm_oracle(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw InvalidInput("expm: matrix must be square");
  const Eigen::Index n = a.rows();
  static constexpr double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  Matrix m = a * t;
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
    m /= std::ldexp(1.0, squarings);
  }
  const Matrix id = Matrix::Identity(n, n);
  const Matrix m2 = m * m;
  const Matrix m4 = m2 * m2;
  const Matrix m6 = m4 * m2;
  const Matrix u_inner = m6 * (b[13] * m6 + b[11] * m4 + b[9] * m2) + b[7] * m6 + b[5] * m4 +
                         b[3] * m2 + b[1] * id;
  const Matrix u = m * u_inner;
  const Matrix v =
      m6 * (b[12] * m6 + b[10] * m4 + b[8] * m2) + b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * id;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

}  // namespace acons
