#pragma once

#include <vector>

#include "acons/types.hpp"

namespace acons {

/// All eigenvalues of a real square matrix, with multiplicity, sorted by real
/// part then imaginary part.
///
/// Balancing, elimination to upper Hessenberg form, then Francis double-shift
/// QR. Intended for desk-scale matrices (m up to a few dozen). Throws
/// NumericalError if an eigenvalue fails to converge within the iteration cap.
std::vector<Complex> eigenvalues(const Matrix& a);

/// min ||(A - mu I) x|| over unit x, estimated by inverse iteration. Small
/// values certify that mu is (numerically) an eigenvalue of A.
double eigen_residual(const Matrix& a, Complex mu);

/// max Re(mu)
double spectral_abscissa(const std::vector<Complex>& spectrum);
/// max |mu|
double spectral_radius(const std::vector<Complex>& spectrum);

/// e^{A t} by scaling and squaring with a degree-13 Pade approximant.
Matrix expm_oracle(const Matrix& a, double t = 1.0);

}  // namespace acons
