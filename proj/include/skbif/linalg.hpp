#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace skbif {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Eigenvalue sign threshold used for every index count in the library.
inline constexpr double kHyperbolicThreshold = 1e-9;

/// Orthonormal basis of the sum-zero hyperplane of R^k, as a k x (k-1) matrix.
/// Columns are Helmert vectors, so the basis is fixed and reproducible.
Mat sum_zero_basis(int k);

/// Orthonormal basis of the orthogonal complement of `dirs` inside span(basis).
Mat complement_basis(const Mat& basis, const Mat& dirs);

/// Real parts of the spectrum of a square matrix, sorted ascending.
/// Symmetric input (relative asymmetry below 1e-10) goes through the
/// self-adjoint solver.
std::vector<double> spectrum_real_parts(const Mat& m);

/// Number of eigenvalues with negative real part.
/// Throws NonHyperbolicError if any real part lies within `threshold` of zero.
int negative_count(const Mat& m, double threshold = kHyperbolicThreshold);

/// ||A - A^T||_F / max(1, ||A||_F)
double relative_asymmetry(const Mat& m);

std::uint64_t binomial(int n, int r);

} // namespace skbif
