#pragma once

#include <Eigen/Dense>

#include "herdisc/errors.hpp"

namespace herdisc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Full singular value decomposition A = U * diag(sigma) * V^T with
// sigma sorted nonincreasing and all min(m,n) values present.
struct SpectralDecomposition {
  Vector singular_values;
  Matrix left_vectors;   // m x min(m,n), orthonormal columns
  Matrix right_vectors;  // n x min(m,n), orthonormal columns
};

// Nonnegative diagonal reweighting, e.g. the P and Q of the nuclear-norm
// dual. Entries are stored as a plain vector.
struct DiagonalWeights {
  Vector w;

  int dim() const { return static_cast<int>(w.size()); }
  double sum() const { return w.sum(); }
  bool is_normalized(double tol = 1e-12) const {
    return std::abs(w.sum() - 1.0) <= tol;
  }
  // Componentwise square root, for forming P^{1/2} A etc.
  Vector sqrt() const { return w.cwiseSqrt(); }

  static DiagonalWeights uniform(int d) {
    return DiagonalWeights{Vector::Constant(d, 1.0 / d)};
  }
};

bool all_finite(const Matrix& m);
void require_finite(const Matrix& m, const char* what = "matrix");

double spectral_norm(const Matrix& m);
double hs_norm(const Matrix& m);

SpectralDecomposition spectrum(const Matrix& m);

// Sum of singular values, tr((M M^T)^{1/2}).
double nuclear_norm(const Matrix& m);

// Principal square root of a symmetric PSD matrix. Eigenvalues in
// [-1e-6*||M||_2, 0) are clamped to zero; anything below that throws NotPsd.
Matrix psd_sqrt(const Matrix& m);

// Symmetric inverse square root, with eigenvalues floored at eps before
// inversion. Used by the dual-ascent solvers on nearly singular PSD input.
Matrix psd_inv_sqrt(const Matrix& m, double eps);

// Euclidean projection onto the probability simplex {w >= 0, sum w = 1}.
DiagonalWeights simplex_project(const Vector& v);

// Ensure rank m by appending near-zero columns when n < m and adding a
// deterministic entrywise perturbation of magnitude at most delta.
// Returns the input unchanged when it already has full row rank.
Matrix full_rank_reduce(const Matrix& a, double delta);

}  // namespace herdisc
