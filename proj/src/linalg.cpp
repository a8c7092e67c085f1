#include "herdisc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>

namespace herdisc {

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidMatrix(std::string(what) + " contains NaN or infinity");
  }
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double hs_norm(const Matrix& m) { return m.norm(); }

SpectralDecomposition spectrum(const Matrix& m) {
  require_finite(m);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SpectralDecomposition out;
  out.singular_values = svd.singularValues();
  out.left_vectors = svd.matrixU();
  out.right_vectors = svd.matrixV();
  return out;
}

double nuclear_norm(const Matrix& m) {
  require_finite(m);
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix psd_sqrt(const Matrix& m) {
  require_finite(m);
  const double scale = spectral_norm(m);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale)) {
    throw NotPsd("psd_sqrt: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  Vector ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-6 * std::max(scale, 1e-12)) {
      throw NotPsd("psd_sqrt: eigenvalue " + std::to_string(ev(i)) +
                   " below clamp threshold");
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Matrix psd_inv_sqrt(const Matrix& m, double eps) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  Vector ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    ev(i) = 1.0 / std::sqrt(std::max(ev(i), eps));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

DiagonalWeights simplex_project(const Vector& v) {
  if (!v.allFinite()) throw InvalidMatrix("simplex_project: non-finite input");
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  // Largest rho with u_rho - theta(rho) > 0 (Held-Wolfe-Crowder threshold).
  double cssv = 0.0, theta = 0.0;
  int rho = 0;
  double running = 0.0;
  for (int i = 0; i < n; ++i) {
    running += u[i];
    const double t = (running - 1.0) / (i + 1);
    if (u[i] - t > 0.0) {
      rho = i + 1;
      cssv = running;
    }
  }
  theta = (cssv - 1.0) / rho;
  Vector out(n);
  for (int i = 0; i < n; ++i) out(i) = std::max(v(i) - theta, 0.0);
  return DiagonalWeights{out};
}

namespace {

// FNV-1a over the raw entry bytes; seeds the perturbation so that
// identical inputs always get identical perturbations.
std::uint64_t hash_entries(const Matrix& a) {
  std::uint64_t h = 1469598103934665603ull;
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) {
      std::uint64_t bits;
      double x = a(i, j);
      std::memcpy(&bits, &x, sizeof(bits));
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xff;
        h *= 1099511628211ull;
      }
    }
  }
  return h;
}

double row_space_sigma_min(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() < a.rows()) return 0.0;
  return sv(a.rows() - 1);
}

}  // namespace

Matrix full_rank_reduce(const Matrix& a, double delta) {
  if (!(delta > 0.0)) throw InvalidParameter("full_rank_reduce: delta must be positive");
  require_finite(a);
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  Matrix b = a;
  if (n < m) {
    // Too few columns to span R^m; append near-zero ones first.
    b.conservativeResize(m, m);
    b.rightCols(m - n).setZero();
  }

  const double threshold = delta * std::max(1.0, spectral_norm(a)) * 1e-3;
  if (row_space_sigma_min(b) >= threshold && n >= m) return a;
  if (row_space_sigma_min(b) >= threshold) return b;

  std::mt19937_64 rng(hash_entries(a));
  Matrix best = b;
  double best_sigma = -1.0;
  for (int attempt = 0; attempt < 16; ++attempt) {
    Matrix c = b;
    for (int j = 0; j < c.cols(); ++j) {
      for (int i = 0; i < c.rows(); ++i) {
        // Magnitude in [delta/2, delta], random sign.
        const double u = (rng() >> 11) * 0x1.0p-53;
        const double mag = delta * (0.5 + 0.5 * u);
        const double sign = (rng() & 1) ? 1.0 : -1.0;
        c(i, j) += sign * mag;
      }
    }
    const double s = row_space_sigma_min(c);
    if (s > best_sigma) {
      best_sigma = s;
      best = c;
    }
    if (s >= threshold) return c;
  }
  return best;
}

}  // namespace herdisc
