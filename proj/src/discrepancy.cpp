#include "herdisc/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace herdisc {

namespace {

// Same deterministic transforms as the instance generators: mt19937_64
// plus hand-rolled uniform/Box-Muller, so restart seeds behave identically
// across platforms.
struct Rng {
  std::mt19937_64 eng;
  double spare = 0.0;
  bool has_spare = false;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double uniform() { return (eng() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare = r * std::sin(t);
    has_spare = true;
    return r * std::cos(t);
  }
};

// Branch-and-bound over colorings; prefix sums per row, prune when some
// row is already farther out than the remaining columns can pull back.
struct ColoringSearch {
  const Matrix& a;
  int n;
  std::vector<Vector> reach;  // reach[j](i) = sum_{l>=j} |a_il|
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_signs;
  std::vector<int> signs;

  explicit ColoringSearch(const Matrix& a_) : a(a_), n(static_cast<int>(a_.cols())) {
    reach.assign(n + 1, Vector::Zero(a.rows()));
    for (int j = n - 1; j >= 0; --j) reach[j] = reach[j + 1] + a.col(j).cwiseAbs();
    signs.assign(n, 1);
  }

  void dfs(int j, Vector& partial) {
    if (j == n) {
      const double v = (a.rows() == 0) ? 0.0 : partial.cwiseAbs().maxCoeff();
      if (v < best) {
        best = v;
        best_signs = signs;
      }
      return;
    }
    if (a.rows() > 0 && (partial.cwiseAbs() - reach[j]).maxCoeff() >= best) return;
    for (int s : {1, -1}) {
      signs[j] = s;
      partial += s * a.col(j);
      dfs(j + 1, partial);
      partial -= s * a.col(j);
    }
  }

  void run() {
    Vector partial = Vector::Zero(a.rows());
    if (n == 0) {
      best = 0.0;
      best_signs.clear();
      return;
    }
    // x <-> -x symmetry: fix the first sign to +1.
    signs[0] = 1;
    partial += a.col(0);
    dfs(1, partial);
  }
};

DiscResult disc_unchecked(const Matrix& a) {
  ColoringSearch search(a);
  search.run();
  return DiscResult{search.best, Coloring{search.best_signs}};
}

Matrix take_columns(const Matrix& a, const std::vector<int>& cols) {
  Matrix b(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) b.col(j) = a.col(cols[j]);
  return b;
}

Matrix normalize_columns(Matrix u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const double norm = u.col(j).norm();
    if (norm > 1e-300) {
      u.col(j) /= norm;
    } else {
      u.col(j).setZero();
      u(j % u.rows(), j) = 1.0;
    }
  }
  return u;
}

// max_i sqrt(e_i^T A (U^T U) A^T e_i), computed as row norms of A U^T.
double assignment_value(const Matrix& a, const Matrix& u) {
  if (a.rows() == 0) return 0.0;
  return (a * u.transpose()).rowwise().norm().maxCoeff();
}

// Minimize a smoothed max over unit-column factors U by projected gradient
// with backtracking, lowering the soft-max temperature geometrically, then
// try a block-coordinate pass on the sum-of-squares surrogate
// tr(U M U^T), M = A^T A, which nails instances whose optimum is zero.
struct FactoredMinimizer {
  // value_grad(u, t, grad): smoothed objective at temperature t; fills
  // grad when non-null.
  using ValueGrad = std::function<double(const Matrix&, double, Matrix*)>;
  using ExactValue = std::function<double(const Matrix&)>;

  ValueGrad value_grad;
  ExactValue exact_value;
  Matrix quad;  // M for the surrogate polish
  double scale = 1.0;

  // Euclidean gradients have a radial component that the normalization
  // retraction discards; removing it keeps the Armijo model honest and
  // avoids stalling where antipodal column pairs make the spherical
  // parametrization degenerate.
  static void project_tangent(const Matrix& u, Matrix* grad) {
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      grad->col(j) -= u.col(j).dot(grad->col(j)) * u.col(j);
  }

  // The starting temperature stays well below the objective scale: hotter
  // smoothing degenerates toward the trace, which is linear in the Gram
  // entries and drives columns into +-1 corners that the retraction
  // cannot leave.
  Matrix descend(Matrix u, const SdpOptions& opts) const {
    double step = 0.1;
    for (double t_rel = 0.1; t_rel >= 1e-6; t_rel *= 0.5) {
      const double t = t_rel * scale;
      Matrix grad(u.rows(), u.cols());
      double f = value_grad(u, t, &grad);
      project_tangent(u, &grad);
      for (int it = 0; it < opts.iters_per_temp; ++it) {
        const double gnorm2 = grad.squaredNorm();
        if (gnorm2 <= 1e-24 * scale * scale) break;
        double trial = step;
        bool moved = false;
        while (trial > 1e-16) {
          Matrix cand = normalize_columns(u - trial * grad);
          const double fc = value_grad(cand, t, nullptr);
          if (fc <= f - 1e-4 * trial * gnorm2) {
            u = std::move(cand);
            f = value_grad(u, t, &grad);
            project_tangent(u, &grad);
            step = std::min(trial * 1.5, 1e3);
            moved = true;
            break;
          }
          trial *= 0.5;
        }
        if (!moved) break;
      }
    }
    return u;
  }

  Matrix polish(Matrix u, const SdpOptions& opts) const {
    const int n = static_cast<int>(u.cols());
    for (int sweep = 0; sweep < opts.polish_sweeps; ++sweep) {
      double moved = 0.0;
      for (int j = 0; j < n; ++j) {
        Vector pull = u * quad.col(j) - quad(j, j) * u.col(j);
        const double norm = pull.norm();
        if (norm <= 1e-14 * scale) continue;
        Vector next = -pull / norm;
        moved = std::max(moved, (next - u.col(j)).norm());
        u.col(j) = next;
      }
      if (moved < 1e-12) break;
    }
    return u;
  }

  Matrix solve(int n, const SdpOptions& opts) const {
    Matrix best;
    double best_value = std::numeric_limits<double>::infinity();
    const int restarts = std::max(1, opts.restarts);
    for (int r = 0; r < restarts; ++r) {
      Matrix u;
      if (r == 0) {
        u = Matrix::Identity(n, n);
      } else {
        Rng rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(r));
        u.resize(n, n);
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) u(i, j) = rng.gaussian();
        u = normalize_columns(std::move(u));
      }
      u = descend(std::move(u), opts);
      for (const Matrix& cand : {u, polish(u, opts)}) {
        const double v = exact_value(cand);
        if (v < best_value) {
          best_value = v;
          best = cand;
        }
      }
    }
    return best;
  }
};

GramAssignment pack_assignment(const Matrix& a, Matrix u) {
  u = normalize_columns(std::move(u));
  Matrix gram = u.transpose() * u;
  gram = 0.5 * (gram + gram.transpose());
  return GramAssignment{gram, u, assignment_value(a, u), true};
}

// k-subset enumeration in lexicographic order.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
  return v;
}

}  // namespace

DiscResult disc_exact(const Matrix& a, int max_n) {
  require_finite(a);
  if (a.cols() > max_n)
    throw OracleTooLarge("disc_exact: n = " + std::to_string(a.cols()) +
                         " exceeds cap " + std::to_string(max_n));
  return disc_unchecked(a);
}

HerdiscResult herdisc_exact(const Matrix& a, int max_n) {
  require_finite(a);
  const int n = static_cast<int>(a.cols());
  if (n > max_n)
    throw OracleTooLarge("herdisc_exact: n = " + std::to_string(n) +
                         " exceeds cap " + std::to_string(max_n));
  HerdiscResult best;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) cols.push_back(j);
    const double v = disc_unchecked(take_columns(a, cols)).value;
    if (v > best.value) {
      best.value = v;
      best.subset = cols;
    }
  }
  return best;
}

GramAssignment vecdisc_solve(const Matrix& a, const SdpOptions& opts) {
  require_finite(a);
  const int n = static_cast<int>(a.cols());
  if (n == 0) return GramAssignment{Matrix(0, 0), Matrix(0, 0), 0.0, true};
  if (a.rows() == 0)
    return pack_assignment(a, Matrix::Identity(n, n));

  FactoredMinimizer fm;
  fm.quad = a.transpose() * a;
  fm.scale = std::max(a.rowwise().squaredNorm().maxCoeff(), 1e-300);
  fm.exact_value = [&a](const Matrix& u) { return assignment_value(a, u); };
  fm.value_grad = [&a](const Matrix& u, double t, Matrix* grad) {
    Vector q = (a * u.transpose()).rowwise().squaredNorm();
    const double qmax = q.maxCoeff();
    Vector w = ((q.array() - qmax) / t).exp();
    const double z = w.sum();
    if (grad) *grad = (2.0 / z) * u * a.transpose() * w.asDiagonal() * a;
    return t * std::log(z) + qmax;
  };
  return pack_assignment(a, fm.solve(n, opts));
}

bool vecdisc_dual_check(const Matrix& a, const Matrix& p, const DiagonalWeights& qd,
                        double d, double tol) {
  if (p.rows() != a.rows() || p.cols() != a.rows() || qd.dim() != a.cols())
    throw DimError("vecdisc_dual_check: dimension mismatch");
  if (qd.sum() < d * d - tol) return false;
  Matrix slack = a.transpose() * p * a;
  slack.diagonal() -= qd.w;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (slack + slack.transpose()));
  return es.eigenvalues().minCoeff() >= -tol;
}

double spectral_lb_value(const Matrix& a, const std::vector<int>& subset,
                         const DiagonalWeights& p) {
  if (subset.empty()) throw InvalidSubset("spectral_lb_value: empty subset");
  for (int j : subset)
    if (j < 0 || j >= a.cols())
      throw InvalidSubset("spectral_lb_value: column index " + std::to_string(j) +
                          " out of range");
  if (p.dim() != a.rows() || !p.is_normalized(1e-9))
    throw InvalidParameter("spectral_lb_value: row weights must have dim m and trace 1");
  const Matrix b = p.sqrt().asDiagonal() * take_columns(a, subset);
  const int k = static_cast<int>(subset.size());
  if (b.rows() < k) return 0.0;  // rank-deficient, sigma_min = 0
  Eigen::SelfAdjointEigenSolver<Matrix> es(b.transpose() * b);
  return std::sqrt(static_cast<double>(k) * std::max(es.eigenvalues().minCoeff(), 0.0));
}

double det_lb_exact(const Matrix& a, int max_k) {
  require_finite(a);
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const int kmax = std::min({m, n, max_k});
  if (std::min(m, n) > max_k)
    throw OracleTooLarge("det_lb_exact: min dimension " +
                         std::to_string(std::min(m, n)) + " exceeds cap " +
                         std::to_string(max_k));
  double total = 0.0;
  for (int k = 1; k <= kmax; ++k) total += binomial(m, k) * binomial(n, k);
  if (total > 2e6)
    throw OracleTooLarge("det_lb_exact: too many square submatrices to enumerate");

  double best = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    std::vector<int> rows(k), cols(k);
    for (int i = 0; i < k; ++i) rows[i] = i;
    do {
      for (int j = 0; j < k; ++j) cols[j] = j;
      do {
        Matrix sub(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub(i, j) = a(rows[i], cols[j]);
        const double det = std::abs(sub.determinant());
        if (det > 0.0) best = std::max(best, std::pow(det, 1.0 / k));
      } while (next_combination(cols, n));
    } while (next_combination(rows, m));
  }
  return best;
}

KomlosResult komlos_spectral_solve(const Matrix& a, const SdpOptions& opts) {
  require_finite(a);
  const int n = static_cast<int>(a.cols());
  for (int j = 0; j < n; ++j)
    if (a.col(j).norm() > 1.0 + 1e-9)
      throw PreconditionError("komlos_spectral_solve: column " + std::to_string(j) +
                              " has norm " + std::to_string(a.col(j).norm()) + " > 1");
  if (n == 0)
    return KomlosResult{GramAssignment{Matrix(0, 0), Matrix(0, 0), 0.0, true}, 0.0};

  FactoredMinimizer fm;
  fm.quad = a.transpose() * a;
  fm.scale = std::max(spectral_norm(a) * spectral_norm(a), 1e-300);
  fm.exact_value = [&a](const Matrix& u) {
    const Matrix g = a * u.transpose();
    return spectral_norm(g * g.transpose());
  };
  fm.value_grad = [&a](const Matrix& u, double t, Matrix* grad) {
    const Matrix g = a * u.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(g * g.transpose());
    const Vector& lam = es.eigenvalues();
    const double lmax = lam.maxCoeff();
    Vector w = ((lam.array() - lmax) / t).exp();
    const double z = w.sum();
    if (grad) {
      const Matrix weighted = es.eigenvectors() * (w / z).asDiagonal() *
                              es.eigenvectors().transpose();
      *grad = 2.0 * u * a.transpose() * weighted * a;
    }
    return t * std::log(z) + lmax;
  };

  GramAssignment gram = pack_assignment(a, fm.solve(n, opts));
  const double value = spectral_norm(a * gram.gram * a.transpose());
  gram.converged = value <= 1.0 + opts.tol;
  return KomlosResult{std::move(gram), value};
}

BanaszczykReport banaszczyk_diagnostic(const Matrix& a, const Ellipsoid& e,
                                       int max_n) {
  if (e.factor.rows() != a.rows())
    throw DimError("banaszczyk_diagnostic: ellipsoid dimension mismatch");
  const Vector widths = (e.factor * e.factor.transpose()).diagonal().cwiseSqrt();
  Matrix scaled = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (widths(i) <= 0.0)
      throw InvalidParameter("banaszczyk_diagnostic: degenerate ellipsoid axis");
    scaled.row(i) /= widths(i);
  }
  BanaszczykReport report;
  report.rho = disc_exact(scaled, max_n).value;
  report.reference = std::sqrt(2.0 * std::log(2.0 * std::max<Eigen::Index>(a.rows(), 1)));
  return report;
}

}  // namespace herdisc
