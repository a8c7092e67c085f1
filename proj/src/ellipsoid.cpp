#include "herdisc/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace herdisc {

namespace {

struct PsdSqrtPair {
  Matrix sqrt;      // M^{1/2}
  Matrix inv_sqrt;  // M^{-1/2}, eigenvalues floored before inversion
  double trace_sqrt = 0.0;
};

PsdSqrtPair sqrt_and_inv_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  Vector ev = es.eigenvalues();
  const double floor_ev = std::max(1e-14 * std::max(ev.maxCoeff(), 0.0), 1e-300);
  Vector sq(ev.size()), isq(ev.size());
  PsdSqrtPair out;
  for (int i = 0; i < ev.size(); ++i) {
    const double lam = std::max(ev(i), floor_ev);
    sq(i) = std::sqrt(lam);
    isq(i) = 1.0 / sq(i);
    out.trace_sqrt += sq(i);
  }
  const Matrix& v = es.eigenvectors();
  out.sqrt = v * sq.asDiagonal() * v.transpose();
  out.inv_sqrt = v * isq.asDiagonal() * v.transpose();
  return out;
}

double sigma_min_rows(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() < a.rows()) return 0.0;
  return sv(a.rows() - 1);
}

}  // namespace

Ellipsoid make_ellipsoid(const Matrix& shape) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (shape + shape.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw NotPsd("ellipsoid shape matrix must be positive definite");
  }
  Ellipsoid e;
  e.shape = 0.5 * (shape + shape.transpose());
  Vector isq = es.eigenvalues().cwiseSqrt().cwiseInverse();
  e.factor = es.eigenvectors() * isq.asDiagonal() * es.eigenvectors().transpose();
  e.linf_width = std::sqrt((e.factor * e.factor.transpose()).diagonal().maxCoeff());
  return e;
}

double dual_value(const Matrix& a, const DiagonalWeights& p,
                  const DiagonalWeights& q) {
  if (p.dim() != a.rows() || q.dim() != a.cols()) {
    throw DimError("dual_value: weight dimensions do not match matrix");
  }
  return nuclear_norm(p.sqrt().asDiagonal() * a * q.sqrt().asDiagonal());
}

Ellipsoid recover_primal(const Matrix& a, const DiagonalWeights& p,
                         const DiagonalWeights& r) {
  const int m = static_cast<int>(a.rows());
  if (p.dim() != m || r.dim() != a.cols()) {
    throw DimError("recover_primal: weight dimensions do not match matrix");
  }
  if (sigma_min_rows(a) <= 0.0) {
    throw RankError("recover_primal: A must have full row rank");
  }
  const double floor_p = 1e-10 / m;
  const double floor_r = 1e-10 / a.cols();
  Vector pf = p.w.cwiseMax(floor_p);
  Vector rf = r.w.cwiseMax(floor_r);

  Vector ph = pf.cwiseSqrt();
  Matrix b = ph.asDiagonal() * a;                       // P^{1/2} A
  Matrix mm = b * rf.asDiagonal() * b.transpose();      // P^{1/2} A R A^T P^{1/2}
  PsdSqrtPair ms = sqrt_and_inv_sqrt(mm);
  // X = P^{1/2} M^{-1/2} P^{1/2} solves the stationarity condition.
  Matrix x = ph.asDiagonal() * ms.inv_sqrt * ph.asDiagonal();
  const double s = (a.transpose() * x * a).diagonal().maxCoeff();
  if (!(s > 0.0)) throw RankError("recover_primal: degenerate scaling");
  return make_ellipsoid(x / s);
}

MinLinfResult solve_min_linf_ellipsoid(const Matrix& a_in,
                                       const EllipsoidSolveOptions& opts) {
  require_finite(a_in, "solve_min_linf_ellipsoid input");
  Matrix a = a_in;
  if (sigma_min_rows(a) <= 1e-12 * std::max(1.0, spectral_norm(a))) {
    const double delta = 1e-7 * (1.0 + (a.size() ? a.cwiseAbs().maxCoeff() : 0.0));
    a = full_rank_reduce(a, delta);
  }
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const double floor_p = opts.eps_floor / m;
  const double floor_r = opts.eps_floor / n;

  Vector p = Vector::Constant(m, 1.0 / m);
  Vector q = Vector::Constant(n, 1.0 / n);

  double best_primal_sq = std::numeric_limits<double>::infinity();
  Matrix best_shape;
  double best_dual = 0.0;
  Vector best_p = p, best_q = q;

  SolveDiagnostics diag;

  for (int k = 0; k < opts.max_iters; ++k) {
    diag.iterations = k + 1;
    Vector pf = p.cwiseMax(floor_p);
    Vector qf = q.cwiseMax(floor_r);
    Vector ph = pf.cwiseSqrt();
    Vector pih = ph.cwiseInverse();

    // Dual value S = ||P^{1/2} A Q^{1/2}||_S1 and its KKT fixed point:
    // p_i <- (U Sigma U^T)_ii / S, q_j <- (V Sigma V^T)_jj / S, where
    // U Sigma V^T is the SVD of the reweighted matrix. At a maximizer the
    // weights are proportional to these marginals, and the iteration
    // converges rapidly in practice (a flip-flop scaling update).
    Matrix h = ph.asDiagonal() * a * qf.cwiseSqrt().asDiagonal();
    Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double dual_now = sv.sum();
    if (!(dual_now > 0.0)) break;

    // Primal iterate from stationarity with R = S * Q, rescaled feasible.
    Vector rf = dual_now * qf;
    Matrix b = ph.asDiagonal() * a;
    Matrix mm = b * rf.asDiagonal() * b.transpose();
    PsdSqrtPair ms = sqrt_and_inv_sqrt(mm);
    Matrix x = ph.asDiagonal() * ms.inv_sqrt * ph.asDiagonal();     // inner X*
    Matrix xinv = pih.asDiagonal() * ms.sqrt * pih.asDiagonal();    // X*^{-1}
    Vector col_norms = (a.transpose() * x * a).diagonal();
    const double s = col_norms.maxCoeff();
    const double primal_sq = s * xinv.diagonal().maxCoeff();
    if (primal_sq < best_primal_sq) {
      best_primal_sq = primal_sq;
      best_shape = x / s;
    }
    if (dual_now > best_dual) {
      best_dual = dual_now;
      best_p = pf / pf.sum();
      best_q = qf / qf.sum();
    }

    diag.max_weak_duality_violation = std::max(
        diag.max_weak_duality_violation, dual_now - std::sqrt(primal_sq));

    diag.relative_gap =
        (std::sqrt(best_primal_sq) - best_dual) / std::max(best_dual, 1e-12);
    if (diag.relative_gap <= opts.tol) {
      diag.converged = true;
      break;
    }

    Vector p_next(m), q_next(n);
    for (int i = 0; i < m; ++i)
      p_next(i) = svd.matrixU().row(i).cwiseAbs2().dot(sv) / dual_now;
    for (int j = 0; j < n; ++j)
      q_next(j) = svd.matrixV().row(j).cwiseAbs2().dot(sv) / dual_now;
    p = p_next.cwiseMax(floor_p);
    p /= p.sum();
    q = q_next.cwiseMax(floor_r);
    q /= q.sum();
  }

  MinLinfResult out;
  out.ellipsoid = make_ellipsoid(best_shape);
  out.witness.row_weights = DiagonalWeights{best_p / best_p.sum()};
  out.witness.col_weights = DiagonalWeights{best_q / best_q.sum()};
  out.witness.value = dual_value(a, out.witness.row_weights, out.witness.col_weights);
  diag.primal_value = out.ellipsoid.linf_width;
  diag.dual_value = out.witness.value;
  diag.relative_gap =
      (diag.primal_value - diag.dual_value) / std::max(diag.dual_value, 1e-12);
  out.diagnostics = diag;
  return out;
}

MinTraceResult solve_min_trace_ellipsoid(const Matrix& v,
                                         const EllipsoidSolveOptions& opts) {
  require_finite(v, "solve_min_trace_ellipsoid input");
  const int n = static_cast<int>(v.rows());
  const int cols = static_cast<int>(v.cols());
  if (sigma_min_rows(v) <= 0.0) {
    throw RankError("solve_min_trace_ellipsoid: V must have full row rank");
  }
  const double floor_r = opts.eps_floor / cols;

  Vector q = Vector::Constant(cols, 1.0 / cols);
  double best_primal = std::numeric_limits<double>::infinity();
  Matrix best_shape = Matrix::Identity(n, n);
  double best_dual = 0.0;
  Vector best_r = q;
  SolveDiagnostics diag;

  for (int k = 0; k < opts.max_iters; ++k) {
    diag.iterations = k + 1;
    Vector qf = q.cwiseMax(floor_r);
    qf /= qf.sum();

    // Dual value S = ||V Q^{1/2}||_S1; maximize over trace-1 Q by the same
    // KKT fixed point as the width solver, q_j <- (W Sigma W^T)_jj / S.
    Matrix h = v * qf.cwiseSqrt().asDiagonal();
    Eigen::JacobiSVD<Matrix> svd(h, Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double s1 = sv.sum();
    if (!(s1 > 0.0)) break;
    const double dual_now = s1 * s1;  // optimum of g over the scale of R

    Vector rf = dual_now * qf;  // R = tr(R) Q with tr(R) = S^2
    Matrix mm = v * rf.asDiagonal() * v.transpose();
    PsdSqrtPair ms = sqrt_and_inv_sqrt(mm);
    const Matrix& x = ms.inv_sqrt;  // stationarity: X^{-2} = V R V^T

    Vector col_vals = (v.transpose() * x * v).diagonal();
    const double s = col_vals.maxCoeff();
    const double primal = s * ms.trace_sqrt;  // tr((X/s)^{-1})
    if (primal < best_primal) {
      best_primal = primal;
      best_shape = x / s;
    }
    if (dual_now > best_dual) {
      best_dual = dual_now;
      best_r = rf;
    }
    diag.max_weak_duality_violation =
        std::max(diag.max_weak_duality_violation, dual_now - primal);

    diag.relative_gap = (best_primal - best_dual) / std::max(best_dual, 1e-12);
    if (diag.relative_gap <= opts.tol) {
      diag.converged = true;
      break;
    }

    Vector q_next(cols);
    for (int j = 0; j < cols; ++j)
      q_next(j) = svd.matrixV().row(j).cwiseAbs2().dot(sv) / s1;
    q = q_next;
  }

  MinTraceResult out;
  out.ellipsoid = make_ellipsoid(best_shape);
  out.r = DiagonalWeights{best_r};
  diag.primal_value = best_primal;
  diag.dual_value = best_dual;
  out.diagnostics = diag;
  return out;
}

GaussianWidthEstimate gaussian_width_mc(const Ellipsoid& e, int samples,
                                        std::uint64_t seed) {
  if (samples < 100) {
    throw InvalidParameter("gaussian_width_mc: need at least 100 samples");
  }
  const int m = static_cast<int>(e.factor.rows());
  std::mt19937_64 rng(seed);
  auto uniform01 = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
  bool have_spare = false;
  double spare = 0.0;
  auto gaussian = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    spare = rad * std::sin(2.0 * M_PI * u2);
    have_spare = true;
    return rad * std::cos(2.0 * M_PI * u2);
  };

  double sum = 0.0, sum_sq = 0.0;
  Vector g(m);
  for (int t = 0; t < samples; ++t) {
    for (int i = 0; i < m; ++i) g(i) = gaussian();
    const double val = (e.factor.transpose() * g).norm();
    sum += val;
    sum_sq += val * val;
  }
  GaussianWidthEstimate est;
  est.samples = samples;
  est.mean = sum / samples;
  const double var = std::max(0.0, sum_sq / samples - est.mean * est.mean);
  est.std_error = std::sqrt(var / samples);
  return est;
}

}  // namespace herdisc
