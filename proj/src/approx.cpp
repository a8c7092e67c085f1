#include "herdisc/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace herdisc {

namespace {

// Greedy max-sigma_min ordering of the columns of b; ties to the smallest
// index. Returns the full ordering (capped at min(m, n) columns, beyond
// which sigma_min is identically zero).
std::vector<int> greedy_column_order(const Matrix& b) {
  const int n = static_cast<int>(b.cols());
  const int cap = std::min<int>(n, static_cast<int>(b.rows()));
  std::vector<int> order;
  std::vector<bool> used(n, false);
  for (int step = 0; step < cap; ++step) {
    int best_j = -1;
    double best_sigma = -1.0;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      Matrix sub(b.rows(), step + 1);
      for (int t = 0; t < step; ++t) sub.col(t) = b.col(order[t]);
      sub.col(step) = b.col(j);
      Eigen::SelfAdjointEigenSolver<Matrix> es(sub.transpose() * sub);
      const double sigma = std::sqrt(std::max(es.eigenvalues().minCoeff(), 0.0));
      if (sigma > best_sigma + 1e-15) {
        best_sigma = sigma;
        best_j = j;
      }
    }
    if (best_j < 0) break;
    used[best_j] = true;
    order.push_back(best_j);
  }
  return order;
}

double column_norm_max(const Matrix& a) {
  double v = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) v = std::max(v, a.col(j).norm());
  return v;
}

}  // namespace

BoundsReport approximate_herdisc(const Matrix& a, const AlgorithmOptions& opts) {
  require_finite(a);
  if (a.rows() == 0 || a.cols() == 0 || a.cwiseAbs().maxCoeff() == 0.0)
    throw InvalidMatrix("approximate_herdisc: matrix must be nonzero");
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  const double delta_eff =
      opts.delta > 0.0 ? opts.delta : 1e-7 * (1.0 + a.cwiseAbs().maxCoeff());
  const Matrix a2 = full_rank_reduce(a, delta_eff);
  const bool perturbed = (a2.cols() != a.cols()) || (a2 != a);

  EllipsoidSolveOptions eopts;
  eopts.tol = opts.tol;
  eopts.max_iters = opts.max_iters;
  MinLinfResult solved = solve_min_linf_ellipsoid(a2, eopts);

  BoundsReport report;
  report.delta = perturbed ? delta_eff : 0.0;
  report.ellipsoid = solved.ellipsoid;
  report.mu = solved.ellipsoid.linf_width;
  report.diagnostics = solved.diagnostics;
  report.relative_gap = solved.diagnostics.relative_gap;

  // Extraction runs on the reweighted, possibly perturbed matrix; the
  // certified subset is then re-scored on the original A, which is sound
  // for any trace-1 row weights.
  const DiagonalWeights& p = solved.witness.row_weights;
  const Matrix weighted = p.sqrt().asDiagonal() * a2;
  report.extraction = extract_spectral_subset(weighted, solved.witness.col_weights);

  // Fold the dual witness back onto the original columns (rank repair may
  // have appended near-zero ones); renormalizing can only help the bound.
  DiagonalWeights q0{solved.witness.col_weights.w.head(n)};
  const double qs = q0.sum();
  q0.w = qs > 0.0 ? Vector(q0.w / qs) : Vector::Constant(n, 1.0 / n);
  report.dual_witness = DualWitness{p, q0, dual_value(a, p, q0)};

  std::vector<std::vector<int>> candidates;
  std::vector<int> extracted;
  for (int j : report.extraction.selected)
    if (j < n) extracted.push_back(j);
  if (!extracted.empty()) candidates.push_back(extracted);
  const std::vector<int> order = greedy_column_order(p.sqrt().asDiagonal() * a);
  for (std::size_t k = 1; k <= order.size(); ++k)
    candidates.emplace_back(order.begin(), order.begin() + k);

  double alpha = 0.0;
  std::vector<int> best_subset;
  for (auto& s : candidates) {
    std::sort(s.begin(), s.end());
    const double v = spectral_lb_value(a, s, p);
    if (v > alpha) {
      alpha = v;
      best_subset = s;
    }
  }
  if (best_subset.empty()) best_subset = {0};
  report.alpha = alpha;
  report.subset_witness = SubsetWitness{best_subset, p, alpha};

  const double disc_factor = std::sqrt(2.0 * std::log(2.0 * m));
  if (alpha > 0.0) {
    report.guarantee_ratio_vec = report.mu / alpha;
    report.guarantee_ratio_disc = disc_factor * report.mu / alpha;
  } else {
    report.guarantee_ratio_vec = std::numeric_limits<double>::infinity();
    report.guarantee_ratio_disc = std::numeric_limits<double>::infinity();
  }

  if (opts.with_oracles) {
    SdpOptions sdp;
    sdp.tol = opts.tol;
    sdp.seed = opts.seed;
    if (n <= opts.disc_oracle_max_n)
      report.oracle_values.disc = disc_exact(a, opts.disc_oracle_max_n).value;
    if (n <= opts.herdisc_oracle_max_n)
      report.oracle_values.herdisc =
          herdisc_exact(a, opts.herdisc_oracle_max_n).value;
    if (n <= opts.sdp_oracle_max_n)
      report.oracle_values.vecdisc = vecdisc_solve(a, sdp).value;
    if (static_cast<int>(best_subset.size()) <= opts.sdp_oracle_max_n) {
      Matrix sub(a.rows(), static_cast<Eigen::Index>(best_subset.size()));
      for (std::size_t j = 0; j < best_subset.size(); ++j)
        sub.col(j) = a.col(best_subset[j]);
      report.oracle_values.subset_vecdisc = vecdisc_solve(sub, sdp).value;
    }
  }
  return report;
}

Verification verify_report(const Matrix& a, const BoundsReport& r) {
  Verification v;
  const int m = static_cast<int>(a.rows());
  const Matrix& x = r.ellipsoid.shape;
  const double xnorm = spectral_norm(x);
  const double colmax = column_norm_max(a);
  // Columns were certified inside the ellipsoid of the delta-perturbed
  // matrix; translate that to a tolerance on the original columns.
  const double delta_slack =
      xnorm * (2.0 * colmax * r.delta * std::sqrt(static_cast<double>(m)) +
               r.delta * r.delta * m);
  const double scale = std::max(1.0, r.mu);

  auto push = [&v](const std::string& name, double violation) {
    v.checks.push_back({name, violation <= 0.0, violation});
  };

  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    worst = std::max(worst, a.col(j).dot(x * a.col(j)) - 1.0);
  push("columns_inside",
       worst - (delta_slack + 1e-9 * (1.0 + xnorm * colmax * colmax)));

  double mu_rec = 0.0;
  try {
    mu_rec = make_ellipsoid(x).linf_width;
    push("mu_recomputed", std::abs(mu_rec - r.mu) - 1e-8 * scale);
  } catch (const NotPsd&) {
    push("mu_recomputed", std::numeric_limits<double>::infinity());
  }

  double dual_rec = 0.0;
  try {
    dual_rec = dual_value(a, r.dual_witness.row_weights, r.dual_witness.col_weights);
    push("dual_value_recomputed",
         std::abs(dual_rec - r.dual_witness.value) - 1e-8 * scale);
  } catch (const Error&) {
    push("dual_value_recomputed", std::numeric_limits<double>::infinity());
  }

  try {
    const double alpha_rec =
        spectral_lb_value(a, r.subset_witness.subset, r.subset_witness.row_weights);
    push("alpha_recomputed", std::abs(alpha_rec - r.alpha) - 1e-9 * scale);
  } catch (const Error&) {
    push("alpha_recomputed", std::numeric_limits<double>::infinity());
  }

  const double chain_slack = 1e-8 * scale + delta_slack;
  push("weak_duality_chain",
       std::max(r.dual_witness.value - r.mu, r.alpha - r.mu) - chain_slack);
  return v;
}

}  // namespace herdisc
