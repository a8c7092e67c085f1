#include "herdisc/restricted_invertibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace herdisc {

namespace {

Matrix columns(const Matrix& a, const std::vector<int>& cols) {
  Matrix sub(a.rows(), static_cast<int>(cols.size()));
  for (int j = 0; j < static_cast<int>(cols.size()); ++j) sub.col(j) = a.col(cols[j]);
  return sub;
}

double sigma_min_cols(const Matrix& a, const std::vector<int>& cols) {
  if (cols.empty()) return 0.0;
  Matrix sub = columns(a, cols);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sub.transpose() * sub);
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

// Greedy selection sequence: each round adds the eligible column that
// maximizes sigma_min of the grown submatrix (ties to the smallest index).
std::vector<int> greedy_order(const Matrix& a, const std::vector<int>& eligible,
                              int k) {
  std::vector<int> chosen;
  std::vector<bool> used(a.cols(), false);
  for (int round = 0; round < k; ++round) {
    int best_j = -1;
    double best_val = -1.0;
    for (int j : eligible) {
      if (used[j]) continue;
      chosen.push_back(j);
      const double val = sigma_min_cols(a, chosen);
      chosen.pop_back();
      if (val > best_val + 1e-15) {
        best_val = val;
        best_j = j;
      }
    }
    if (best_j < 0) break;
    used[best_j] = true;
    chosen.push_back(best_j);
  }
  return chosen;
}

// Exhaustive max-sigma_min over all k-subsets of the eligible columns.
std::vector<int> exhaustive_best(const Matrix& a, const std::vector<int>& eligible,
                                 int k) {
  const int n = static_cast<int>(eligible.size());
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<int> best;
  double best_val = -1.0;
  while (true) {
    std::vector<int> cand(k);
    for (int i = 0; i < k; ++i) cand[i] = eligible[idx[i]];
    const double val = sigma_min_cols(a, cand);
    if (val > best_val + 1e-15) {
      best_val = val;
      best = cand;
    }
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

constexpr int kExhaustiveCap = 12;

std::vector<int> select_with_target(const Matrix& a, const std::vector<int>& eligible,
                                    int k, double target_sq, const char* what) {
  const double slack = target_sq * (1.0 - 1e-9) - 1e-12;
  std::vector<int> s = greedy_order(a, eligible, k);
  double achieved = sigma_min_cols(a, s);
  if (static_cast<int>(s.size()) == k && achieved * achieved >= slack) {
    std::sort(s.begin(), s.end());
    return s;
  }
  if (static_cast<int>(eligible.size()) <= kExhaustiveCap) {
    std::vector<int> e = exhaustive_best(a, eligible, k);
    const double v = sigma_min_cols(a, e);
    if (static_cast<int>(e.size()) == k && v * v >= slack) {
      std::sort(e.begin(), e.end());
      return e;
    }
    achieved = std::max(achieved, v);
  }
  throw ContractError(std::string(what) + ": sigma_min contract unmet, achieved " +
                          std::to_string(achieved) + " target " +
                          std::to_string(std::sqrt(std::max(0.0, target_sq))),
                      achieved);
}

}  // namespace

DiagonalWeights RationalizedWeights::implied() const {
  Vector w(static_cast<int>(numerators.size()));
  for (int j = 0; j < w.size(); ++j)
    w(j) = static_cast<double>(numerators[j]) / static_cast<double>(denominator);
  return DiagonalWeights{w};
}

std::vector<int> rip_select(const Matrix& b, int k, double eps) {
  require_finite(b, "rip_select input");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidParameter("rip_select: eps must be in (0,1)");
  const double hs2 = b.squaredNorm();
  const double sp = spectral_norm(b);
  const double bound = eps * eps * hs2 / (sp * sp);
  if (k < 1 || k > bound + 1e-9) {
    throw PreconditionError("rip_select: k=" + std::to_string(k) +
                            " outside (0, eps^2 * stable rank = " +
                            std::to_string(bound) + "]");
  }
  const double target_sq = (1.0 - eps) * (1.0 - eps) * hs2 / b.cols();
  std::vector<int> eligible(b.cols());
  for (int j = 0; j < b.cols(); ++j) eligible[j] = j;
  return select_with_target(b, eligible, k, target_sq, "rip_select");
}

RationalizedWeights rationalize(const DiagonalWeights& q, long long n_cap) {
  const int dim = q.dim();
  if (n_cap < dim) throw InvalidParameter("rationalize: N_cap smaller than dimension");
  if (std::abs(q.sum() - 1.0) > 1e-9) {
    throw InvalidParameter("rationalize: weights must sum to 1");
  }
  RationalizedWeights out;
  out.denominator = n_cap;
  out.numerators.resize(dim);
  long long total = 0;
  for (int j = 0; j < dim; ++j) {
    long long v = std::llround(n_cap * std::max(q.w(j), 0.0));
    out.numerators[j] = v;
    total += v;
  }
  // Largest-remainder repair so the numerators sum exactly to N.
  while (total != n_cap) {
    const int dir = total < n_cap ? 1 : -1;
    int pick = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < dim; ++j) {
      const double rem = dir * (n_cap * q.w(j) - out.numerators[j]);
      if (dir < 0 && out.numerators[j] == 0) continue;
      if (rem > best) {
        best = rem;
        pick = j;
      }
    }
    out.numerators[pick] += dir;
    total += dir;
  }
  return out;
}

std::vector<int> weighted_rip_select(const Matrix& a, const DiagonalWeights& q,
                                     int k, double eps, long long n_cap) {
  require_finite(a, "weighted_rip_select input");
  if (q.dim() != a.cols()) throw DimError("weighted_rip_select: weight dimension");
  RationalizedWeights rw = rationalize(q, n_cap);
  DiagonalWeights qr = rw.implied();

  Matrix b = a * qr.sqrt().asDiagonal();
  const double hs2 = b.squaredNorm();
  const double sp = spectral_norm(b);
  const double bound = eps * eps * hs2 / (sp * sp);
  if (k < 1) throw PreconditionError("weighted_rip_select: k must be positive");
  if (k > bound + 1e-9) {
    // Distinguish a genuinely bad k from one destroyed by rounding.
    Matrix b0 = a * q.sqrt().asDiagonal();
    const double bound0 = eps * eps * b0.squaredNorm() / std::pow(spectral_norm(b0), 2);
    if (k <= bound0 + 1e-9) {
      throw RationalizationError(
          "weighted_rip_select: N_cap rounding destroyed the stable-rank "
          "precondition; raise N_cap");
    }
    throw PreconditionError("weighted_rip_select: k=" + std::to_string(k) +
                            " exceeds eps^2 * weighted stable rank " +
                            std::to_string(bound));
  }

  std::vector<int> eligible;
  for (int j = 0; j < a.cols(); ++j)
    if (rw.numerators[j] >= 1) eligible.push_back(j);
  if (k > static_cast<int>(eligible.size())) {
    throw PreconditionError("weighted_rip_select: fewer weighted columns than k");
  }
  const double target_sq = (1.0 - eps) * (1.0 - eps) * hs2;
  return select_with_target(a, eligible, k, target_sq, "weighted_rip_select");
}

ExtractionTrace extract_spectral_subset(const Matrix& a, const DiagonalWeights& q) {
  require_finite(a, "extract_spectral_subset input");
  if (q.dim() != a.cols()) throw DimError("extract_spectral_subset: weight dimension");
  if (std::abs(q.sum() - 1.0) > 1e-9) {
    throw InvalidParameter("extract_spectral_subset: tr(Q) must be 1");
  }
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (a.cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidMatrix("extract_spectral_subset: zero matrix");
  }

  ExtractionTrace trace;
  trace.epsilon = 0.5;

  Matrix b = a * q.sqrt().asDiagonal();
  trace.nuclear_value = nuclear_norm(b);

  if (m == 1) {
    // Bucket machinery needs log2 m >= 1; a single row reduces to the
    // largest-entry column.
    int best = 0;
    for (int j = 1; j < n; ++j)
      if (std::abs(a(0, j)) > std::abs(a(0, best))) best = j;
    trace.selected = {best};
    trace.selected_sigma_min = std::abs(a(0, best));
    return trace;
  }

  const double s = trace.nuclear_value;
  const double log2m = std::log2(static_cast<double>(m));
  trace.tau = 1.0 / (2.0 * log2m);
  const int k_top = static_cast<int>(std::ceil(log2m));

  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU);
  const Vector sv = svd.singularValues() / s;

  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= 1.0 / (2.0 * m)) {
      trace.tail.push_back(i);
      continue;
    }
    int k = static_cast<int>(std::floor(-std::log2(sv(i))));
    k = std::clamp(k, 0, k_top);
    trace.buckets[k].push_back(i);
  }

  double best_mass = -1.0;
  for (const auto& [k, idx] : trace.buckets) {
    double mass = 0.0;
    for (int i : idx) mass += sv(i);
    if (mass > best_mass + 1e-15) {  // ties resolve to the smallest k
      best_mass = mass;
      trace.chosen_k = k;
    }
  }
  const std::vector<int>& bucket = trace.buckets.at(trace.chosen_k);
  trace.bucket_rank = static_cast<int>(bucket.size());
  trace.projector_basis = Matrix(m, trace.bucket_rank);
  for (int c = 0; c < trace.bucket_rank; ++c)
    trace.projector_basis.col(c) = svd.matrixU().col(bucket[c]);

  // Projected, normalized matrix the weighted RIP step runs on.
  Matrix proj = trace.projector_basis.transpose() * (a / s);

  long long n_cap = 1LL << 16;
  std::vector<int> proof_subset;
  for (int attempt = 0; attempt < 2; ++attempt) {
    RationalizedWeights rw = rationalize(q, n_cap);
    Matrix pb = proj * rw.implied().sqrt().asDiagonal();
    const double hs2 = pb.squaredNorm();
    const double sp = spectral_norm(pb);
    int eligible_count = 0;
    for (long long num : rw.numerators) eligible_count += num >= 1;
    int k = static_cast<int>(std::floor(0.25 * hs2 / (sp * sp) + 1e-12));
    k = std::min(k, std::max(1, eligible_count));
    if (k < 1) {
      // Nearly rank-one bucket: the stable-rank precondition admits no k,
      // but then a single strong column already carries the mass.
      int best = 0;
      for (int j = 1; j < n; ++j)
        if (a.col(j).norm() > a.col(best).norm() + 1e-15) best = j;
      proof_subset = {best};
      break;
    }
    try {
      proof_subset = weighted_rip_select(proj, q, k, 0.5, n_cap);
      break;
    } catch (const RationalizationError&) {
      n_cap = 1LL << 20;  // retry once with a finer denominator
      if (attempt == 1) throw;
    }
  }

  auto certified = [&a](const std::vector<int>& sub) {
    const double sig = sigma_min_cols(a, sub);
    return static_cast<double>(sub.size()) * sig * sig;
  };

  std::vector<int> best_subset = proof_subset;
  double best_value = certified(proof_subset);

  // Improvement pass: the proof constants are pessimistic, and any subset
  // certifies; evaluate greedy prefixes up to the bucket rank and keep the max.
  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j;
  const int prefix_limit = std::min(n, std::max(trace.bucket_rank, 1));
  std::vector<int> order = greedy_order(a, all, prefix_limit);
  std::vector<int> prefix;
  for (int j : order) {
    prefix.push_back(j);
    const double val = certified(prefix);
    if (val > best_value * (1.0 + 1e-12)) {
      best_value = val;
      best_subset = prefix;
      std::sort(best_subset.begin(), best_subset.end());
    }
  }

  const double required = (1.0 / 256.0) * s * s / (log2m * log2m);
  if (best_value < required * (1.0 - 1e-9)) {
    throw ContractError("extract_spectral_subset: certified value " +
                            std::to_string(best_value) + " below " +
                            std::to_string(required),
                        std::sqrt(best_value / std::max<std::size_t>(1, best_subset.size())));
  }

  trace.selected = best_subset;
  trace.selected_sigma_min = sigma_min_cols(a, best_subset);
  return trace;
}

}  // namespace herdisc
