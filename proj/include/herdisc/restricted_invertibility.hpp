#pragma once

#include <map>
#include <vector>

#include "herdisc/linalg.hpp"

namespace herdisc {

// Integer approximation of trace-1 diagonal weights with common
// denominator N: Q_jj ~= numerators[j] / N.
struct RationalizedWeights {
  long long denominator = 0;
  std::vector<long long> numerators;

  DiagonalWeights implied() const;
};

// Record of the dyadic-bucket extraction: which singular values went
// where, which bucket was chosen, and what subset came out.
struct ExtractionTrace {
  std::map<int, std::vector<int>> buckets;  // k -> indices with sigma in (2^{-k-1}, 2^{-k}]
  std::vector<int> tail;                    // indices with sigma <= 1/(2m)
  int chosen_k = -1;
  double tau = 0.0;
  int bucket_rank = 0;
  Matrix projector_basis;  // orthonormal columns spanning the chosen subspace
  double epsilon = 0.0;
  std::vector<int> selected;
  double selected_sigma_min = 0.0;  // sigma_min(A|_selected)
  double nuclear_value = 0.0;       // ||A Q^{1/2}||_S1 on the input scale
};

// Constructive restricted invertibility: pick k columns of B with
// sigma_min(B|_S)^2 >= (1-eps)^2 ||B||_HS^2 / n. The contract is verified
// by recomputation before returning; an unmet contract throws
// ContractError rather than returning a silently weak subset.
std::vector<int> rip_select(const Matrix& b, int k, double eps);

// Round trace-1 weights to numerators over denominator N_cap, repaired to
// sum exactly to N_cap.
RationalizedWeights rationalize(const DiagonalWeights& q, long long n_cap);

// Weighted variant: sigma_min(A|_S)^2 >= (1-eps)^2 ||A Qr^{1/2}||_HS^2
// where Qr is the rationalized weight vector. Selection is over columns
// with positive rationalized weight; duplicates never occur.
std::vector<int> weighted_rip_select(const Matrix& a, const DiagonalWeights& q,
                                     int k, double eps,
                                     long long n_cap = 1LL << 16);

// Dyadic-bucket extraction: returns a subset S with
// |S| sigma_min(A|_S)^2 >= (1/256) ||A Q^{1/2}||_S1^2 / (log2 m)^2,
// plus an improvement pass over greedy prefixes of the chosen bucket.
ExtractionTrace extract_spectral_subset(const Matrix& a, const DiagonalWeights& q);

}  // namespace herdisc
