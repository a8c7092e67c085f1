#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "herdisc/discrepancy.hpp"
#include "herdisc/ellipsoid.hpp"
#include "herdisc/restricted_invertibility.hpp"

namespace herdisc {

struct AlgorithmOptions {
  double tol = 1e-4;
  int max_iters = 50000;
  double delta = 0.0;  // 0 means auto: 1e-7 * (1 + max |A_ij|)
  int disc_oracle_max_n = 20;
  int herdisc_oracle_max_n = 14;
  int sdp_oracle_max_n = 12;
  std::uint64_t seed = 0;
  long long n_cap = 1LL << 16;
  bool with_oracles = true;
};

struct OracleValues {
  std::optional<double> disc;
  std::optional<double> herdisc;
  std::optional<double> vecdisc;
  std::optional<double> subset_vecdisc;  // vecdisc(A|_S) for the witness subset
};

// Certified two-sided bounds: alpha <= hvecdisc(A) <= mu, with the dual
// reweighting, witness subset, and extraction record needed to recheck
// every number from scratch.
struct BoundsReport {
  double mu = 0.0;
  double alpha = 0.0;
  Ellipsoid ellipsoid;
  DualWitness dual_witness;
  SubsetWitness subset_witness;
  ExtractionTrace extraction;
  double relative_gap = 0.0;
  double guarantee_ratio_vec = 0.0;   // mu / alpha
  double guarantee_ratio_disc = 0.0;  // sqrt(2 ln 2m) * mu / alpha
  OracleValues oracle_values;
  SolveDiagnostics diagnostics;
  double delta = 0.0;  // perturbation actually applied
};

// Full pipeline: rank repair, min-width ellipsoid, dyadic extraction on
// the reweighted matrix, then the best certified subset value as alpha.
BoundsReport approximate_herdisc(const Matrix& a, const AlgorithmOptions& opts = {});

struct CheckResult {
  std::string name;
  bool passed = false;
  double magnitude = 0.0;  // signed violation; <= 0 when the check holds
};

struct Verification {
  std::vector<CheckResult> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Recompute every certificate in the report against A: containment of all
// columns, the width mu, the dual witness value, alpha from (S, P), and
// the chain alpha <= mu, dual <= mu.
Verification verify_report(const Matrix& a, const BoundsReport& r);

}  // namespace herdisc
