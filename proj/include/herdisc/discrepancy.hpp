#pragma once

#include <cstdint>
#include <vector>

#include "herdisc/ellipsoid.hpp"
#include "herdisc/linalg.hpp"

namespace herdisc {

struct Coloring {
  std::vector<int> signs;  // entries +-1
};

// Feasible point of the vector-discrepancy SDP: Gram matrix X = U^T U with
// unit diagonal, value = max_i sqrt(e_i^T A X A^T e_i).
struct GramAssignment {
  Matrix gram;
  Matrix factor;
  double value = 0.0;
  bool converged = true;
};

// Column subset plus row weights certifying a spectral lower bound
// sqrt(|S|) * sigma_min(P^{1/2} A|_S).
struct SubsetWitness {
  std::vector<int> subset;
  DiagonalWeights row_weights;
  double value = 0.0;
};

struct DiscResult {
  double value = 0.0;
  Coloring coloring;
};

struct HerdiscResult {
  double value = 0.0;
  std::vector<int> subset;
};

struct SdpOptions {
  double tol = 1e-4;
  int restarts = 5;
  int iters_per_temp = 250;
  int polish_sweeps = 2000;
  std::uint64_t seed = 0;
};

// Exact min over all 2^n colorings of ||Ax||_inf (half pruned by the
// x <-> -x symmetry; branch-and-bound on partial row sums). First argmin
// in lexicographic order (+1 before -1, x_1 fixed to +1).
DiscResult disc_exact(const Matrix& a, int max_n = 20);

// Exact max of disc over all nonempty column subsets, with argmax subset
// (first achiever in increasing bitmask order).
HerdiscResult herdisc_exact(const Matrix& a, int max_n = 14);

// Heuristic solve of min max_i e_i^T A X A^T e_i over PSD X with unit
// diagonal, via a full-rank factored formulation with soft-max smoothing
// and seeded restarts.
GramAssignment vecdisc_solve(const Matrix& a, const SdpOptions& opts = {});

// Dual certificate for vecdisc(A) >= D: true iff tr(Qd) >= D^2 - tol and
// A^T P A - Qd >= -tol * I.
bool vecdisc_dual_check(const Matrix& a, const Matrix& p, const DiagonalWeights& qd,
                        double d, double tol = 1e-7);

// sqrt(|S|) * sigma_min(P^{1/2} A|_S); lower-bounds vecdisc(A|_S).
double spectral_lb_value(const Matrix& a, const std::vector<int>& subset,
                         const DiagonalWeights& p);

// Exact max over all k x k submatrices of |det|^{1/k}.
double det_lb_exact(const Matrix& a, int max_k = 7);

struct KomlosResult {
  GramAssignment gram;
  double spectral_value = 0.0;  // ||A X A^T||_2
};

// For ||A||_{1->2} <= 1: minimize ||A X A^T||_2 over unit-diagonal PSD X.
// The optimum is guaranteed to be at most 1.
KomlosResult komlos_spectral_solve(const Matrix& a, const SdpOptions& opts = {});

struct BanaszczykReport {
  double rho = 0.0;        // min_x max_i |(Ax)_i| / sqrt((F F^T)_{ii})
  double reference = 0.0;  // sqrt(2 ln 2m)
};

BanaszczykReport banaszczyk_diagnostic(const Matrix& a, const Ellipsoid& e,
                                       int max_n = 20);

}  // namespace herdisc
