#pragma once

#include <cstdint>

#include "herdisc/linalg.hpp"

namespace herdisc {

// Symmetric ellipsoid E = {x : x^T X x <= 1} = F B_2^m with F = X^{-1/2}.
struct Ellipsoid {
  Matrix shape;       // X, symmetric positive definite
  Matrix factor;      // F = X^{-1/2}
  double linf_width;  // max_i sqrt(e_i^T F F^T e_i)
};

// Build the factor and width from a positive definite shape matrix.
Ellipsoid make_ellipsoid(const Matrix& shape);

// Trace-1 diagonal reweightings (P rows, Q columns) whose nuclear-norm
// value lower-bounds the minimal l_inf width.
struct DualWitness {
  DiagonalWeights row_weights;  // P, dim m, sum 1
  DiagonalWeights col_weights;  // Q, dim n, sum 1
  double value;                 // ||P^{1/2} A Q^{1/2}||_S1
};

struct SolveDiagnostics {
  int iterations = 0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double relative_gap = 0.0;
  bool converged = false;
  // Largest dual-minus-primal excess seen at any iterate; positive values
  // beyond roundoff would mean a broken bound.
  double max_weak_duality_violation = 0.0;
};

struct EllipsoidSolveOptions {
  double tol = 1e-4;
  int max_iters = 50000;
  double eps_floor = 1e-10;  // divided by dim before flooring P, R entries
};

// ||P^{1/2} A Q^{1/2}||_S1 for trace-1 diagonal weights.
double dual_value(const Matrix& a, const DiagonalWeights& p,
                  const DiagonalWeights& q);

// Solve the stationarity condition X^{-1} P X^{-1} = A R A^T for the unique
// X, then rescale so max_j a_j^T X a_j = 1 exactly. Scaling X down only
// grows E, so the returned ellipsoid always contains every column.
Ellipsoid recover_primal(const Matrix& a, const DiagonalWeights& p,
                         const DiagonalWeights& r);

struct MinLinfResult {
  Ellipsoid ellipsoid;
  DualWitness witness;
  SolveDiagnostics diagnostics;
};

// Minimize ||E||_inf over ellipsoids containing the columns of A. The
// concave dual max ||P^{1/2} A Q^{1/2}||_S1 over trace-1 diagonal P, Q is
// driven to its KKT fixed point by a multiplicative (flip-flop) update;
// each iterate also yields a feasible primal ellipsoid, so the reported
// gap is a certificate. Applies full_rank_reduce first when A is
// row-rank deficient.
MinLinfResult solve_min_linf_ellipsoid(const Matrix& a,
                                       const EllipsoidSolveOptions& opts = {});

struct MinTraceResult {
  Ellipsoid ellipsoid;
  DiagonalWeights r;  // unnormalized dual weights at the best iterate
  SolveDiagnostics diagnostics;  // primal/dual on the ||F||_HS^2 scale
};

// Minimize tr(X^{-1}) = ||F||_HS^2 over ellipsoids containing the columns
// of V; same fixed-point scheme on the dual max ||V Q^{1/2}||_S1^2.
MinTraceResult solve_min_trace_ellipsoid(const Matrix& v,
                                         const EllipsoidSolveOptions& opts = {});

struct GaussianWidthEstimate {
  double mean;
  double std_error;
  int samples;
};

// Monte Carlo estimate of E ||F^T g||_2 over standard Gaussian g.
GaussianWidthEstimate gaussian_width_mc(const Ellipsoid& e, int samples,
                                        std::uint64_t seed);

}  // namespace herdisc
