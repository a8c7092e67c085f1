#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "herdisc/restricted_invertibility.hpp"
#include "test_support.hpp"

using namespace herdisc;
using test_support::hadamard;

namespace {

Matrix submatrix(const Matrix& a, const std::vector<int>& cols) {
  Matrix s(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) s.col(j) = a.col(cols[j]);
  return s;
}

double sigma_min(const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(b);
  const auto& sv = svd.singularValues();
  if (sv.size() < b.cols()) return 0.0;
  return sv(sv.size() - 1);
}

int admissible_k(const Matrix& b, double eps) {
  const double bound = eps * eps * b.squaredNorm() / std::pow(spectral_norm(b), 2);
  return static_cast<int>(std::floor(bound + 1e-9));
}

}  // namespace

TEST_CASE("rip_select basics on identity-like inputs") {
  Matrix i4 = Matrix::Identity(4, 4);
  std::vector<int> s = rip_select(i4, 1, 0.5);
  REQUIRE(s.size() == 1);
  CHECK(std::pow(sigma_min(submatrix(i4, s)), 2) >= 0.25 * 4.0 / 4.0);

  Matrix half = 0.5 * i4;
  std::vector<int> sh = rip_select(half, 1, 0.5);
  CHECK(std::pow(sigma_min(submatrix(half, sh)), 2) >=
        doctest::Approx(0.25 * 0.25).epsilon(1e-9));
}

TEST_CASE("rip_select honors its contract at the largest admissible k") {
  // Near-orthonormal columns keep the stable rank high enough for k >= 2.
  Matrix g = test_support::random_gaussian(16, 12, 5);
  Matrix b = Eigen::HouseholderQR<Matrix>(g).householderQ() *
             Matrix::Identity(16, 12);
  for (int j = 0; j < 12; ++j) b.col(j) *= 1.0 + 0.02 * j;
  const double eps = 0.5;
  const int k = admissible_k(b, eps);
  REQUIRE(k >= 2);
  std::vector<int> s = rip_select(b, k, eps);
  REQUIRE(static_cast<int>(s.size()) == k);
  CHECK(std::pow(sigma_min(submatrix(b, s)), 2) >=
        (1.0 - eps) * (1.0 - eps) * b.squaredNorm() / b.cols() * (1.0 - 1e-9));
}

TEST_CASE("rip_select rejects out-of-range parameters") {
  Matrix i4 = Matrix::Identity(4, 4);
  CHECK_THROWS_AS(rip_select(i4, 3, 0.5), PreconditionError);  // bound is 1
  CHECK_THROWS_AS(rip_select(i4, 0, 0.5), PreconditionError);
  CHECK_THROWS_AS(rip_select(i4, 1, 0.0), InvalidParameter);
  CHECK_THROWS_AS(rip_select(i4, 1, 1.0), InvalidParameter);
}

TEST_CASE("rationalize on exact and rounded weights") {
  RationalizedWeights r1 = rationalize(DiagonalWeights::uniform(2), 4);
  CHECK(r1.numerators == std::vector<long long>{2, 2});

  Vector w2(2);
  w2 << 1.0 / 3.0, 2.0 / 3.0;
  RationalizedWeights r2 = rationalize(DiagonalWeights{w2}, 3);
  CHECK(r2.numerators == std::vector<long long>{1, 2});

  Vector w3(3);
  w3 << 0.3, 0.3, 0.4;
  RationalizedWeights r3 = rationalize(DiagonalWeights{w3}, 10);
  CHECK(r3.numerators == std::vector<long long>{3, 3, 4});

  CHECK_THROWS_AS(rationalize(DiagonalWeights::uniform(5), 3), InvalidParameter);
  Vector bad(2);
  bad << 0.5, 0.3;
  CHECK_THROWS_AS(rationalize(DiagonalWeights{bad}, 100), InvalidParameter);
}

TEST_CASE("rationalize error bound and exact sum over random weights") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    test_support::Rng rng(seed);
    const int dim = 2 + rng.uniform_int(0, 10);
    Vector w(dim);
    for (int j = 0; j < dim; ++j) w(j) = rng.uniform() + 1e-3;
    w /= w.sum();
    const long long n_cap = 1 << 12;
    RationalizedWeights r = rationalize(DiagonalWeights{w}, n_cap);
    long long total = 0;
    for (int j = 0; j < dim; ++j) {
      total += r.numerators[j];
      CHECK(std::abs(r.implied().w(j) - w(j)) <= 2.0 / n_cap);
    }
    CHECK(total == n_cap);
  }
}

TEST_CASE("weighted_rip_select on identity and Hadamard") {
  Matrix i4 = Matrix::Identity(4, 4);
  std::vector<int> s = weighted_rip_select(i4, DiagonalWeights::uniform(4), 1, 0.5);
  REQUIRE(s.size() == 1);
  CHECK(std::pow(sigma_min(submatrix(i4, s)), 2) >= 0.25 * (1.0 - 1e-9));

  Matrix i8 = Matrix::Identity(8, 8);
  std::vector<int> s8 = weighted_rip_select(i8, DiagonalWeights::uniform(8), 2, 0.5);
  REQUIRE(s8.size() == 2);
  CHECK(sigma_min(submatrix(i8, s8)) == doctest::Approx(1.0).epsilon(1e-12));

  Matrix h4 = hadamard(4);
  Matrix weighted = h4 * DiagonalWeights::uniform(4).sqrt().asDiagonal();
  const int k = admissible_k(weighted, 0.5);
  REQUIRE(k >= 1);
  std::vector<int> sh = weighted_rip_select(h4, DiagonalWeights::uniform(4), k, 0.5);
  CHECK(std::pow(sigma_min(submatrix(h4, sh)), 2) >= 1.0 * (1.0 - 1e-9));
}

TEST_CASE("weighted_rip_select contract over seeded random instances") {
  int tested = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    test_support::Rng rng(seed * 31 + 1);
    const int n = 8 + rng.uniform_int(0, 8);
    const int m = n + rng.uniform_int(0, 4);
    // Orthonormal columns: the weighted stable rank is 1 / max weight,
    // large enough that the admissible k is at least 1.
    Matrix g = test_support::random_gaussian(m, n, seed + 1000);
    Matrix a = Eigen::HouseholderQR<Matrix>(g).householderQ() *
               Matrix::Identity(m, n);
    Vector w(n);
    for (int j = 0; j < n; ++j) w(j) = rng.uniform() + 0.05;
    w /= w.sum();
    DiagonalWeights q{w};
    Matrix b = a * q.sqrt().asDiagonal();
    const int k = admissible_k(b, 0.5);
    if (k < 1) continue;
    ++tested;
    std::vector<int> s = weighted_rip_select(a, q, k, 0.5);
    // No duplicates, contract on the rationalized weights.
    std::vector<int> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    RationalizedWeights rw = rationalize(q, 1 << 16);
    Matrix br = a * rw.implied().sqrt().asDiagonal();
    CHECK(std::pow(sigma_min(submatrix(a, s)), 2) >=
          0.25 * br.squaredNorm() * (1.0 - 1e-9));
  }
  CHECK(tested >= 50);
}

TEST_CASE("extraction hand-walk on Hadamard and identity") {
  Matrix h4 = hadamard(4);
  ExtractionTrace t = extract_spectral_subset(h4, DiagonalWeights::uniform(4));
  CHECK(t.nuclear_value == doctest::Approx(4.0).epsilon(1e-9));
  // All normalized sigma equal 1/4 exactly, the boundary between buckets
  // 1 and 2; roundoff may split them, but nothing lands anywhere else.
  CHECK((t.chosen_k == 1 || t.chosen_k == 2));
  CHECK(t.bucket_rank >= 3);
  CHECK(t.tail.empty());
  const double certified =
      t.selected.size() * t.selected_sigma_min * t.selected_sigma_min;
  CHECK(certified >= 16.0 / 256.0 / 4.0 * (1.0 - 1e-9));

  ExtractionTrace t2 = extract_spectral_subset(Matrix::Identity(2, 2),
                                               DiagonalWeights::uniform(2));
  CHECK(t2.chosen_k == 1);  // normalized sigma = 1/2 each
  const double c2 = t2.selected.size() * t2.selected_sigma_min * t2.selected_sigma_min;
  CHECK(c2 >= (1.0 / 256.0) * t2.nuclear_value * t2.nuclear_value * (1.0 - 1e-9));
}

TEST_CASE("extraction degenerate single-row branch") {
  Matrix row = Matrix::Ones(1, 5);
  ExtractionTrace t = extract_spectral_subset(row, DiagonalWeights::uniform(5));
  REQUIRE(t.selected.size() == 1);
  CHECK(t.selected_sigma_min == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("extraction contract holds across random instances") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    test_support::Rng rng(seed * 7 + 3);
    const int m = 2 + rng.uniform_int(0, 10);
    const int n = 2 + rng.uniform_int(0, 10);
    Matrix a = test_support::random_gaussian(m, n, seed + 500);
    Vector w(n);
    for (int j = 0; j < n; ++j) w(j) = rng.uniform() + 0.02;
    w /= w.sum();
    ExtractionTrace t = extract_spectral_subset(a, DiagonalWeights{w});
    const double certified =
        t.selected.size() * t.selected_sigma_min * t.selected_sigma_min;
    const double log2m = std::log2(static_cast<double>(m));
    CHECK(certified >= (1.0 / 256.0) * t.nuclear_value * t.nuclear_value /
                           (log2m * log2m) * (1.0 - 1e-9));
  }
}

TEST_CASE("extraction is homogeneous and deterministic") {
  Matrix a = test_support::random_gaussian(5, 6, 77);
  DiagonalWeights q = DiagonalWeights::uniform(6);
  ExtractionTrace t1 = extract_spectral_subset(a, q);
  ExtractionTrace t2 = extract_spectral_subset(a, q);
  CHECK(t1.selected == t2.selected);

  ExtractionTrace ts = extract_spectral_subset(3.0 * a, q);
  CHECK(ts.selected == t1.selected);
  const double v1 = t1.selected.size() * t1.selected_sigma_min * t1.selected_sigma_min;
  const double vs = ts.selected.size() * ts.selected_sigma_min * ts.selected_sigma_min;
  CHECK(vs == doctest::Approx(9.0 * v1).epsilon(1e-9));
}
