#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "herdisc/linalg.hpp"
#include "test_support.hpp"

using namespace herdisc;
using test_support::hadamard;

namespace {

Matrix reconstruct(const SpectralDecomposition& d) {
  return d.left_vectors * d.singular_values.asDiagonal() * d.right_vectors.transpose();
}

}  // namespace

TEST_CASE("spectrum on diagonal and Hadamard matrices") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 4.0;
  auto sd = spectrum(d);
  REQUIRE(sd.singular_values.size() == 2);
  CHECK(sd.singular_values(0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(sd.singular_values(1) == doctest::Approx(3.0).epsilon(1e-12));

  auto sh = spectrum(hadamard(2));
  CHECK(sh.singular_values(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sh.singular_values(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("spectrum reconstructs and is orthonormal") {
  Matrix a = test_support::random_gaussian(5, 3, 11);
  auto sd = spectrum(a);
  REQUIRE(sd.singular_values.size() == 3);
  for (int i = 1; i < sd.singular_values.size(); ++i)
    CHECK(sd.singular_values(i) <= sd.singular_values(i - 1) + 1e-14);
  CHECK((reconstruct(sd) - a).norm() <= 1e-8 * a.norm());
  CHECK((sd.left_vectors.transpose() * sd.left_vectors - Matrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-10);
  CHECK((sd.right_vectors.transpose() * sd.right_vectors - Matrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-10);
}

TEST_CASE("spectrum invariant under permutations and sign flips") {
  Matrix a = test_support::random_gaussian(4, 5, 3);
  Matrix b = a;
  b.row(0).swap(b.row(2));
  b.col(1).swap(b.col(4));
  b.row(3) *= -1.0;
  b.col(0) *= -1.0;
  auto sa = spectrum(a).singular_values;
  auto sb = spectrum(b).singular_values;
  CHECK((sa - sb).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("spectrum rejects non-finite input") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = std::nan("");
  CHECK(!all_finite(a));
  CHECK_THROWS_AS(spectrum(a), InvalidMatrix);
}

TEST_CASE("nuclear norm values and norm ordering") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 4.0;
  CHECK(nuclear_norm(d) == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(nuclear_norm(hadamard(4)) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(nuclear_norm(Matrix::Zero(3, 5)) == 0.0);

  for (int t = 0; t < 10; ++t) {
    Matrix a = test_support::random_gaussian(4, 6, 100 + t);
    const double nn = nuclear_norm(a);
    CHECK(nn >= spectral_norm(a) - 1e-10);
    CHECK(nn >= hs_norm(a) - 1e-10);
    CHECK(nuclear_norm(-2.5 * a) == doctest::Approx(2.5 * nn).epsilon(1e-10));
  }
}

TEST_CASE("psd_sqrt on diagonal, identity, and a hand-computed 2x2") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  Matrix s = psd_sqrt(d);
  CHECK(s(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s(1, 1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(s(0, 1)) <= 1e-12);

  CHECK((psd_sqrt(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() <= 1e-12);

  // [[2,1],[1,2]] has eigenpairs (3, (1,1)/sqrt2) and (1, (1,-1)/sqrt2).
  Matrix m(2, 2);
  m << 2, 1, 1, 2;
  Matrix v(2, 2);
  v << 1, 1, 1, -1;
  v /= std::sqrt(2.0);
  Vector lam(2);
  lam << std::sqrt(3.0), 1.0;
  Matrix expected = v * lam.asDiagonal() * v.transpose();
  CHECK((psd_sqrt(m) - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("psd_sqrt squares back for random PSD up to 20x20") {
  for (int t = 0; t < 8; ++t) {
    const int n = 2 + (t * 3) % 19;
    Matrix g = test_support::random_gaussian(n, n, 200 + t);
    Matrix m = g * g.transpose();
    Matrix s = psd_sqrt(m);
    CHECK((s * s - m).norm() <= 1e-8 * (1.0 + m.norm()));
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + s.norm()));
  }
}

TEST_CASE("psd_sqrt clamps tiny negatives but rejects real ones") {
  Matrix tiny = Matrix::Identity(2, 2);
  tiny(1, 1) = -1e-9;  // within -1e-6 * ||M||_2
  CHECK_NOTHROW(psd_sqrt(tiny));
  Matrix bad(2, 2);
  bad << 1, 0, 0, -0.5;
  CHECK_THROWS_AS(psd_sqrt(bad), NotPsd);
}

TEST_CASE("simplex projection on known points") {
  Vector v(2);
  v << 0.5, 0.5;
  CHECK((simplex_project(v).w - v).cwiseAbs().maxCoeff() <= 1e-14);
  v << 2.0, 0.0;
  Vector expected(2);
  expected << 1.0, 0.0;
  CHECK((simplex_project(v).w - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("simplex projection matches brute-force grid in dim 3") {
  Vector v(3);
  v << 0.8, 0.4, 0.1;
  DiagonalWeights p = simplex_project(v);
  CHECK(p.is_normalized(1e-12));
  CHECK(p.w.minCoeff() >= 0.0);
  // Independent oracle: nearest simplex grid point at resolution 1/500.
  double best = 1e300;
  const int g = 500;
  for (int i = 0; i <= g; ++i) {
    for (int j = 0; i + j <= g; ++j) {
      Vector w(3);
      w << static_cast<double>(i) / g, static_cast<double>(j) / g,
          static_cast<double>(g - i - j) / g;
      best = std::min(best, (w - v).norm());
    }
  }
  CHECK((p.w - v).norm() <= best + 1e-9);
  // Idempotence.
  CHECK((simplex_project(p.w).w - p.w).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("full_rank_reduce leaves full-rank input alone") {
  Matrix i3 = Matrix::Identity(3, 3);
  CHECK((full_rank_reduce(i3, 1e-6) - i3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full_rank_reduce repairs degenerate input") {
  Matrix z = Matrix::Zero(1, 1);
  Matrix rz = full_rank_reduce(z, 1e-6);
  CHECK(rz(0, 0) != 0.0);
  CHECK(std::abs(rz(0, 0)) <= 1e-6);

  Matrix ones = Matrix::Ones(2, 2);
  Matrix r = full_rank_reduce(ones, 1e-6);
  CHECK((r - ones).cwiseAbs().maxCoeff() <= 1e-6);
  auto sv = spectrum(r).singular_values;
  CHECK(sv(sv.size() - 1) > 0.0);

  // n < m: appends near-zero columns to reach full row rank.
  Matrix tall(3, 1);
  tall << 1, 2, 3;
  Matrix rt = full_rank_reduce(tall, 1e-6);
  CHECK(rt.rows() == 3);
  CHECK(rt.cols() >= 3);
  CHECK(spectrum(rt).singular_values(2) > 0.0);

  CHECK_THROWS_AS(full_rank_reduce(ones, 0.0), InvalidParameter);
}

TEST_CASE("full_rank_reduce is deterministic") {
  Matrix ones = Matrix::Ones(3, 3);
  Matrix a = full_rank_reduce(ones, 1e-7);
  Matrix b = full_rank_reduce(ones, 1e-7);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}
