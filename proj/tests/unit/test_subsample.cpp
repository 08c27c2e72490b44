#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "avgeig/errors.hpp"
#include "avgeig/subsample.hpp"

using namespace avgeig;

namespace {

DenseSymmetric fixture(Index n, std::uint64_t seed) {
  return DenseSymmetric(oracle::random_symmetric(n, seed));
}

bool same_csr(const SparseCSR& a, const SparseCSR& b) {
  return std::equal(a.row_ptr().begin(), a.row_ptr().end(), b.row_ptr().begin(),
                    b.row_ptr().end()) &&
         std::equal(a.col_idx().begin(), a.col_idx().end(), b.col_idx().begin(),
                    b.col_idx().end()) &&
         std::equal(a.values().begin(), a.values().end(), b.values().begin(), b.values().end());
}

}  // namespace

TEST_SUITE("subsample") {

TEST_CASE("config validation") {
  CHECK_THROWS_AS(SampleConfig{0.0}.validate(), InvalidArgument);
  CHECK_THROWS_AS(SampleConfig{1.5}.validate(), InvalidArgument);
  CHECK_NOTHROW(SampleConfig{1e-9}.validate());
}

TEST_CASE("p = 1 keeps M exactly") {
  const auto m = fixture(7, 1);
  const auto draw = draw_sample(m, SampleConfig{1.0, 5});
  CHECK((draw.s.to_dense() - m.matrix()).norm() == 0.0);
  CHECK(draw.kept_count == 7 * 8 / 2);
  CHECK(residual(m, draw).matrix().norm() == 0.0);
}

TEST_CASE("draws are deterministic, symmetric and scaled by 1/p") {
  const auto m = fixture(20, 2);
  const SampleConfig cfg{0.3, 42, true, 7};
  const auto a = draw_sample(m, cfg);
  const auto b = draw_sample(m, cfg);
  CHECK(same_csr(a.s, b.s));
  CHECK(a.s.is_symmetric());
  for (Index i = 0; i < 20; ++i) {
    for (auto e = a.s.row_ptr()[i]; e < a.s.row_ptr()[i + 1]; ++e) {
      const Index j = a.s.col_idx()[e];
      CHECK(a.s.values()[e] == m(i, j) / 0.3);
    }
  }
  const auto other = draw_sample(m, SampleConfig{0.3, 42, true, 8});
  CHECK_FALSE(same_csr(a.s, other.s));
}

TEST_CASE("general sampling of a rectangular matrix") {
  const DenseMatrix m = oracle::random_matrix(6, 9, 3);
  const auto draw = draw_sample(m, SampleConfig{0.5, 1, false});
  CHECK(draw.s.rows() == 6);
  CHECK(draw.s.cols() == 9);
  CHECK_THROWS_AS(draw_sample(m, SampleConfig{0.5, 1, true}), ShapeMismatch);
  const DenseMatrix e = residual(m, draw);
  CHECK((e - (draw.s.to_dense() - m)).norm() == 0.0);
}

TEST_CASE("kept count follows the binomial law") {
  const Index n = 400;
  const double p = 0.05;
  const auto m = DenseSymmetric::from_upper(DenseMatrix::Ones(n, n));
  const auto draw = draw_sample(m, SampleConfig{p, 9});
  const double trials = n * (n + 1) / 2.0;
  const double sd = std::sqrt(trials * p * (1 - p));
  CHECK(std::abs(static_cast<double>(draw.kept_count) - trials * p) < 4 * sd);
}

TEST_CASE("entrywise Monte Carlo mean of S stays in the CLT band") {
  const auto m = fixture(5, 4);
  const double p = 0.3;
  const int draws = 20000;
  DenseMatrix sum = DenseMatrix::Zero(5, 5);
  for (int i = 0; i < draws; ++i) {
    sum += draw_sample(m, SampleConfig{p, 11, true, static_cast<std::uint64_t>(i)}).s.to_dense();
  }
  const DenseMatrix mean = sum / draws;
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) {
      const double band = 4 * std::sqrt((1 - p) / p) * std::abs(m(i, j)) / std::sqrt(draws);
      CHECK(std::abs(mean(i, j) - m(i, j)) <= band);
    }
  }
}

TEST_CASE("C takes two values with mean 0 and variance 1") {
  const double p = 0.2;
  const Index n = 500;
  double sum = 0;
  double sumsq = 0;
  double count = 0;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto c = draw_c(n, p, 3, s);
    CHECK(c.high() == doctest::Approx(std::sqrt((1 - p) / p)));
    CHECK(c.low() == doctest::Approx(-std::sqrt(p / (1 - p))));
    const DenseMatrix d = c.dense().matrix();
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        const double v = d(i, j);
        REQUIRE((v == c.high() || v == c.low()));
        sum += v;
        sumsq += v * v;
        count += 1;
      }
    }
  }
  REQUIRE(count >= 1e6);
  const double mean = sum / count;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(count));
  const double var = sumsq / count - mean * mean;
  CHECK(var >= 0.99);
  CHECK(var <= 1.01);
}

TEST_CASE("C operator agrees with its dense form") {
  const auto c = draw_c(40, 0.3, 5, 2);
  const Vector x = Vector::LinSpaced(40, -1, 1);
  Vector y;
  c.multiply(x, y);
  CHECK((y - c.dense().matrix() * x).norm() < 1e-12);
  const auto deg = c.degrees();
  const DenseMatrix d = c.dense().matrix();
  for (Index j = 0; j < 40; ++j) {
    std::int64_t count = 0;
    for (Index i = 0; i < 40; ++i) {
      count += d(i, j) > 0 ? 1 : 0;
    }
    CHECK(deg[j] == count);
  }
}

TEST_CASE("residual identity S = M + sqrt((1-p)/p) (M o C)") {
  const auto m = fixture(6, 6);
  const double p = 0.4;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto draw = draw_sample(m, SampleConfig{p, 77, true, s});
    const auto c = draw_c(6, p, 77, s);
    const DenseMatrix lhs = draw.s.to_dense();
    const DenseMatrix rhs =
        m.matrix() + std::sqrt((1 - p) / p) * hadamard(m.matrix(), c.dense().matrix());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((residual(m, draw).matrix() - residual_from_c(m, c).matrix()).cwiseAbs().maxCoeff() <
          1e-12);
  }
  const auto c1 = draw_c(6, 1.0, 1);
  CHECK(c1.dense().matrix().norm() == 0.0);
}

TEST_CASE("Monte Carlo mean of E is zero within the CLT band") {
  const auto m = fixture(6, 7);
  const double p = 0.4;
  const int draws = 10000;
  DenseMatrix sum = DenseMatrix::Zero(6, 6);
  for (int i = 0; i < draws; ++i) {
    sum += residual(m, draw_sample(m, SampleConfig{p, 13, true, static_cast<std::uint64_t>(i)}))
               .matrix();
  }
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) {
      const double band = 4 * std::sqrt((1 - p) / p) * std::abs(m(i, j)) / std::sqrt(draws);
      CHECK(std::abs(sum(i, j) / draws) <= band);
    }
  }
  CHECK_THROWS_AS(residual(fixture(5, 1), draw_sample(m, SampleConfig{p})), ShapeMismatch);
  CHECK_THROWS_AS(residual(m, draw_sample(m.matrix(), SampleConfig{p, 0, false})),
                  InvalidArgument);
}

TEST_CASE("concentration of ||C / sqrt(n)||") {
  const auto prof = concentration_profile(200, 0.5, 200, 21, 4);
  CHECK(prof.norms.size() == 200);
  CHECK(prof.median <= 2.5);
  CHECK(prof.median > 1.5);
  CHECK(prof.tail_fraction(0.5) <= c_deviation_bound(200, 0.5, 0.5));
  CHECK(c_deviation_bound(200, 0.5, 0.5) ==
        doctest::Approx(4 * std::exp(-0.25 * 0.25 * 200 / 8)));

  const auto degenerate = concentration_profile(30, 1.0, 10, 1);
  CHECK(degenerate.median == 0.0);
  CHECK_THROWS_AS(concentration_profile(30, 0.5, 9, 1), InvalidArgument);
}

TEST_CASE("residual norm profile is reproducible across worker counts") {
  const auto m = fixture(15, 8);
  const auto a = residual_norm_profile(m, 0.3, 12, 4, 1);
  const auto b = residual_norm_profile(m, 0.3, 12, 4, 3);
  CHECK(a.norms == b.norms);
  CHECK(a.median == b.median);
}

}  // TEST_SUITE
