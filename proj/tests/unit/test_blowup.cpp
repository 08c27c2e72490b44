#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "avgeig/blowup.hpp"
#include "avgeig/errors.hpp"
#include "avgeig/subsample.hpp"

using namespace avgeig;

TEST_SUITE("degree-blowup") {

TEST_CASE("T diagonal formula") {
  const Index n = 50;
  const double p = 0.1;
  CHECK(t_diagonal({0}, n, p)[0] == doctest::Approx(n * p / (1 - p)));
  CHECK(t_diagonal({7}, n, 0.5)[0] == doctest::Approx(static_cast<double>(n)));
  CHECK(degree_slope(0.5) == 0.0);
  CHECK_THROWS_AS(t_diagonal({1}, n, 1.0), InvalidArgument);

  const auto c = draw_c(n, p, 4, 2);
  const DenseMatrix cd = c.dense().matrix();
  const DenseMatrix ctc = oracle::naive_multiply(oracle::naive_transpose(cd), cd);
  const auto t = t_diagonal(c.degrees(), n, p);
  for (Index i = 0; i < n; ++i) {
    CHECK(std::abs(t[i] - ctc(i, i)) < 1e-9);
  }
}

TEST_CASE("degree slope exceeds 1/(2p) exactly up to 1/3") {
  for (int i = 1; i <= 1000; ++i) {
    const double p = kDegreeSlopeCrossover * i / 1000.0;
    CHECK(degree_slope(p) >= 1.0 / (2.0 * p) - 1e-12);
  }
  for (double p : {0.34, 0.36, 0.38}) {
    CHECK(degree_slope(p) < 1.0 / (2.0 * p));
  }
}

TEST_CASE("threshold k") {
  const double n = std::exp(std::exp(1.0));
  const double p = std::sqrt(std::exp(1.0)) / n;
  CHECK(threshold_k(n, p, 0.5) == doctest::Approx(n * p + std::exp(0.6)));
  CHECK_THROWS_AS(threshold_k(2, 0.1, 0.5), InvalidArgument);
  CHECK_THROWS_AS(threshold_k(100, 0.1, 1.0), InvalidArgument);

  for (Index m : {Index{1} << 10, Index{1} << 14, Index{1} << 20}) {
    const double delta = 0.5;
    const double q = blowup_p(m, delta);
    const double vn = default_vn(static_cast<double>(m), delta);
    CHECK(threshold_k_generalized(static_cast<double>(m), q, delta, vn) ==
          doctest::Approx(threshold_k(static_cast<double>(m), q, delta)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(threshold_k_generalized(1024, blowup_p(1024, 0.5), 0.5, 0.0), InvalidVn);
  CHECK_THROWS_AS(threshold_k_generalized(1024, blowup_p(1024, 0.5), 0.5, 10.0), InvalidVn);

  double previous = 0;
  for (int e = 10; e <= 16; ++e) {
    const double m = std::ldexp(1.0, e);
    const double q = blowup_p(static_cast<Index>(m), 0.5);
    const double ratio = threshold_k(m, q, 0.5) / (2 * m * q);
    CHECK(ratio > previous);
    previous = ratio;
  }
}

TEST_CASE("Bollobas bound") {
  const Index n = 200;
  const double p = 0.1;
  const auto at_mean = bollobas_lower_bound(n, p, n * p);
  const double beta = 1.0 / (12 * 20.0) + 1.0 / (12 * 180.0);
  CHECK(at_mean.bound == doctest::Approx(std::exp(-beta) / std::sqrt(2 * M_PI * p * 0.9 * n)));
  CHECK_THROWS_AS(bollobas_lower_bound(n, p, 0), DomainError);
  CHECK_THROWS_AS(bollobas_lower_bound(n, p, 200), DomainError);

  // Naive evaluation where nothing underflows.
  for (Index m : {100, 500, 1000}) {
    const double q = 0.05;
    const double k = m * q + 7.5;
    const double h = k - m * q;
    const double naive =
        std::pow(2 * M_PI * q * (1 - q) * m, -0.5) *
        std::exp(-h * h / (2 * q * (1 - q) * m)) * std::exp(-h * h * h / (2 * (1 - q) * (1 - q) * m * m)) *
        std::exp(-std::pow(h, 4) / (3 * q * q * q * m * m * m)) * std::exp(-h / (q * m)) *
        std::exp(-1 / (12 * k) - 1 / (12 * (m - k)));
    const auto b = bollobas_lower_bound(m, q, k);
    CHECK(b.bound == doctest::Approx(naive).epsilon(1e-9));
    CHECK(b.witness == doctest::Approx(m * naive).epsilon(1e-9));
  }

  // Monotone decreasing in h.
  double previous = 1e300;
  for (int h = 0; h < 30; ++h) {
    const double b = bollobas_lower_bound(1000, 0.02, 20.0 + h).bound;
    CHECK(b < previous);
    previous = b;
  }

  // The witness n * bound grows along the critical scaling.
  double last = -1e300;
  for (int e = 10; e <= 18; ++e) {
    const Index m = Index{1} << e;
    const double q = blowup_p(m, 0.5);
    const double lw = bollobas_lower_bound(m, q, threshold_k(static_cast<double>(m), q, 0.5)).log_witness;
    CHECK(lw > last);
    last = lw;
  }
}

TEST_CASE("sampled degrees") {
  CHECK(sample_degrees(10, 0.0, 1) == std::vector<std::int64_t>(10, 0));
  CHECK(sample_degrees(10, 1.0, 1) == std::vector<std::int64_t>(10, 10));
  const Index n = 2000;
  const double p = 0.01;
  const auto d = sample_degrees(n, p, 5);
  double mean = 0;
  for (auto x : d) {
    CHECK(x >= 0);
    CHECK(x <= n);
    mean += static_cast<double>(x) / n;
  }
  // Sum of degrees = 2 X_off + X_diag; its variance is about 2 n^2 p (1-p).
  CHECK(std::abs(mean - n * p) < 4 * std::sqrt(2 * p * (1 - p)));
  CHECK(d == draw_c(n, p, 5).degrees());
}

TEST_CASE("blow-up experiment bookkeeping") {
  BlowupConfig cfg;
  cfg.n_grid = {256, 512};
  cfg.draws = 3;
  cfg.seed = 7;
  const auto a = blowup_experiment(cfg);
  cfg.workers = 3;
  const auto b = blowup_experiment(cfg);
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].max_t_over_n == b[i].max_t_over_n);
    CHECK(a[i].opnorm_estimate == b[i].opnorm_estimate);
    CHECK(a[i].degrees.size() == static_cast<std::size_t>(a[i].n));
    CHECK(a[i].p == doctest::Approx(blowup_p(a[i].n, 0.5)));
    CHECK(a[i].max_t_over_n >= a[i].n * a[i].p / (1 - a[i].p) / a[i].n);
    CHECK(a[i].k_over_2np ==
          doctest::Approx(a[i].k_threshold / (2 * a[i].n * a[i].p)));
    for (const auto& d : a[i].draws) {
      CHECK(d.opnorm >= std::sqrt(d.max_t_over_n) * (1 - 1e-12));
    }
  }
  cfg.regime = BlowupRegime::Contrast;
  for (const auto& t : blowup_experiment(cfg)) {
    CHECK(t.p == doctest::Approx(contrast_p(t.n)));
    CHECK(t.opnorm_estimate <= 3.0);
  }
  cfg.delta = 1.0;
  CHECK_THROWS_AS(blowup_experiment(cfg), InvalidArgument);
}

}  // TEST_SUITE
