#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "avgeig/eigensolver.hpp"
#include "avgeig/errors.hpp"
#include "avgeig/estimator.hpp"
#include "avgeig/perturbation.hpp"
#include "avgeig/stats.hpp"
#include "avgeig/subsample.hpp"
#include "avgeig/synth.hpp"

using namespace avgeig;

namespace {

std::pair<DenseSymmetric, SpectralModel> dense_model(Index n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = n;
  spec.spectrum = {1.0, 0.4, 0.2};
  spec.seed = seed;
  return synth_symmetric(spec);
}

AveragingPlan plan(double p, std::size_t n, std::uint64_t seed = 1) {
  AveragingPlan out;
  out.p = p;
  out.num_samples = n;
  out.seed = seed;
  return out;
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("plan validation and gauge names") {
  CHECK_THROWS_AS(plan(0.0, 3).validate(), InvalidArgument);
  CHECK_THROWS_AS(plan(0.5, 0).validate(), InvalidArgument);
  CHECK(parse_gauge("avg-norm") == Gauge::AverageThenNormalize);
  CHECK(parse_gauge("norm-avg") == Gauge::NormalizeThenAverage);
  CHECK(to_string(Gauge::NormalizeThenAverage) == "norm-avg");
  CHECK_THROWS_AS(parse_gauge("other"), InvalidArgument);
}

TEST_CASE("p = 1 returns the exact eigenvector") {
  const auto [m, model] = dense_model(40, 2);
  const auto report = estimate(m, plan(1.0, 3), &model);
  CHECK(*report.alignment >= 1 - 1e-10);
  CHECK(std::abs(report.nu.norm() - 1) < 1e-12);
  CHECK(report.per_sample_alignments.size() == 3);
  CHECK(*report.error < 1e-5);
}

TEST_CASE("a single draw is the subsampled eigenvector") {
  const auto [m, model] = dense_model(40, 3);
  const auto p = plan(0.5, 1, 9);
  const auto report = estimate(m, p);
  const auto draw = draw_sample(m, SampleConfig{0.5, 9, true, 0});
  EigenOptions opt;
  opt.seed = substream(9, 0);
  const auto pair = top_k_eigen(draw.s, 1, opt);
  CHECK(oracle::misalignment(report.nu, pair[0].vector) < 1e-12);
  CHECK(report.sample_eigenvalues[0] == pair[0].value);
}

TEST_CASE("results do not depend on the worker count") {
  const auto [m, model] = dense_model(50, 4);
  auto p = plan(0.3, 12, 5);
  const auto a = estimate(m, p, &model);
  p.workers = 4;
  const auto b = estimate(m, p, &model);
  CHECK(a.nu == b.nu);
  CHECK(a.per_sample_alignments == b.per_sample_alignments);
}

TEST_CASE("sign of the ground truth does not change nu") {
  const auto [m, model] = dense_model(30, 5);
  DenseMatrix flipped = model.eigenvectors();
  flipped.col(0) *= -1;
  const SpectralModel other(model.eigenvalues(), flipped, model.alpha());
  const auto a = estimate(m, plan(0.4, 8), &model);
  const auto b = estimate(m, plan(0.4, 8), &other);
  CHECK(a.nu == b.nu);
  CHECK(*a.alignment == *b.alignment);
  CHECK(*a.error == doctest::Approx(*b.error));
}

TEST_CASE("gauges") {
  std::vector<Vector> v{Vector::Unit(3, 0), (Vector(3) << 0.6, 0.8, 0).finished()};
  const Vector avg = combine_draws(v, Gauge::AverageThenNormalize);
  CHECK(avg.norm() == doctest::Approx(1));
  const Vector raw = combine_draws(v, Gauge::NormalizeThenAverage);
  CHECK((raw - (Vector(3) << 0.8, 0.4, 0).finished()).norm() < 1e-15);
  CHECK(raw.norm() <= 1.0);

  std::vector<Vector> mixed{(Vector(2) << 1, 0.999).finished().normalized(),
                            (Vector(2) << -0.999, -1).finished().normalized()};
  orient_draws(mixed);
  CHECK(mixed[0].dot(mixed[1]) > 0);
}

TEST_CASE("sparse input") {
  const auto [m, model] = dense_model(30, 6);
  const auto sparse = SparseCSR::from_dense(m.matrix());
  const auto a = estimate(m, plan(0.5, 5));
  const auto b = estimate(sparse, plan(0.5, 5));
  CHECK((a.nu - b.nu).norm() < 1e-12);
}

TEST_CASE("all draws failing") {
  const auto [m, model] = dense_model(30, 7);
  auto p = plan(0.5, 3);
  p.eigen.max_iter = 1;
  CHECK_THROWS_AS(estimate(m, p), AllDrawsFailed);
}

TEST_CASE("averaging does not hurt in the perturbative regime") {
  const auto [m, model] = dense_model(80, 8);
  std::vector<double> averaged;
  std::vector<double> single;
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const auto r = estimate(m, plan(0.5, 60, 100 + rep), &model);
    averaged.push_back(*r.error);
    single.push_back(stats::median(r.per_sample_errors));
  }
  CHECK(stats::median(averaged) <= stats::median(single));
}

TEST_CASE("predicted error and strong separation") {
  const auto [m, model] = dense_model(60, 9);
  const auto r = estimate(m, plan(0.5, 2), &model);
  CHECK(*r.xi == doctest::Approx(xi(model, 0.5)));
  CHECK(*r.d == doctest::Approx(separation(model, 0)));
  CHECK(*r.predicted_error == doctest::Approx(*r.xi * *r.xi / (*r.d * *r.d)));
  CHECK(*r.strong_condition_ok == strong_separation_ok(model, 0.5));

  CHECK(strong_separation_ok(0.1, 1.0));
  CHECK_FALSE(strong_separation_ok(0.5, 0.1));
  CHECK_FALSE(strong_separation_ok(1.0, 100.0));
  CHECK_FALSE(strong_separation_ok(2.0, 100.0));
}

TEST_CASE("rectangular estimates") {
  SyntheticSpec spec;
  spec.n = 30;
  spec.m = 50;
  spec.spectrum = {3.0, 1.0};
  spec.seed = 2;
  const auto [m, model] = synth_rect(spec);
  const auto exact = estimate_rect(m, plan(1.0, 2), &model);
  CHECK(*exact.left.alignment >= 1 - 1e-9);
  CHECK(*exact.right.alignment >= 1 - 1e-9);
  CHECK(exact.left.nu.size() == 30);
  CHECK(exact.right.nu.size() == 50);

  const auto sampled = estimate_rect(m, plan(0.3, 30), &model);
  CHECK(*sampled.left.alignment > 0.9);
  CHECK(*sampled.right.alignment > 0.9);
}

TEST_CASE("variance bound") {
  const Vector u = (Vector(4) << 0.5, 0.5, 0.5, 0.5).finished();
  const SpectralModel rank_one(Vector::Ones(1), u, {1.0});
  const auto budget = variance_bound(rank_one.assemble(), rank_one, 0.2);
  CHECK(budget.relaxed_bound == doctest::Approx(0.25 / 0.2));
  CHECK(budget.lambda1_is_norm);

  const auto [m, model] = dense_model(10, 11);
  const double p = 0.3;
  const auto b = variance_bound(m, model, p);
  // Naive evaluation of the bound.
  const double d = separation(model, 0);
  const Vector u1 = model.eigenvector(0);
  double first = 0;
  double pairs = 0;
  double diag = 0;
  for (Index k = 0; k < 10; ++k) {
    double col = 0;
    for (Index i = 0; i < 10; ++i) {
      col += m(i, k) * m(i, k);
    }
    first += u1(k) * u1(k) * col;
    for (Index l = 0; l < 10; ++l) {
      pairs += u1(k) * u1(k) * u1(l) * u1(l) * m(k, l) * m(k, l);
    }
    diag += std::pow(u1(k), 4) * m(k, k) * m(k, k);
  }
  const double naive = (1 - p) / p * (first - (2 * pairs - diag)) / (d * d);
  CHECK(b.exact_bound == doctest::Approx(naive).epsilon(1e-12));
  CHECK(b.exact_bound <= b.relaxed_bound);

  // Monte Carlo E||R E u_1||^2 below the bound.
  const ReducedResolvent r(model, 0);
  double total = 0;
  const int draws = 3000;
  for (int i = 0; i < draws; ++i) {
    const auto e = residual(m, draw_sample(m, SampleConfig{p, 17, true, static_cast<std::uint64_t>(i)}));
    total += r.apply(e.apply(u1)).squaredNorm();
  }
  CHECK(total / draws <= b.exact_bound);
}

TEST_CASE("variance of u^T E u") {
  const DenseMatrix zero_corner = oracle::random_symmetric(5, 3);
  DenseMatrix mz = zero_corner;
  mz(0, 0) = 0;
  CHECK(var_uEu(DenseSymmetric(mz), Vector::Unit(5, 0), 0.3).closed_form == 0.0);
  const auto m = DenseSymmetric(oracle::random_symmetric(10, 4));
  const Vector u = oracle::random_orthonormal(10, 1, 5).col(0);
  CHECK(var_uEu(m, u, 1.0).closed_form == 0.0);
  const auto v = var_uEu(m, u, 0.3);
  CHECK(v.closed_form == doctest::Approx(v.pairwise_form).epsilon(1e-12));

  const int draws = 100000;
  std::vector<double> values;
  values.reserve(draws);
  for (int i = 0; i < draws; ++i) {
    const auto e = residual(m, draw_sample(m, SampleConfig{0.3, 8, true, static_cast<std::uint64_t>(i)}));
    values.push_back(u.dot(e.apply(u)));
  }
  const double sd = stats::stddev(values);
  CHECK(sd * sd == doctest::Approx(v.closed_form).epsilon(0.05));
}

TEST_CASE("second moment of E") {
  const auto m = DenseSymmetric(oracle::random_symmetric(8, 6));
  CHECK(e_second_moment_diag(m, 1.0).norm() == 0.0);
  const double p = 0.4;
  const Vector diag = e_second_moment_diag(m, p);
  for (Index i = 0; i < 8; ++i) {
    double col = 0;
    for (Index j = 0; j < 8; ++j) {
      col += m(j, i) * m(j, i);
    }
    CHECK(diag(i) == doctest::Approx((1 - p) / p * col).epsilon(1e-14));
  }

  const int draws = 100000;
  DenseMatrix sum = DenseMatrix::Zero(8, 8);
  DenseMatrix sumsq = DenseMatrix::Zero(8, 8);
  for (int i = 0; i < draws; ++i) {
    const auto e = residual(m, draw_sample(m, SampleConfig{p, 3, true, static_cast<std::uint64_t>(i)}));
    const DenseMatrix e2 = e.matrix() * e.matrix();
    sum += e2;
    sumsq += e2.cwiseProduct(e2);
  }
  const DenseMatrix mean = sum / draws;
  for (Index i = 0; i < 8; ++i) {
    CHECK(mean(i, i) == doctest::Approx(diag(i)).epsilon(0.05));
    for (Index j = 0; j < 8; ++j) {
      if (i != j) {
        const double sd = std::sqrt(sumsq(i, j) / draws - mean(i, j) * mean(i, j));
        CHECK(std::abs(mean(i, j)) <= 4 * sd / std::sqrt(draws));
      }
    }
  }
}

TEST_CASE("moment bounds") {
  const auto b = e_moment_bounds(1.0, 0.5, 0.0);
  CHECK(b.second == doctest::Approx(128));
  CHECK(b.third == doctest::Approx(12 * std::sqrt(M_PI) * std::pow(32.0, 1.5)));
  CHECK(e_tail_bound(1.0, 0.5, 2.0) == doctest::Approx(4 * std::exp(-0.25 * 4 / 8)));

  const auto m = DenseSymmetric(oracle::random_symmetric(50, 7));
  const auto prof = residual_norm_profile(m, 0.3, 300, 2, 4);
  double second = 0;
  double third = 0;
  for (double x : prof.norms) {
    second += x * x / 300;
    third += x * x * x / 300;
  }
  const auto bounds = e_moment_bounds(norms(m).entrywise_max, 0.3, prof.median);
  CHECK(second <= bounds.second);
  CHECK(third <= bounds.third);
}

TEST_CASE("recommended sample counts") {
  VarianceBudget v;
  v.relaxed_bound = 1.0;
  CHECK(recommend_samples(v, 0.1) == 100);
  v.relaxed_bound = 0.0;
  CHECK(recommend_samples(v, 0.1) == 1);
  CHECK_THROWS_AS(recommend_samples(v, 0.0), InvalidArgument);

  const auto [m, model] = dense_model(20, 12);
  const auto at = recommend_samples(variance_bound(m, model, 0.1), 0.05);
  const auto twice = recommend_samples(variance_bound(m, model, 0.2), 0.05);
  CHECK(std::abs(static_cast<double>(at) / 2.0 - static_cast<double>(twice)) <= 1.0);
}

}  // TEST_SUITE
