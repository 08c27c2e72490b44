#include "avgeig/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "avgeig/errors.hpp"
#include "avgeig/parallel.hpp"
#include "avgeig/subsample.hpp"

namespace avgeig {

Gauge parse_gauge(const std::string& name) {
  if (name == "avg-norm") {
    return Gauge::AverageThenNormalize;
  }
  if (name == "norm-avg") {
    return Gauge::NormalizeThenAverage;
  }
  throw InvalidArgument("unknown gauge '" + name + "' (expected avg-norm or norm-avg)");
}

std::string to_string(Gauge gauge) {
  return gauge == Gauge::AverageThenNormalize ? "avg-norm" : "norm-avg";
}

void AveragingPlan::validate() const {
  SampleConfig{p}.validate();
  if (num_samples < 1) {
    throw InvalidArgument("the number of samples must be >= 1");
  }
  if (k < 0) {
    throw InvalidArgument("eigenpair index must be >= 0");
  }
}

void orient_draws(std::vector<Vector>& vectors) {
  if (vectors.empty()) {
    return;
  }
  Vector reference = Vector::Zero(vectors.front().size());
  for (auto& v : vectors) {
    fix_sign(v);
    reference += v;
  }
  for (auto& v : vectors) {
    if (v.dot(reference) < 0.0) {
      v = -v;
    }
  }
}

Vector combine_draws(const std::vector<Vector>& vectors, Gauge gauge) {
  if (vectors.empty()) {
    throw InvalidArgument("combine_draws: no draws");
  }
  Vector sum = Vector::Zero(vectors.front().size());
  for (const auto& v : vectors) {
    sum += v;
  }
  if (gauge == Gauge::AverageThenNormalize) {
    const double norm = sum.norm();
    if (norm > 0.0) {
      sum /= norm;
    }
  } else {
    sum /= static_cast<double>(vectors.size());
  }
  fix_sign(sum);
  return sum;
}

namespace {

// Runs `solve(draw)` for every draw, converting solver failures into the
// estimator's error contract.
template <typename Solve>
DrawVectors run_draws(std::size_t count, std::size_t workers, Solve&& solve) {
  DrawVectors out;
  out.vectors.resize(count);
  out.values.resize(count);
  std::vector<std::exception_ptr> failures(count);
  parallel_for(count, workers, [&](std::size_t i) {
    try {
      auto [value, vector] = solve(i);
      out.values[i] = value;
      out.vectors[i] = std::move(vector);
    } catch (const NoConvergence&) {
      failures[i] = std::current_exception();
    }
  });
  const auto failed = std::count_if(failures.begin(), failures.end(),
                                    [](const auto& e) { return static_cast<bool>(e); });
  if (failed == static_cast<std::ptrdiff_t>(count)) {
    throw AllDrawsFailed(count);
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (failures[i]) {
      try {
        std::rethrow_exception(failures[i]);
      } catch (const NoConvergence& e) {
        throw DrawFailed(i, e);
      }
    }
  }
  orient_draws(out.vectors);
  return out;
}

std::pair<double, Vector> kth_eigenpair(const SparseCSR& s, const AveragingPlan& plan,
                                        std::size_t draw) {
  EigenOptions options = plan.eigen;
  options.seed = substream(plan.seed, draw);
  auto pairs = top_k_eigen(s, static_cast<std::size_t>(plan.k) + 1, options);
  return {pairs.back().value, std::move(pairs.back().vector)};
}

DrawVectors sample_eigenvectors_impl(Index n,
                                     const std::function<double(Index, Index)>& entry,
                                     const AveragingPlan& plan) {
  plan.validate();
  if (plan.k >= n) {
    throw InvalidArgument("eigenpair index exceeds the dimension");
  }
  return run_draws(plan.num_samples, plan.workers, [&](std::size_t i) {
    const auto draw = draw_sample(n, n, entry, SampleConfig{plan.p, plan.seed, true, i});
    return kth_eigenpair(draw.s, plan, i);
  });
}

void fill_truth(EstimatorReport& report, const std::vector<Vector>& vectors, const Vector& u) {
  report.alignment = alignment(u, report.nu);
  report.error = oriented_error(u, report.nu);
  report.per_sample_alignments.reserve(vectors.size());
  report.per_sample_errors.reserve(vectors.size());
  for (const auto& v : vectors) {
    report.per_sample_alignments.push_back(alignment(u, v));
    report.per_sample_errors.push_back(oriented_error(u, v));
  }
}

EstimatorReport make_report(DrawVectors draws, const AveragingPlan& plan,
                            const SpectralModel* truth) {
  EstimatorReport report;
  report.nu = combine_draws(draws.vectors, plan.gauge);
  report.samples = draws.vectors.size();
  report.sample_eigenvalues = std::move(draws.values);
  if (truth != nullptr) {
    if (plan.k >= truth->rank()) {
      throw InvalidArgument("ground truth lacks the requested eigenpair");
    }
    fill_truth(report, draws.vectors, truth->eigenvector(plan.k));
    if (truth->has_alpha()) {
      report.xi = xi(*truth, plan.p);
      report.d = separation(*truth, plan.k);
      report.predicted_error = (*report.xi * *report.xi) / (*report.d * *report.d);
      report.strong_condition_ok = strong_separation_ok(*report.xi, *report.d);
    }
  }
  return report;
}

}  // namespace

DrawVectors sample_eigenvectors(const DenseSymmetric& m, const AveragingPlan& plan) {
  const DenseMatrix& data = m.matrix();
  return sample_eigenvectors_impl(m.size(), [&data](Index i, Index j) { return data(i, j); },
                                  plan);
}

DrawVectors sample_eigenvectors(const SparseCSR& m, const AveragingPlan& plan) {
  if (m.rows() != m.cols() || !m.is_symmetric()) {
    throw InvalidArgument("estimate needs a square symmetric matrix");
  }
  return sample_eigenvectors_impl(m.rows(), [&m](Index i, Index j) { return m.coeff(i, j); },
                                  plan);
}

EstimatorReport estimate(const DenseSymmetric& m, const AveragingPlan& plan,
                         const SpectralModel* truth) {
  return make_report(sample_eigenvectors(m, plan), plan, truth);
}

EstimatorReport estimate(const SparseCSR& m, const AveragingPlan& plan,
                         const SpectralModel* truth) {
  return make_report(sample_eigenvectors(m, plan), plan, truth);
}

RectEstimatorReport estimate_rect(const DenseMatrix& m, const AveragingPlan& plan,
                                  const RectSpectralModel* truth) {
  plan.validate();
  if (plan.k >= std::min(m.rows(), m.cols())) {
    throw InvalidArgument("singular triplet index exceeds the dimension");
  }
  const auto k = static_cast<std::size_t>(plan.k) + 1;
  auto solve = [&](std::size_t i, bool left) {
    const auto draw = draw_sample(m, SampleConfig{plan.p, plan.seed, false, i});
    const LinearOperator s = as_operator(draw.s);
    const LinearOperator g = left ? outer_gram_operator(s) : gram_operator(s);
    EigenOptions options = plan.eigen;
    options.seed = substream(plan.seed, i);
    auto pairs = top_k_eigen(g, k, options);
    return std::pair<double, Vector>{std::sqrt(std::max(pairs.back().value, 0.0)),
                                     std::move(pairs.back().vector)};
  };
  auto left = run_draws(plan.num_samples, plan.workers, [&](std::size_t i) { return solve(i, true); });
  auto right = run_draws(plan.num_samples, plan.workers, [&](std::size_t i) { return solve(i, false); });

  RectEstimatorReport out;
  const auto finish = [&](DrawVectors draws, const DenseMatrix* truth_vectors) {
    EstimatorReport report;
    report.nu = combine_draws(draws.vectors, plan.gauge);
    report.samples = draws.vectors.size();
    report.sample_eigenvalues = std::move(draws.values);
    if (truth_vectors != nullptr) {
      if (plan.k >= truth_vectors->cols()) {
        throw InvalidArgument("ground truth lacks the requested singular triplet");
      }
      fill_truth(report, draws.vectors, truth_vectors->col(plan.k));
    }
    return report;
  };
  out.left = finish(std::move(left), truth ? &truth->left() : nullptr);
  out.right = finish(std::move(right), truth ? &truth->right() : nullptr);
  if (truth != nullptr && !truth->alpha().empty() && !truth->beta().empty()) {
    const double bound = rect_bound(*truth, plan.p).value / 2.0;
    const Vector& s = truth->singular_values();
    double d = s(plan.k);
    for (Index j = 0; j < s.size(); ++j) {
      if (j != plan.k) {
        d = std::min(d, std::abs(s(j) - s(plan.k)));
      }
    }
    for (auto* r : {&out.left, &out.right}) {
      r->xi = bound;
      r->d = d;
      r->predicted_error = (bound * bound) / (d * d);
      r->strong_condition_ok = strong_separation_ok(bound, d);
    }
  }
  return out;
}

double alignment(const Vector& u, const Vector& nu) {
  const double norm = nu.norm();
  if (norm == 0.0) {
    return 0.0;
  }
  return std::min(1.0, std::abs(u.dot(nu)) / (u.norm() * norm));
}

double oriented_error(const Vector& u, const Vector& nu) {
  return u.dot(nu) >= 0.0 ? (nu - u).norm() : (nu + u).norm();
}

double xi(const SpectralModel& model, double p) {
  SampleConfig{p}.validate();
  return mu(model) / std::sqrt(p * std::pow(static_cast<double>(model.n()), model.alpha_min()));
}

bool strong_separation_ok(double xi, double d) {
  if (xi == 0.0) {
    return true;
  }
  if (!(xi > 0.0) || xi >= 1.0) {
    return false;
  }
  return d >= xi * std::sqrt(std::log(1.0 / (xi * xi)));
}

bool strong_separation_ok(const SpectralModel& model, double p, Index k) {
  return strong_separation_ok(xi(model, p), separation(model, k));
}

VarianceBudget variance_bound(const DenseSymmetric& m, const SpectralModel& model, double p) {
  SampleConfig{p}.validate();
  if (m.size() != model.n()) {
    throw ShapeMismatch("variance_bound: matrix and model sizes differ");
  }
  VarianceBudget out;
  const Vector u = model.eigenvector(0);
  const double lambda1 = model.eigenvalue(0);
  const double d = separation(model, 0);
  out.w1 = u.cwiseProduct(u);
  out.calm = m.matrix().cwiseProduct(m.matrix());

  const Vector column_sq = out.calm.colwise().sum().transpose();
  const double first = out.w1.dot(column_sq);
  const double bracket =
      2.0 * out.w1.dot(out.calm * out.w1) - out.w1.cwiseProduct(out.w1).dot(out.calm.diagonal());
  out.exact_bound = (1.0 - p) / p * (first - bracket) / (d * d);

  double spectral = std::abs(lambda1);
  for (Index i = 0; i < model.rank(); ++i) {
    spectral = std::max(spectral, std::abs(model.eigenvalue(i)));
  }
  out.lambda1_is_norm = lambda1 >= spectral * (1.0 - 1e-10);
  const double frob = m.matrix().norm();
  const double num_rank = (frob * frob) / (spectral * spectral);
  const double peak = u.cwiseAbs().maxCoeff();
  const double gap_factor = (lambda1 * lambda1) / (d * d);
  out.relaxed_bound = gap_factor * peak * peak * num_rank / p;
  return out;
}

UeuVariance var_uEu(const DenseSymmetric& m, const Vector& u, double p) {
  SampleConfig{p}.validate();
  if (u.size() != m.size()) {
    throw ShapeMismatch("var_uEu: vector length differs from the matrix");
  }
  const double scale = (1.0 - p) / p;
  const Vector w = u.cwiseProduct(u);
  const DenseMatrix calm = m.matrix().cwiseProduct(m.matrix());
  UeuVariance out;
  out.closed_form =
      scale * (2.0 * w.dot(calm * w) - w.cwiseProduct(w).dot(calm.diagonal()));
  double pairs = 0.0;
  double diag = 0.0;
  for (Index i = 0; i < m.size(); ++i) {
    for (Index j = 0; j < i; ++j) {
      pairs += w(i) * w(j) * calm(i, j);
    }
    diag += w(i) * w(i) * calm(i, i);
  }
  out.pairwise_form = scale * (4.0 * pairs + diag);
  return out;
}

Vector e_second_moment_diag(const DenseSymmetric& m, double p) {
  SampleConfig{p}.validate();
  return (1.0 - p) / p * m.matrix().colwise().squaredNorm().transpose();
}

MomentBounds e_moment_bounds(double entrywise_max, double p, double m_e) {
  SampleConfig{p}.validate();
  if (!(m_e >= 0.0)) {
    throw InvalidArgument("e_moment_bounds: median must be >= 0");
  }
  const double s2 = entrywise_max * entrywise_max / (p * p);
  MomentBounds out;
  out.second = m_e * m_e + 32.0 * s2 + 8.0 * m_e * std::sqrt(2.0 * M_PI * s2);
  out.third = 4.0 * m_e * m_e * m_e + 12.0 * std::sqrt(M_PI) * std::pow(8.0 * s2, 1.5);
  return out;
}

double e_tail_bound(double entrywise_max, double p, double t) {
  SampleConfig{p}.validate();
  return 4.0 * std::exp(-p * p * t * t / (8.0 * entrywise_max * entrywise_max));
}

std::size_t recommend_samples(const VarianceBudget& variance, double target) {
  if (!(target > 0.0)) {
    throw InvalidArgument("recommend_samples: target must be > 0");
  }
  const double ratio = variance.relaxed_bound / (target * target);
  if (!(ratio > 1.0)) {
    return 1;
  }
  auto n = static_cast<std::size_t>(std::ceil(ratio));
  while (n > 1 && variance.relaxed_bound / static_cast<double>(n - 1) <= target * target) {
    --n;
  }
  while (variance.relaxed_bound / static_cast<double>(n) > target * target) {
    ++n;
  }
  return n;
}

}  // namespace avgeig
