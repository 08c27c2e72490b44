#include "avgeig/subsample.hpp"

#include <algorithm>

#include "avgeig/eigensolver.hpp"
#include "avgeig/errors.hpp"
#include "avgeig/parallel.hpp"
#include "avgeig/stats.hpp"

namespace avgeig {

void SampleConfig::validate() const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidArgument("sampling probability must satisfy 0 < p <= 1 (got " +
                          std::to_string(p) + ")");
  }
}

SampleDraw draw_sample(Index rows, Index cols, const std::function<double(Index, Index)>& entry,
                       const SampleConfig& cfg) {
  cfg.validate();
  if (cfg.symmetric && rows != cols) {
    throw ShapeMismatch("symmetric sampling needs a square matrix");
  }
  RandomStream rng(cfg.seed, cfg.stream);
  const double scale = 1.0 / cfg.p;
  std::vector<Triplet> triplets;
  const double expected = cfg.p * static_cast<double>(rows) * static_cast<double>(cols);
  triplets.reserve(static_cast<std::size_t>(expected * 1.05) + 16);
  std::int64_t kept = 0;
  for_each_kept(rows, cols, cfg.p, cfg.symmetric, rng, [&](Index i, Index j) {
    ++kept;
    const double value = entry(i, j);
    if (value == 0.0) {
      return;
    }
    triplets.push_back({i, j, value * scale});
    if (cfg.symmetric && i != j) {
      triplets.push_back({j, i, value * scale});
    }
  });
  return {SparseCSR::from_triplets(rows, cols, std::move(triplets)), cfg, kept};
}

SampleDraw draw_sample(const DenseSymmetric& m, const SampleConfig& cfg) {
  const DenseMatrix& data = m.matrix();
  return draw_sample(m.size(), m.size(), [&data](Index i, Index j) { return data(i, j); }, cfg);
}

SampleDraw draw_sample(const DenseMatrix& m, const SampleConfig& cfg) {
  return draw_sample(m.rows(), m.cols(), [&m](Index i, Index j) { return m(i, j); }, cfg);
}

CenteredBernoulliMatrix::CenteredBernoulliMatrix(Index n, double p, SparseCSR positive_pattern)
    : n_(n), p_(p), pattern_(std::move(positive_pattern)) {
  SampleConfig{p}.validate();
  if (pattern_.rows() != n || pattern_.cols() != n) {
    throw ShapeMismatch("pattern must be n x n");
  }
  high_ = std::sqrt((1.0 - p) / p);
  low_ = p < 1.0 ? -std::sqrt(p / (1.0 - p)) : 0.0;
}

double CenteredBernoulliMatrix::operator()(Index i, Index j) const {
  return pattern_.coeff(i, j) != 0.0 ? high_ : low_;
}

DenseSymmetric CenteredBernoulliMatrix::dense() const {
  DenseMatrix out = DenseMatrix::Constant(n_, n_, low_);
  for (Index i = 0; i < n_; ++i) {
    for (auto k = pattern_.row_ptr()[i]; k < pattern_.row_ptr()[i + 1]; ++k) {
      out(i, pattern_.col_idx()[k]) = high_;
    }
  }
  return DenseSymmetric::from_upper(out);
}

void CenteredBernoulliMatrix::multiply(const Vector& x, Vector& y) const {
  pattern_.multiply(x, y);
  y *= high_ - low_;
  if (low_ != 0.0) {
    y.array() += low_ * x.sum();
  }
}

LinearOperator CenteredBernoulliMatrix::as_operator() const {
  LinearOperator op;
  op.rows = op.cols = n_;
  op.symmetric = true;
  op.apply = [this](const Vector& x, Vector& y) { multiply(x, y); };
  return op;
}

std::vector<std::int64_t> CenteredBernoulliMatrix::degrees() const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(n_));
  for (Index i = 0; i < n_; ++i) {
    out[i] = pattern_.row_ptr()[i + 1] - pattern_.row_ptr()[i];
  }
  return out;
}

CenteredBernoulliMatrix draw_c(Index n, double p, std::uint64_t seed, std::uint64_t stream) {
  SampleConfig{p, seed, true, stream}.validate();
  if (n < 1) {
    throw InvalidArgument("draw_c: n must be >= 1");
  }
  RandomStream rng(seed, stream);
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n) * 1.05) + 16);
  for_each_kept(n, n, p, true, rng, [&](Index i, Index j) {
    triplets.push_back({i, j, 1.0});
    if (i != j) {
      triplets.push_back({j, i, 1.0});
    }
  });
  return {n, p, SparseCSR::from_triplets(n, n, std::move(triplets))};
}

DenseSymmetric residual(const DenseSymmetric& m, const SampleDraw& draw) {
  if (draw.s.rows() != m.size() || draw.s.cols() != m.size()) {
    throw ShapeMismatch("residual: sample and matrix shapes differ");
  }
  if (!draw.config.symmetric) {
    throw InvalidArgument("residual: a symmetric matrix needs a symmetric draw");
  }
  return DenseSymmetric::from_upper(draw.s.to_dense() - m.matrix());
}

DenseMatrix residual(const DenseMatrix& m, const SampleDraw& draw) {
  if (draw.s.rows() != m.rows() || draw.s.cols() != m.cols()) {
    throw ShapeMismatch("residual: sample and matrix shapes differ");
  }
  return draw.s.to_dense() - m;
}

DenseSymmetric residual_from_c(const DenseSymmetric& m, const CenteredBernoulliMatrix& c) {
  if (c.size() != m.size()) {
    throw ShapeMismatch("residual_from_c: shapes differ");
  }
  const double scale = std::sqrt((1.0 - c.p()) / c.p());
  return DenseSymmetric::from_upper(scale * m.matrix().cwiseProduct(c.dense().matrix()));
}

double ConcentrationProfile::tail_fraction(double t) const {
  if (deviations.empty()) {
    return 0.0;
  }
  const auto count = std::count_if(deviations.begin(), deviations.end(),
                                   [t](double d) { return d > t; });
  return static_cast<double>(count) / static_cast<double>(deviations.size());
}

namespace {

ConcentrationProfile finish_profile(std::vector<double> norms) {
  ConcentrationProfile out;
  out.median = stats::median(norms);
  out.deviations.reserve(norms.size());
  for (double v : norms) {
    out.deviations.push_back(std::abs(v - out.median));
  }
  out.norms = std::move(norms);
  return out;
}

}  // namespace

ConcentrationProfile concentration_profile(Index n, double p, std::size_t draws,
                                           std::uint64_t seed, std::size_t workers) {
  if (draws < 10) {
    throw InvalidArgument("concentration_profile needs at least 10 draws");
  }
  std::vector<double> norms(draws, 0.0);
  parallel_for(draws, workers, [&](std::size_t d) {
    const auto c = draw_c(n, p, seed, d);
    NormOptions options;
    options.seed = seed;
    norms[d] = spectral_norm(c.as_operator(), options) / std::sqrt(static_cast<double>(n));
  });
  return finish_profile(std::move(norms));
}

double c_deviation_bound(Index n, double p, double t) {
  return 4.0 * std::exp(-t * t * p * (1.0 - p) * static_cast<double>(n) / 8.0);
}

ConcentrationProfile residual_norm_profile(const DenseSymmetric& m, double p, std::size_t draws,
                                           std::uint64_t seed, std::size_t workers) {
  if (draws < 10) {
    throw InvalidArgument("residual_norm_profile needs at least 10 draws");
  }
  std::vector<double> norms(draws, 0.0);
  parallel_for(draws, workers, [&](std::size_t d) {
    const auto draw = draw_sample(m, SampleConfig{p, seed, true, d});
    const auto e = residual(m, draw);
    NormOptions options;
    options.seed = seed;
    norms[d] = spectral_norm(e, options);
  });
  return finish_profile(std::move(norms));
}

}  // namespace avgeig
