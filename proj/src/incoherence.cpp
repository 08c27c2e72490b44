#include "avgeig/incoherence.hpp"

#include <algorithm>
#include <cmath>

#include "avgeig/eigensolver.hpp"
#include "avgeig/errors.hpp"
#include "avgeig/subsample.hpp"

namespace avgeig {

namespace {

constexpr double kOrthonormalTol = 1e-10;
constexpr double kTieTol = 1e-12;

void check_orthonormal(const DenseMatrix& u, const char* what) {
  if (u.cols() == 0 || u.cols() > u.rows()) {
    throw InvalidArgument(std::string(what) + ": need 1 <= r <= n columns");
  }
  const DenseMatrix gram = u.transpose() * u;
  const double err = (gram - DenseMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
  if (!(err <= kOrthonormalTol)) {
    throw InvalidArgument(std::string(what) + ": columns are not orthonormal (max |U^T U - I| = " +
                          std::to_string(err) + ")");
  }
}

void check_exponents(const DenseMatrix& u, const std::vector<double>& exponents,
                     const char* what) {
  if (exponents.empty()) {
    return;
  }
  if (static_cast<Index>(exponents.size()) != u.cols()) {
    throw InvalidArgument(std::string(what) + ": one exponent per vector required");
  }
  const double n = static_cast<double>(u.rows());
  for (Index i = 0; i < u.cols(); ++i) {
    const double a = exponents[i];
    if (!(a >= 0.0 && a <= 1.0)) {
      throw InvalidArgument(std::string(what) + ": exponents must lie in [0, 1]");
    }
    const double cap = std::ceil(std::pow(n, a) - 1e-9);
    if (static_cast<double>(support_size(u.col(i))) > cap) {
      throw InvalidArgument(std::string(what) + ": support of vector " + std::to_string(i) +
                            " exceeds n^exponent");
    }
  }
}

double min_of(const std::vector<double>& v, const char* what) {
  if (v.empty()) {
    throw InvalidArgument(std::string(what) + " not set");
  }
  return *std::min_element(v.begin(), v.end());
}

void check_p(double p) { SampleConfig{p}.validate(); }

BoundReport finish_report(double value, double alpha_min, Index n, double p,
                          const BoundConfig& config) {
  BoundReport out;
  out.value = value;
  const double log_n = std::log(static_cast<double>(n));
  out.hypothesis_ratio =
      std::pow(alpha_min * log_n, 4) / (p * std::pow(static_cast<double>(n), alpha_min));
  out.alpha_floor = std::pow(log_n, (config.delta - 3.0) / 4.0);
  out.hypotheses_ok = out.hypothesis_ratio < config.ratio_threshold && alpha_min > out.alpha_floor;
  return out;
}

}  // namespace

SpectralModel::SpectralModel(Vector eigenvalues, DenseMatrix eigenvectors,
                             std::vector<double> alpha, std::optional<double> mu_bound,
                             bool require_distinct)
    : values_(std::move(eigenvalues)),
      vectors_(std::move(eigenvectors)),
      alpha_(std::move(alpha)),
      mu_bound_(mu_bound) {
  if (values_.size() != vectors_.cols()) {
    throw ShapeMismatch("one eigenvalue per eigenvector required");
  }
  check_orthonormal(vectors_, "SpectralModel");
  const double scale = std::max(values_.cwiseAbs().maxCoeff(), 1e-300);
  for (Index i = 0; i + 1 < values_.size(); ++i) {
    if (values_(i) < values_(i + 1)) {
      throw InvalidArgument("SpectralModel: eigenvalues must be sorted in decreasing order");
    }
    if (values_(i) - values_(i + 1) <= kTieTol * scale) {
      distinct_ = false;
    }
  }
  if (has_complement()) {
    for (Index i = 0; i < values_.size(); ++i) {
      if (std::abs(values_(i)) <= kTieTol * scale) {
        distinct_ = false;
      }
    }
  }
  if (require_distinct && !distinct_) {
    throw DuplicateEigenvalue("SpectralModel: eigenvalues must be distinct");
  }
  check_exponents(vectors_, alpha_, "SpectralModel alpha");
}

SpectralModel SpectralModel::from_dense(const DenseSymmetric& m, double drop_tol,
                                        bool require_distinct) {
  const auto eig = dense_eigendecomposition(m);
  const double top = eig.values.cwiseAbs().maxCoeff();
  if (top == 0.0) {
    throw ZeroMatrix();
  }
  std::vector<Index> keep;
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (std::abs(eig.values(i)) > drop_tol * top) {
      keep.push_back(i);
    }
  }
  Vector values(static_cast<Index>(keep.size()));
  DenseMatrix vectors(m.size(), static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    values(j) = eig.values(keep[j]);
    vectors.col(j) = eig.vectors.col(keep[j]);
  }
  auto alpha = m.size() >= 2 ? fit_alpha(vectors) : std::vector<double>(keep.size(), 0.0);
  return SpectralModel(std::move(values), std::move(vectors), std::move(alpha), std::nullopt,
                       require_distinct);
}

double SpectralModel::alpha_min() const { return min_of(alpha_, "alpha"); }

SpectralModel SpectralModel::with_alpha(std::vector<double> alpha) const {
  return SpectralModel(values_, vectors_, std::move(alpha), mu_bound_, false);
}

DenseSymmetric SpectralModel::assemble() const {
  return DenseSymmetric::from_upper(vectors_ * values_.asDiagonal() * vectors_.transpose());
}

RectSpectralModel::RectSpectralModel(Vector singular_values, DenseMatrix left, DenseMatrix right,
                                     std::vector<double> alpha, std::vector<double> beta)
    : sigma_(std::move(singular_values)),
      left_(std::move(left)),
      right_(std::move(right)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)) {
  if (sigma_.size() != left_.cols() || sigma_.size() != right_.cols()) {
    throw ShapeMismatch("one singular value per singular vector pair required");
  }
  check_orthonormal(left_, "RectSpectralModel left");
  check_orthonormal(right_, "RectSpectralModel right");
  for (Index i = 0; i < sigma_.size(); ++i) {
    if (!(sigma_(i) > 0.0) || (i > 0 && sigma_(i) > sigma_(i - 1))) {
      throw InvalidArgument("RectSpectralModel: singular values must be positive and decreasing");
    }
  }
  check_exponents(left_, alpha_, "RectSpectralModel alpha");
  check_exponents(right_, beta_, "RectSpectralModel beta");
}

RectSpectralModel RectSpectralModel::from_dense(const DenseMatrix& m, double drop_tol) {
  Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) {
    throw ZeroMatrix();
  }
  Index r = 0;
  while (r < s.size() && s(r) > drop_tol * s(0)) {
    ++r;
  }
  DenseMatrix u = svd.matrixU().leftCols(r);
  DenseMatrix v = svd.matrixV().leftCols(r);
  for (Index j = 0; j < r; ++j) {
    Vector col = u.col(j);
    fix_sign(col);
    if (col.dot(u.col(j)) < 0.0) {
      u.col(j) = col;
      v.col(j) = -v.col(j);
    }
  }
  auto alpha = m.rows() >= 2 ? fit_alpha(u) : std::vector<double>(r, 0.0);
  auto beta = m.cols() >= 2 ? fit_alpha(v) : std::vector<double>(r, 0.0);
  return RectSpectralModel(s.head(r), std::move(u), std::move(v), std::move(alpha),
                           std::move(beta));
}

double RectSpectralModel::alpha_min() const { return min_of(alpha_, "alpha"); }
double RectSpectralModel::beta_min() const { return min_of(beta_, "beta"); }

DenseMatrix RectSpectralModel::assemble() const {
  return left_ * sigma_.asDiagonal() * right_.transpose();
}

Index support_size(const Vector& x) {
  return (x.array().abs() >= kSupportThreshold).count();
}

std::vector<double> fit_alpha(const DenseMatrix& vectors) {
  const Index n = vectors.rows();
  if (n < 2) {
    throw InvalidArgument("fit_alpha needs n >= 2");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(vectors.cols()));
  for (Index i = 0; i < vectors.cols(); ++i) {
    const Index card = std::max<Index>(1, support_size(vectors.col(i)));
    const double a = std::log(static_cast<double>(card)) / std::log(static_cast<double>(n));
    out.push_back(std::clamp(a, 0.0, 1.0));
  }
  return out;
}

double mu(const SpectralModel& model) {
  if (!model.has_alpha()) {
    throw InvalidArgument("mu needs the sparsity exponents alpha");
  }
  const double n = static_cast<double>(model.n());
  double total = 0.0;
  for (Index i = 0; i < model.rank(); ++i) {
    const double peak = model.eigenvectors().col(i).cwiseAbs().maxCoeff();
    total += std::abs(model.eigenvalue(i)) * std::pow(n, model.alpha()[i]) * peak * peak;
  }
  return total;
}

double mu_rect(const RectSpectralModel& model) {
  if (model.alpha().empty() || model.beta().empty()) {
    throw InvalidArgument("mu_rect needs the sparsity exponents alpha and beta");
  }
  const double n = static_cast<double>(model.n());
  const double m = static_cast<double>(model.m());
  double total = 0.0;
  for (Index i = 0; i < model.rank(); ++i) {
    const double pu = model.left().col(i).cwiseAbs().maxCoeff();
    const double pv = model.right().col(i).cwiseAbs().maxCoeff();
    total += model.singular_values()(i) * std::pow(n, model.alpha()[i] / 2.0) * pu *
             std::pow(m, model.beta()[i] / 2.0) * pv;
  }
  return total;
}

double am07_bound(double entrywise_max, Index n, double p) {
  check_p(p);
  return 4.0 * entrywise_max * std::sqrt(static_cast<double>(n) / p);
}

double am07_bound(const DenseSymmetric& m, double p) {
  return am07_bound(norms(m).entrywise_max, m.size(), p);
}

BoundReport incoherence_bound(const SpectralModel& model, double p, const BoundConfig& config) {
  check_p(p);
  const double a = model.alpha_min();
  const double value =
      2.0 * mu(model) / std::sqrt(p * std::pow(static_cast<double>(model.n()), a));
  return finish_report(value, a, model.n(), p, config);
}

BoundReport rect_bound(const RectSpectralModel& model, double p, const BoundConfig& config) {
  check_p(p);
  const double a = model.alpha_min();
  const double b = model.beta_min();
  const double n = static_cast<double>(model.n());
  const double m = static_cast<double>(model.m());
  const double value = 2.0 * mu_rect(model) / std::sqrt(p * std::pow(n, a / 2.0) * std::pow(m, b / 2.0));
  return finish_report(value, std::min(a, b), model.n(), p, config);
}

double bound_ratio(const DenseSymmetric& m, const SpectralModel& model) {
  const double n = static_cast<double>(m.size());
  return 2.0 * std::pow(n, (model.alpha_min() + 1.0) / 2.0) * norms(m).entrywise_max / mu(model);
}

double separation(const SpectralModel& model, Index k) {
  if (model.n() < 2) {
    throw InvalidArgument("separation needs n >= 2");
  }
  if (k < 0 || k >= model.rank()) {
    throw InvalidArgument("eigenpair index out of range");
  }
  const double lk = model.eigenvalue(k);
  double d = model.has_complement() ? std::abs(lk) : std::numeric_limits<double>::infinity();
  for (Index j = 0; j < model.rank(); ++j) {
    if (j != k) {
      d = std::min(d, std::abs(model.eigenvalue(j) - lk));
    }
  }
  return d;
}

Admissibility perturbation_admissible(const SpectralModel& model, double p, Index k,
                                      const BoundConfig& config) {
  Admissibility out;
  out.bound = incoherence_bound(model, p, config).value;
  out.separation = separation(model, k);
  out.margin = out.separation / 2.0 - out.bound;
  out.ok = out.bound < out.separation / 2.0;
  return out;
}

}  // namespace avgeig
