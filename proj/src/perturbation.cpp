#include "avgeig/perturbation.hpp"

#include <cmath>
#include <limits>

#include "avgeig/eigensolver.hpp"
#include "avgeig/errors.hpp"

namespace avgeig {

namespace {

double dense_norm(const DenseSymmetric& e) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(e.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

void check_shape(const SpectralModel& model, const DenseSymmetric& e) {
  if (e.size() != model.n()) {
    throw ShapeMismatch("perturbation size differs from the model");
  }
}

}  // namespace

ReducedResolvent::ReducedResolvent(const SpectralModel& model, Index k)
    : model_(&model), k_(k), d_(avgeig::separation(model, k)) {
  if (!model.distinct()) {
    throw DuplicateEigenvalue("reduced resolvent needs distinct eigenvalues");
  }
  const double lk = model.eigenvalue(k);
  coeff_ = Vector::Zero(model.rank());
  for (Index j = 0; j < model.rank(); ++j) {
    if (j != k) {
      coeff_(j) = 1.0 / (model.eigenvalue(j) - lk);
    }
  }
  if (model.has_complement()) {
    complement_coeff_ = -1.0 / lk;
  }
}

Vector ReducedResolvent::apply(const Vector& x) const {
  const DenseMatrix& u = model_->eigenvectors();
  const Vector proj = u.transpose() * x;
  Vector y = u * coeff_.cwiseProduct(proj);
  if (complement_coeff_ != 0.0) {
    y += complement_coeff_ * (x - u * proj);
  }
  return y;
}

DenseMatrix ReducedResolvent::dense() const {
  const DenseMatrix& u = model_->eigenvectors();
  DenseMatrix r = u * coeff_.asDiagonal() * u.transpose();
  if (complement_coeff_ != 0.0) {
    r += complement_coeff_ * (DenseMatrix::Identity(size(), size()) - u * u.transpose());
  }
  return r;
}

MatchedEigenpair exact_eigenvector(const DenseSymmetric& s, const Vector& u) {
  if (s.size() != u.size()) {
    throw ShapeMismatch("exact_eigenvector: sizes differ");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(s.matrix());
  Index best = 0;
  (solver.eigenvectors().transpose() * u).cwiseAbs().maxCoeff(&best);
  Vector v = solver.eigenvectors().col(best);
  v /= v.dot(u);
  return {solver.eigenvalues()(best), std::move(v)};
}

MatchedEigenpair exact_eigenvector(const SpectralModel& model, Index k, const DenseSymmetric& e) {
  check_shape(model, e);
  return exact_eigenvector(DenseSymmetric::from_upper(model.assemble().matrix() + e.matrix()),
                           model.eigenvector(k));
}

double expansion_error_budget(double ratio, std::size_t order) {
  if (ratio >= 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 0.5 * std::pow(ratio, static_cast<double>(order) + 2.0) / (1.0 - ratio);
}

PerturbationExpansion expand(const SpectralModel& model, Index k, const DenseSymmetric& e,
                             std::size_t order, std::optional<double> lambda_s) {
  check_shape(model, e);
  const ReducedResolvent r(model, k);
  PerturbationExpansion out;
  out.order = order;
  out.norm_e = dense_norm(e);
  out.separation = r.separation();
  out.ratio = 2.0 * out.norm_e / out.separation;
  if (out.ratio >= 1.0) {
    throw OutsidePerturbativeRegime(out.ratio);
  }
  const double ls = lambda_s ? *lambda_s : exact_eigenvector(model, k, e).value;
  out.gamma = ls - model.eigenvalue(k);

  const Vector u = model.eigenvector(k);
  Vector term = r.apply(e.apply(u));
  Vector sum = term;
  for (std::size_t m = 1; m <= order; ++m) {
    term = -r.apply(e.apply(term) - out.gamma * term);
    sum += term;
  }
  out.corrected = u - sum;
  out.error_budget = out.norm_e == 0.0 ? 0.0 : expansion_error_budget(out.ratio, order);
  return out;
}

DenseMatrix delta_operator(const ReducedResolvent& r, const DenseSymmetric& e, double gamma) {
  DenseMatrix shifted = e.matrix();
  shifted.diagonal().array() -= gamma;
  return r.dense() * shifted;
}

Vector second_order(const SpectralModel& model, Index k, const DenseSymmetric& e) {
  check_shape(model, e);
  const ReducedResolvent r(model, k);
  const double ratio = 2.0 * dense_norm(e) / r.separation();
  if (ratio >= 1.0) {
    throw OutsidePerturbativeRegime(ratio);
  }
  const Vector u = model.eigenvector(k);
  const Vector eu = e.apply(u);
  const Vector reu = r.apply(eu);
  const double shift = u.dot(eu);
  return u - reu + r.apply(e.apply(reu) - shift * reu);
}

RegularizedVector regularize(const SpectralModel& model, Index k, const DenseSymmetric& e,
                             double lambda_s, double eps) {
  if (!(eps > 0.0)) {
    throw InvalidArgument("regularize needs eps > 0");
  }
  check_shape(model, e);
  const ReducedResolvent r(model, k);
  const double gamma = lambda_s - model.eigenvalue(k);
  DenseMatrix id_delta = delta_operator(r, e, gamma);
  const Vector u = model.eigenvector(k);
  const Vector reu = r.apply(e.apply(u));
  const Vector delta_reu = id_delta * reu;
  id_delta.diagonal().array() += 1.0;

  Eigen::JacobiSVD<DenseMatrix> svd(id_delta);
  const double smin = svd.singularValues().minCoeff();
  RegularizedVector out;
  out.inverse_norm = smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
  if (out.inverse_norm <= 1.0 / eps) {
    out.exact = true;
    out.vector = exact_eigenvector(model, k, e).vector;
  } else {
    out.vector = u - reu + delta_reu;
  }
  return out;
}

}  // namespace avgeig
