#pragma once

#include <optional>

#include "avgeig/incoherence.hpp"
#include "avgeig/matrix.hpp"

namespace avgeig {

/// R_k = sum_{j != k} (lambda_j - lambda_k)^(-1) u_j u_j^T, applied from the
/// stored factors. For a low-rank model the implicit zero eigenspace adds
/// -(1 / lambda_k) (I - U U^T). References the model.
class ReducedResolvent {
 public:
  /// Throws DuplicateEigenvalue unless the model's eigenvalues are distinct.
  ReducedResolvent(const SpectralModel& model, Index k);

  Index index() const noexcept { return k_; }
  Index size() const noexcept { return model_->n(); }
  /// d_k; ||R_k||_2 == 1 / d_k.
  double separation() const noexcept { return d_; }
  Vector apply(const Vector& x) const;
  DenseMatrix dense() const;

 private:
  const SpectralModel* model_;
  Index k_;
  double d_;
  Vector coeff_;
  double complement_coeff_ = 0.0;
};

/// Eigenpair of S = M + E nearest in angle to u_k, rescaled so v^T u_k = 1.
struct MatchedEigenpair {
  double value = 0.0;
  Vector vector;
};
MatchedEigenpair exact_eigenvector(const DenseSymmetric& s, const Vector& u);
MatchedEigenpair exact_eigenvector(const SpectralModel& model, Index k, const DenseSymmetric& e);

struct PerturbationExpansion {
  std::size_t order = 0;
  /// lambda_k(S) - lambda_k.
  double gamma = 0.0;
  double norm_e = 0.0;
  double separation = 0.0;
  /// 2 ||E||_2 / d_k.
  double ratio = 0.0;
  /// u - sum_{m=0..j} (-Delta)^m R E u, in the gauge v^T u = 1.
  Vector corrected;
  /// (1/2) ratio^(j+2) / (1 - ratio).
  double error_budget = 0.0;
};

/// Order-j expansion of the k-th eigenvector of M + E. When `lambda_s` is
/// absent the eigenvalue of S is taken from a dense eigensolve.
/// Throws OutsidePerturbativeRegime when 2 ||E||_2 / d_k >= 1.
PerturbationExpansion expand(const SpectralModel& model, Index k, const DenseSymmetric& e,
                             std::size_t order, std::optional<double> lambda_s = std::nullopt);

/// (1/2) ratio^(j+2) / (1 - ratio); infinite for ratio >= 1.
double expansion_error_budget(double ratio, std::size_t order);

/// Delta_k = R_k (E - gamma I), assembled densely.
DenseMatrix delta_operator(const ReducedResolvent& r, const DenseSymmetric& e, double gamma);

/// u - R E u + R (E - (u^T E u) I) R E u.
/// Throws OutsidePerturbativeRegime like expand.
Vector second_order(const SpectralModel& model, Index k, const DenseSymmetric& e);

struct RegularizedVector {
  Vector vector;
  /// True when ||(I + Delta)^(-1)||_2 <= 1/eps and the exact eigenvector was returned.
  bool exact = false;
  /// ||(I + Delta)^(-1)||_2, infinite when I + Delta is singular.
  double inverse_norm = 0.0;
};

/// The exact eigenvector (gauge v^T u = 1) when ||(I + Delta)^(-1)||_2 <= 1/eps,
/// otherwise u - R E u + Delta R E u.
RegularizedVector regularize(const SpectralModel& model, Index k, const DenseSymmetric& e,
                             double lambda_s, double eps);

}  // namespace avgeig
