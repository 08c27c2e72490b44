#pragma once

#include <optional>
#include <vector>

#include "avgeig/matrix.hpp"

namespace avgeig {

/// Ground-truth eigendecomposition M = sum_i lambda_i u_i u_i^T.
///
/// Only the r stored pairs need to be given. When r < n the orthogonal
/// complement of the stored vectors is an implicit eigenspace with
/// eigenvalue zero, which counts towards separations and the resolvent.
/// Eigenpair indices are 0-based throughout the library.
class SpectralModel {
 public:
  /// Validates: eigenvectors n x r with U^T U = I to 1e-10, eigenvalues
  /// strictly decreasing (non-increasing when `require_distinct` is false),
  /// alpha empty or of length r with entries in [0, 1] and
  /// Card(u_i) <= ceil(n^alpha_i).
  SpectralModel(Vector eigenvalues, DenseMatrix eigenvectors, std::vector<double> alpha = {},
                std::optional<double> mu_bound = std::nullopt, bool require_distinct = true);

  /// Eigenpairs of `m` with |lambda| > drop_tol * max|lambda|; alpha fitted
  /// from the supports. Ties are allowed unless `require_distinct`.
  static SpectralModel from_dense(const DenseSymmetric& m, double drop_tol = 1e-12,
                                  bool require_distinct = false);

  Index n() const noexcept { return vectors_.rows(); }
  Index rank() const noexcept { return vectors_.cols(); }
  bool has_complement() const noexcept { return rank() < n(); }
  const Vector& eigenvalues() const noexcept { return values_; }
  const DenseMatrix& eigenvectors() const noexcept { return vectors_; }
  double eigenvalue(Index k) const { return values_(k); }
  Vector eigenvector(Index k) const { return vectors_.col(k); }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  bool has_alpha() const noexcept { return !alpha_.empty(); }
  double alpha_min() const;
  const std::optional<double>& mu_bound() const noexcept { return mu_bound_; }
  bool distinct() const noexcept { return distinct_; }

  /// Copy with alpha replaced (validated).
  SpectralModel with_alpha(std::vector<double> alpha) const;
  /// sum_i lambda_i u_i u_i^T.
  DenseSymmetric assemble() const;

 private:
  Vector values_;
  DenseMatrix vectors_;
  std::vector<double> alpha_;
  std::optional<double> mu_bound_;
  bool distinct_ = true;
};

/// Ground-truth SVD M = sum_i sigma_i u_i v_i^T of an n x m matrix.
class RectSpectralModel {
 public:
  RectSpectralModel(Vector singular_values, DenseMatrix left, DenseMatrix right,
                    std::vector<double> alpha = {}, std::vector<double> beta = {});

  /// Singular triplets of `m` with sigma > drop_tol * sigma_1, exponents fitted.
  static RectSpectralModel from_dense(const DenseMatrix& m, double drop_tol = 1e-12);

  Index n() const noexcept { return left_.rows(); }
  Index m() const noexcept { return right_.rows(); }
  Index rank() const noexcept { return left_.cols(); }
  /// m / n.
  double rho() const noexcept { return static_cast<double>(m()) / static_cast<double>(n()); }
  const Vector& singular_values() const noexcept { return sigma_; }
  const DenseMatrix& left() const noexcept { return left_; }
  const DenseMatrix& right() const noexcept { return right_; }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  const std::vector<double>& beta() const noexcept { return beta_; }
  double alpha_min() const;
  double beta_min() const;
  DenseMatrix assemble() const;

 private:
  Vector sigma_;
  DenseMatrix left_;
  DenseMatrix right_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

/// Components with |x_i| below this count as zero when measuring supports.
inline constexpr double kSupportThreshold = 1e-12;

/// Number of components with |x_i| >= kSupportThreshold.
Index support_size(const Vector& x);
/// alpha_i = log(Card(u_i)) / log(n) for every column, clamped to [0, 1].
/// Throws InvalidArgument for n < 2.
std::vector<double> fit_alpha(const DenseMatrix& vectors);

/// sum_i |lambda_i| n^alpha_i ||u_i||_inf^2. Needs alpha.
double mu(const SpectralModel& model);
/// sum_i sigma_i n^(alpha_i/2) ||u_i||_inf m^(beta_i/2) ||v_i||_inf.
double mu_rect(const RectSpectralModel& model);

/// 4 ||M||_inf sqrt(n / p).
double am07_bound(double entrywise_max, Index n, double p);
double am07_bound(const DenseSymmetric& m, double p);

struct BoundConfig {
  /// Finite-n stand-in for (alpha_min log n)^4 / (p n^alpha_min) -> 0.
  double ratio_threshold = 0.1;
  /// delta in alpha_min > (log n)^((delta - 3) / 4).
  double delta = 1.0;
};

struct BoundReport {
  double value = 0.0;
  /// (alpha_min log n)^4 / (p n^alpha_min).
  double hypothesis_ratio = 0.0;
  /// (log n)^((delta - 3) / 4).
  double alpha_floor = 0.0;
  /// hypothesis_ratio < threshold and alpha_min > alpha_floor.
  bool hypotheses_ok = false;
};

/// 2 mu (p n^alpha_min)^(-1/2) with the hypothesis diagnostics.
BoundReport incoherence_bound(const SpectralModel& model, double p, const BoundConfig& config = {});
/// 2 mu / sqrt(p n^(alpha_min/2) m^(beta_min/2)).
BoundReport rect_bound(const RectSpectralModel& model, double p, const BoundConfig& config = {});

/// am07_bound / incoherence_bound = 2 n^((alpha_min+1)/2) ||M||_inf / mu.
double bound_ratio(const DenseSymmetric& m, const SpectralModel& model);

/// Distance from lambda_k to the nearest other eigenvalue, including the
/// implicit zero eigenvalue of a low-rank model.
double separation(const SpectralModel& model, Index k);

struct Admissibility {
  bool ok = false;
  /// d_k / 2 - bound.
  double margin = 0.0;
  double bound = 0.0;
  double separation = 0.0;
};

/// Whether the incoherence bound lies strictly below half the separation of lambda_k.
Admissibility perturbation_admissible(const SpectralModel& model, double p, Index k,
                                      const BoundConfig& config = {});

}  // namespace avgeig
