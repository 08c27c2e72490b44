#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avgeig/eigensolver.hpp"
#include "avgeig/incoherence.hpp"
#include "avgeig/matrix.hpp"

namespace avgeig {

/// How per-draw unit eigenvectors are combined.
enum class Gauge {
  /// nu = sum_i v_i / ||sum_i v_i||.
  AverageThenNormalize,
  /// nu = (1/N) sum_i v_i, not renormalized, so ||nu|| <= 1.
  NormalizeThenAverage,
};

/// "avg-norm" or "norm-avg".
Gauge parse_gauge(const std::string& name);
std::string to_string(Gauge gauge);

struct AveragingPlan {
  double p = 1.0;
  std::size_t num_samples = 1;
  /// 0-based eigenpair index.
  Index k = 0;
  std::uint64_t seed = 0;
  Gauge gauge = Gauge::AverageThenNormalize;
  std::size_t workers = 1;
  EigenOptions eigen;

  void validate() const;
};

struct EstimatorReport {
  Vector nu;
  std::size_t samples = 0;
  /// Eigenvalue of each draw, in draw order.
  std::vector<double> sample_eigenvalues;
  /// The rest is filled only when ground truth is supplied.
  std::optional<double> alignment;
  std::vector<double> per_sample_alignments;
  /// ||nu - u|| after orienting nu towards u.
  std::optional<double> error;
  std::vector<double> per_sample_errors;
  std::optional<double> xi;
  std::optional<double> d;
  /// xi^2 / d^2.
  std::optional<double> predicted_error;
  std::optional<bool> strong_condition_ok;
};

/// Per-draw unit eigenvectors, already oriented consistently.
struct DrawVectors {
  std::vector<Vector> vectors;
  std::vector<double> values;
};

/// Combines oriented draws with the given gauge. Summation is in draw order.
Vector combine_draws(const std::vector<Vector>& vectors, Gauge gauge);

/// Orients every draw towards the index-order sum of the sign-fixed draws,
/// so vectors whose largest components nearly tie still agree in sign.
void orient_draws(std::vector<Vector>& vectors);

/// Eigenvectors of N independently subsampled copies of `m`.
/// Throws AllDrawsFailed when every draw fails to converge, DrawFailed
/// (lowest draw index) when some do.
DrawVectors sample_eigenvectors(const DenseSymmetric& m, const AveragingPlan& plan);
DrawVectors sample_eigenvectors(const SparseCSR& m, const AveragingPlan& plan);

/// Averaged eigenvector estimate of the k-th eigenvector of `m`. With a
/// ground-truth model the report carries alignments, xi and the predicted error.
EstimatorReport estimate(const DenseSymmetric& m, const AveragingPlan& plan,
                         const SpectralModel* truth = nullptr);
EstimatorReport estimate(const SparseCSR& m, const AveragingPlan& plan,
                         const SpectralModel* truth = nullptr);

struct RectEstimatorReport {
  EstimatorReport left;
  EstimatorReport right;
};

/// Averaged k-th left and right singular vectors, from eigensolves of
/// S S^T and S^T S applied matrix-free.
RectEstimatorReport estimate_rect(const DenseMatrix& m, const AveragingPlan& plan,
                                  const RectSpectralModel* truth = nullptr);

/// |u^T nu| / ||nu||.
double alignment(const Vector& u, const Vector& nu);
/// ||nu - u|| with nu flipped towards u.
double oriented_error(const Vector& u, const Vector& nu);

/// mu / sqrt(p n^alpha_min).
double xi(const SpectralModel& model, double p);

/// d >= xi sqrt(ln(xi^-2)); false when xi >= 1, true when xi == 0.
bool strong_separation_ok(double xi, double d);
bool strong_separation_ok(const SpectralModel& model, double p, Index k = 0);

struct VarianceBudget {
  /// Bound on E||R E u_1||^2 from the column norms and M o M.
  double exact_bound = 0.0;
  /// (1 - lambda_2/lambda_1)^-2 ||u_1||_inf^2 NumRank(M) / p.
  double relaxed_bound = 0.0;
  /// False when lambda_1 != ||M||_2, where the relaxed form is not a bound.
  bool lambda1_is_norm = true;
  Vector w1;
  DenseMatrix calm;
};

/// Needs the leading eigenpair of `model` to be that of `m`.
VarianceBudget variance_bound(const DenseSymmetric& m, const SpectralModel& model, double p);

struct UeuVariance {
  /// (1-p)/p (2 w^T (M o M) w - sum_k w_k^2 M_kk^2).
  double closed_form = 0.0;
  /// (1-p)/p (4 sum_{i>j} u_i^2 u_j^2 M_ij^2 + sum_i u_i^4 M_ii^2).
  double pairwise_form = 0.0;
};
UeuVariance var_uEu(const DenseSymmetric& m, const Vector& u, double p);

/// Diagonal of E[E^2]: (1-p) ||M_i||^2 / p.
Vector e_second_moment_diag(const DenseSymmetric& m, double p);

struct MomentBounds {
  double second = 0.0;
  double third = 0.0;
};
/// Bounds on E||E||^2 and E||E||^3 from a median m_E of ||E||.
MomentBounds e_moment_bounds(double entrywise_max, double p, double m_e);

/// 4 exp(-p^2 t^2 / (8 ||M||_inf^2)): deviation bound of ||E|| around its median.
double e_tail_bound(double entrywise_max, double p, double t);

/// Smallest N >= 1 with relaxed_bound / N <= target^2.
std::size_t recommend_samples(const VarianceBudget& variance, double target);

}  // namespace avgeig
