#pragma once

#include <cstdint>
#include <vector>

#include "avgeig/matrix.hpp"

namespace avgeig {

struct EigenOptions {
  /// Residual tolerance relative to |lambda_1|.
  double tol = 1e-10;
  /// 0 selects 100 * n.
  std::size_t max_iter = 0;
  std::uint64_t seed = 0;
};

struct EigenPair {
  double value = 0.0;
  Vector vector;
  double residual_norm = 0.0;
  std::size_t iterations = 0;
  /// Set when |lambda_k - lambda_{k+1}| / |lambda_1| < 1e-10 among the
  /// returned pairs; the pair is still returned.
  bool degenerate_gap = false;
};

/// Leading `k` eigenpairs of a symmetric operator in decreasing eigenvalue
/// order, by power iteration with deflation against the pairs already found.
/// Each vector has its largest-magnitude component positive.
/// Throws NoConvergence when a pair misses the tolerance within max_iter.
std::vector<EigenPair> top_k_eigen(const LinearOperator& a, std::size_t k,
                                   const EigenOptions& options = {});
std::vector<EigenPair> top_k_eigen(const DenseSymmetric& a, std::size_t k,
                                   const EigenOptions& options = {});
/// `a` must be symmetric (guaranteed by symmetric sampling).
std::vector<EigenPair> top_k_eigen(const SparseCSR& a, std::size_t k,
                                   const EigenOptions& options = {});

struct NormOptions {
  double tol = 1e-10;
  std::size_t max_iter = 0;
  std::uint64_t seed = 0;
  /// Optional starting vector (length a.cols).
  const Vector* start = nullptr;
};

/// Largest singular value by block power iteration on A^T A with a
/// Rayleigh-Ritz step. The estimate is a lower bound that increases
/// monotonically with the iteration count; with `start` it is never below
/// ||A start|| / ||start||.
double spectral_norm(const LinearOperator& a, const NormOptions& options = {});
double spectral_norm(const DenseMatrix& a, const NormOptions& options = {});
double spectral_norm(const DenseSymmetric& a, const NormOptions& options = {});
double spectral_norm(const SparseCSR& a, const NormOptions& options = {});

/// ||A||_F^2 / ||A||_2^2. Throws ZeroMatrix for A == 0.
double numerical_rank(const DenseMatrix& a);
double numerical_rank(const DenseSymmetric& a);
double numerical_rank(const SparseCSR& a);

/// Flips `v` so its largest-magnitude component is positive. Components
/// within a relative 1e-9 of the maximum count as tied; the lowest index wins.
void fix_sign(Vector& v);

/// Full dense decomposition, eigenvalues decreasing, columns sign-fixed.
struct DenseEigen {
  Vector values;
  DenseMatrix vectors;
};
DenseEigen dense_eigendecomposition(const DenseSymmetric& a);

}  // namespace avgeig
