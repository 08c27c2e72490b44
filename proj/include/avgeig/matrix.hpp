#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace avgeig {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Dense symmetric matrix. Symmetry is exact: the upper triangle is mirrored
/// on ingest, so entry(i, j) == entry(j, i) bit for bit.
class DenseSymmetric {
 public:
  /// Accepts `m` if it is square and symmetric to within `tol * max|m_ij|`,
  /// then mirrors the upper triangle. Throws InvalidArgument otherwise.
  explicit DenseSymmetric(const DenseMatrix& m, double tol = 1e-12);

  /// Mirrors the upper triangle of a square matrix without checking the lower.
  static DenseSymmetric from_upper(const DenseMatrix& m);
  static DenseSymmetric identity(Index n);
  static DenseSymmetric zero(Index n);
  static DenseSymmetric diagonal(const Vector& d);

  Index size() const noexcept { return data_.rows(); }
  double operator()(Index i, Index j) const { return data_(i, j); }
  const DenseMatrix& matrix() const noexcept { return data_; }

  Vector apply(const Vector& x) const { return data_ * x; }

 private:
  struct Trusted {};
  DenseSymmetric(DenseMatrix m, Trusted) : data_(std::move(m)) {}

  DenseMatrix data_;
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row and no explicit zeros are stored.
class SparseCSR {
 public:
  SparseCSR() = default;

  /// Validating constructor over raw CSR arrays. Explicit zeros are pruned.
  SparseCSR(Index rows, Index cols, std::vector<std::int64_t> row_ptr,
            std::vector<std::int64_t> col_idx, std::vector<double> values);

  /// Duplicate coordinates are summed; zeros (including cancellations) pruned.
  static SparseCSR from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static SparseCSR from_dense(const DenseMatrix& m);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  std::int64_t nnz() const noexcept { return static_cast<std::int64_t>(values_.size()); }

  std::span<const std::int64_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::int64_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Value at (i, j), zero when not stored. O(log nnz(row)).
  double coeff(Index i, Index j) const;

  /// y = A x
  void multiply(const Vector& x, Vector& y) const;
  /// y = A^T x
  void multiply_transpose(const Vector& x, Vector& y) const;
  Vector operator*(const Vector& x) const;

  DenseMatrix to_dense() const;
  bool is_symmetric() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int64_t> col_idx_;
  std::vector<double> values_;
};

/// Matrix-free linear operator. `apply_transpose` may be left empty for
/// operators flagged symmetric.
struct LinearOperator {
  Index rows = 0;
  Index cols = 0;
  bool symmetric = false;
  std::function<void(const Vector&, Vector&)> apply;
  std::function<void(const Vector&, Vector&)> apply_transpose;

  void transpose_apply(const Vector& x, Vector& y) const {
    if (symmetric) {
      apply(x, y);
    } else {
      apply_transpose(x, y);
    }
  }
};

/// The returned operators reference their argument; it must outlive them.
LinearOperator as_operator(const DenseSymmetric& a);
LinearOperator as_operator(const DenseMatrix& a);
LinearOperator as_operator(const SparseCSR& a, bool symmetric = false);

/// x -> A^T A x for `a` of shape m x n (an n x n symmetric operator).
LinearOperator gram_operator(const LinearOperator& a);
/// x -> A A^T x (an m x m symmetric operator).
LinearOperator outer_gram_operator(const LinearOperator& a);
/// x -> A x - B x.
LinearOperator difference_operator(const LinearOperator& a, const LinearOperator& b);

struct MatrixNorms {
  double frobenius = 0.0;
  double entrywise_max = 0.0;
};

MatrixNorms norms(const DenseMatrix& a);
MatrixNorms norms(const DenseSymmetric& a);
MatrixNorms norms(const SparseCSR& a);

/// Entrywise (Hadamard) product.
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
DenseSymmetric hadamard(const DenseSymmetric& a, const DenseSymmetric& b);
SparseCSR hadamard(const SparseCSR& a, const DenseMatrix& b);

}  // namespace avgeig
