#include "avgeig/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "avgeig/errors.hpp"

namespace avgeig {

DenseSymmetric::DenseSymmetric(const DenseMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw ShapeMismatch("symmetric matrix must be square");
  }
  if (m.rows() < 1) {
    throw InvalidArgument("symmetric matrix must have n >= 1");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double gap = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(gap <= tol * scale)) {
    throw InvalidArgument("matrix is not symmetric (max |a_ij - a_ji| = " +
                          std::to_string(gap) + ")");
  }
  *this = from_upper(m);
}

DenseSymmetric DenseSymmetric::from_upper(const DenseMatrix& m) {
  if (m.rows() != m.cols()) {
    throw ShapeMismatch("symmetric matrix must be square");
  }
  if (m.rows() < 1) {
    throw InvalidArgument("symmetric matrix must have n >= 1");
  }
  DenseMatrix data = m;
  for (Index j = 0; j < data.cols(); ++j) {
    for (Index i = j + 1; i < data.rows(); ++i) {
      data(i, j) = data(j, i);
    }
  }
  return DenseSymmetric(std::move(data), Trusted{});
}

DenseSymmetric DenseSymmetric::identity(Index n) {
  return from_upper(DenseMatrix::Identity(n, n));
}

DenseSymmetric DenseSymmetric::zero(Index n) { return from_upper(DenseMatrix::Zero(n, n)); }

DenseSymmetric DenseSymmetric::diagonal(const Vector& d) {
  return from_upper(d.asDiagonal().toDenseMatrix());
}

SparseCSR::SparseCSR(Index rows, Index cols, std::vector<std::int64_t> row_ptr,
                     std::vector<std::int64_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw InvalidArgument("negative dimension");
  }
  if (row_ptr.size() != static_cast<std::size_t>(rows) + 1 || row_ptr.front() != 0) {
    throw InvalidArgument("row_ptr must have length rows + 1 and start at 0");
  }
  if (col_idx.size() != values.size() ||
      row_ptr.back() != static_cast<std::int64_t>(values.size())) {
    throw InvalidArgument("row_ptr[rows] must equal nnz");
  }
  row_ptr_.assign(1, 0);
  row_ptr_.reserve(row_ptr.size());
  col_idx_.reserve(col_idx.size());
  values_.reserve(values.size());
  for (Index i = 0; i < rows; ++i) {
    if (row_ptr[i + 1] < row_ptr[i]) {
      throw InvalidArgument("row_ptr must be nondecreasing");
    }
    for (std::int64_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (col_idx[k] < 0 || col_idx[k] >= cols) {
        throw InvalidArgument("column index out of range");
      }
      if (k > row_ptr[i] && col_idx[k] <= col_idx[k - 1]) {
        throw InvalidArgument("column indices must be strictly increasing within a row");
      }
      if (values[k] != 0.0) {
        col_idx_.push_back(col_idx[k]);
        values_.push_back(values[k]);
      }
    }
    row_ptr_.push_back(static_cast<std::int64_t>(values_.size()));
  }
}

SparseCSR SparseCSR::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw InvalidArgument("triplet index out of range");
    }
    ++counts[t.row + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  std::vector<std::int64_t> cursor(counts.begin(), counts.end() - 1);
  std::vector<std::int64_t> cols_sorted(triplets.size());
  std::vector<double> vals_sorted(triplets.size());
  for (const auto& t : triplets) {
    const auto pos = cursor[t.row]++;
    cols_sorted[pos] = t.col;
    vals_sorted[pos] = t.value;
  }

  SparseCSR out;
  out.rows_ = rows;
  out.cols_ = cols;
  out.row_ptr_.assign(1, 0);
  out.row_ptr_.reserve(static_cast<std::size_t>(rows) + 1);
  out.col_idx_.reserve(triplets.size());
  out.values_.reserve(triplets.size());
  std::vector<std::int64_t> order;
  for (Index i = 0; i < rows; ++i) {
    const auto begin = counts[i];
    const auto end = counts[i + 1];
    order.resize(static_cast<std::size_t>(end - begin));
    std::iota(order.begin(), order.end(), begin);
    if (!std::is_sorted(order.begin(), order.end(), [&](auto a, auto b) {
          return cols_sorted[a] < cols_sorted[b];
        })) {
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto b) { return cols_sorted[a] < cols_sorted[b]; });
    }
    for (std::size_t k = 0; k < order.size();) {
      const auto col = cols_sorted[order[k]];
      double sum = 0.0;
      for (; k < order.size() && cols_sorted[order[k]] == col; ++k) {
        sum += vals_sorted[order[k]];
      }
      if (sum != 0.0) {
        out.col_idx_.push_back(col);
        out.values_.push_back(sum);
      }
    }
    out.row_ptr_.push_back(static_cast<std::int64_t>(out.values_.size()));
  }
  return out;
}

SparseCSR SparseCSR::from_dense(const DenseMatrix& m) {
  std::vector<Triplet> triplets;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) {
        triplets.push_back({i, j, m(i, j)});
      }
    }
  }
  return from_triplets(m.rows(), m.cols(), std::move(triplets));
}

double SparseCSR::coeff(Index i, Index j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, static_cast<std::int64_t>(j));
  if (it == end || *it != j) {
    return 0.0;
  }
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseCSR::multiply(const Vector& x, Vector& y) const {
  y.resize(rows_);
  const double* vals = values_.data();
  const std::int64_t* cols = col_idx_.data();
  for (Index i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      sum += vals[k] * x[cols[k]];
    }
    y[i] = sum;
  }
}

void SparseCSR::multiply_transpose(const Vector& x, Vector& y) const {
  y.setZero(cols_);
  for (Index i = 0; i < rows_; ++i) {
    const double xi = x[i];
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      y[col_idx_[k]] += values_[k] * xi;
    }
  }
}

Vector SparseCSR::operator*(const Vector& x) const {
  Vector y;
  multiply(x, y);
  return y;
}

DenseMatrix SparseCSR::to_dense() const {
  DenseMatrix out = DenseMatrix::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i) {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      out(i, col_idx_[k]) = values_[k];
    }
  }
  return out;
}

bool SparseCSR::is_symmetric() const {
  if (rows_ != cols_) {
    return false;
  }
  for (Index i = 0; i < rows_; ++i) {
    for (std::int64_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (coeff(col_idx_[k], i) != values_[k]) {
        return false;
      }
    }
  }
  return true;
}

LinearOperator as_operator(const DenseSymmetric& a) {
  LinearOperator op;
  op.rows = op.cols = a.size();
  op.symmetric = true;
  op.apply = [&a](const Vector& x, Vector& y) { y.noalias() = a.matrix() * x; };
  return op;
}

LinearOperator as_operator(const DenseMatrix& a) {
  LinearOperator op;
  op.rows = a.rows();
  op.cols = a.cols();
  op.apply = [&a](const Vector& x, Vector& y) { y.noalias() = a * x; };
  op.apply_transpose = [&a](const Vector& x, Vector& y) { y.noalias() = a.transpose() * x; };
  return op;
}

LinearOperator as_operator(const SparseCSR& a, bool symmetric) {
  LinearOperator op;
  op.rows = a.rows();
  op.cols = a.cols();
  op.symmetric = symmetric;
  op.apply = [&a](const Vector& x, Vector& y) { a.multiply(x, y); };
  op.apply_transpose = [&a](const Vector& x, Vector& y) { a.multiply_transpose(x, y); };
  return op;
}

LinearOperator gram_operator(const LinearOperator& a) {
  LinearOperator op;
  op.rows = op.cols = a.cols;
  op.symmetric = true;
  op.apply = [a](const Vector& x, Vector& y) {
    Vector tmp;
    a.apply(x, tmp);
    a.transpose_apply(tmp, y);
  };
  return op;
}

LinearOperator outer_gram_operator(const LinearOperator& a) {
  LinearOperator op;
  op.rows = op.cols = a.rows;
  op.symmetric = true;
  op.apply = [a](const Vector& x, Vector& y) {
    Vector tmp;
    a.transpose_apply(x, tmp);
    a.apply(tmp, y);
  };
  return op;
}

LinearOperator difference_operator(const LinearOperator& a, const LinearOperator& b) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw ShapeMismatch("operator shapes differ");
  }
  LinearOperator op;
  op.rows = a.rows;
  op.cols = a.cols;
  op.symmetric = a.symmetric && b.symmetric;
  op.apply = [a, b](const Vector& x, Vector& y) {
    Vector tmp;
    a.apply(x, y);
    b.apply(x, tmp);
    y -= tmp;
  };
  op.apply_transpose = [a, b](const Vector& x, Vector& y) {
    Vector tmp;
    a.transpose_apply(x, y);
    b.transpose_apply(x, tmp);
    y -= tmp;
  };
  return op;
}

MatrixNorms norms(const DenseMatrix& a) {
  if (a.size() == 0) {
    return {};
  }
  return {a.norm(), a.cwiseAbs().maxCoeff()};
}

MatrixNorms norms(const DenseSymmetric& a) { return norms(a.matrix()); }

MatrixNorms norms(const SparseCSR& a) {
  MatrixNorms out;
  double sum = 0.0;
  for (double v : a.values()) {
    sum += v * v;
    out.entrywise_max = std::max(out.entrywise_max, std::abs(v));
  }
  out.frobenius = std::sqrt(sum);
  return out;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch("hadamard: shapes differ");
  }
  return a.cwiseProduct(b);
}

DenseSymmetric hadamard(const DenseSymmetric& a, const DenseSymmetric& b) {
  return DenseSymmetric::from_upper(hadamard(a.matrix(), b.matrix()));
}

SparseCSR hadamard(const SparseCSR& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch("hadamard: shapes differ");
  }
  std::vector<std::int64_t> row_ptr(a.row_ptr().begin(), a.row_ptr().end());
  std::vector<std::int64_t> col_idx(a.col_idx().begin(), a.col_idx().end());
  std::vector<double> values(a.values().begin(), a.values().end());
  for (Index i = 0; i < a.rows(); ++i) {
    for (auto k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      values[k] *= b(i, col_idx[k]);
    }
  }
  return SparseCSR(a.rows(), a.cols(), std::move(row_ptr), std::move(col_idx),
                   std::move(values));
}

}  // namespace avgeig
