#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "avgeig/matrix.hpp"

namespace avgeig {

/// Parsed Matrix Market file. `entries` holds every stored coefficient with
/// symmetric storage already expanded to both triangles.
struct MatrixMarketData {
  Index rows = 0;
  Index cols = 0;
  bool symmetric = false;
  std::vector<Triplet> entries;
};

/// Reads `coordinate` (real, integer, pattern) and `array` (real, integer)
/// files with `general` or `symmetric` storage. Throws ParseError.
MatrixMarketData read_matrix_market(std::istream& in);
MatrixMarketData read_matrix_market(const std::string& path);

SparseCSR to_sparse(const MatrixMarketData& data);
DenseMatrix to_dense(const MatrixMarketData& data);
/// Throws InvalidArgument when the file does not describe a symmetric matrix.
DenseSymmetric to_dense_symmetric(const MatrixMarketData& data);

/// Coordinate format; with `symmetric`, only the lower triangle is written.
void write_matrix_market(std::ostream& out, const SparseCSR& a, bool symmetric = false);
/// Array format with symmetric storage (lower triangle, column major).
void write_matrix_market(std::ostream& out, const DenseSymmetric& a);
/// Array format, general storage.
void write_matrix_market(std::ostream& out, const DenseMatrix& a);

template <typename Matrix>
void write_matrix_market(const std::string& path, const Matrix& a);

}  // namespace avgeig
