#include "avgeig/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "avgeig/errors.hpp"

namespace avgeig {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%';
}

}  // namespace

MatrixMarketData read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError(1, "empty input");
  }
  ++line_no;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix") {
    throw ParseError(line_no, "missing %%MatrixMarket matrix banner");
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "coordinate" && format != "array") {
    throw ParseError(line_no, "unsupported format '" + format + "'");
  }
  if (field != "real" && field != "integer" && field != "double" &&
      !(field == "pattern" && format == "coordinate")) {
    throw ParseError(line_no, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError(line_no, "unsupported symmetry '" + symmetry + "'");
  }

  MatrixMarketData data;
  data.symmetric = symmetry == "symmetric";
  const bool pattern = field == "pattern";

  while (std::getline(in, line)) {
    ++line_no;
    if (!blank_or_comment(line)) {
      break;
    }
  }
  std::istringstream size_line(line);
  long long rows = -1, cols = -1, declared = -1;
  size_line >> rows >> cols;
  if (format == "coordinate") {
    size_line >> declared;
  }
  if (!size_line || rows < 0 || cols < 0 || (format == "coordinate" && declared < 0)) {
    throw ParseError(line_no, "malformed size line");
  }
  if (data.symmetric && rows != cols) {
    throw ParseError(line_no, "symmetric storage requires a square matrix");
  }
  data.rows = rows;
  data.cols = cols;

  auto add = [&](Index i, Index j, double v) {
    data.entries.push_back({i, j, v});
    if (data.symmetric && i != j) {
      data.entries.push_back({j, i, v});
    }
  };

  if (format == "coordinate") {
    long long seen = 0;
    while (seen < declared && std::getline(in, line)) {
      ++line_no;
      if (blank_or_comment(line)) {
        continue;
      }
      std::istringstream entry(line);
      long long i = 0, j = 0;
      double v = 1.0;
      entry >> i >> j;
      if (!pattern) {
        entry >> v;
      }
      if (!entry) {
        throw ParseError(line_no, "malformed entry");
      }
      if (i < 1 || i > rows || j < 1 || j > cols) {
        throw ParseError(line_no, "index out of range");
      }
      if (data.symmetric && j > i) {
        throw ParseError(line_no, "symmetric storage expects the lower triangle");
      }
      add(i - 1, j - 1, v);
      ++seen;
    }
    if (seen != declared) {
      throw ParseError(line_no, "expected " + std::to_string(declared) + " entries, found " +
                                    std::to_string(seen));
    }
  } else {
    // Column-major; symmetric storage lists the lower triangle only.
    for (long long j = 0; j < cols; ++j) {
      for (long long i = data.symmetric ? j : 0; i < rows; ++i) {
        do {
          if (!std::getline(in, line)) {
            throw ParseError(line_no, "unexpected end of array data");
          }
          ++line_no;
        } while (blank_or_comment(line));
        std::istringstream entry(line);
        double v = 0.0;
        if (!(entry >> v)) {
          throw ParseError(line_no, "malformed value");
        }
        if (v != 0.0) {
          add(i, j, v);
        }
      }
    }
  }
  return data;
}

MatrixMarketData read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(0, "cannot open '" + path + "'");
  }
  return read_matrix_market(in);
}

SparseCSR to_sparse(const MatrixMarketData& data) {
  return SparseCSR::from_triplets(data.rows, data.cols, data.entries);
}

DenseMatrix to_dense(const MatrixMarketData& data) {
  DenseMatrix out = DenseMatrix::Zero(data.rows, data.cols);
  for (const auto& t : data.entries) {
    out(t.row, t.col) += t.value;
  }
  return out;
}

DenseSymmetric to_dense_symmetric(const MatrixMarketData& data) {
  return DenseSymmetric(to_dense(data));
}

void write_matrix_market(std::ostream& out, const SparseCSR& a, bool symmetric) {
  if (symmetric && !a.is_symmetric()) {
    throw InvalidArgument("matrix is not symmetric");
  }
  std::int64_t count = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      if (!symmetric || a.col_idx()[k] <= i) {
        ++count;
      }
    }
  }
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general")
      << '\n'
      << a.rows() << ' ' << a.cols() << ' ' << count << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < a.rows(); ++i) {
    for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      const auto j = a.col_idx()[k];
      if (!symmetric || j <= i) {
        out << i + 1 << ' ' << j + 1 << ' ' << a.values()[k] << '\n';
      }
    }
  }
}

void write_matrix_market(std::ostream& out, const DenseSymmetric& a) {
  out << "%%MatrixMarket matrix array real symmetric\n" << a.size() << ' ' << a.size() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < a.size(); ++j) {
    for (Index i = j; i < a.size(); ++i) {
      out << a(i, j) << '\n';
    }
  }
}

void write_matrix_market(std::ostream& out, const DenseMatrix& a) {
  out << "%%MatrixMarket matrix array real general\n" << a.rows() << ' ' << a.cols() << '\n';
  out << std::setprecision(17);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out << a(i, j) << '\n';
    }
  }
}

template <typename Matrix>
void write_matrix_market(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument("cannot write '" + path + "'");
  }
  write_matrix_market(out, a);
}

template void write_matrix_market<SparseCSR>(const std::string&, const SparseCSR&);
template void write_matrix_market<DenseSymmetric>(const std::string&, const DenseSymmetric&);
template void write_matrix_market<DenseMatrix>(const std::string&, const DenseMatrix&);

}  // namespace avgeig
