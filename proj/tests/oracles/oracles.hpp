#pragma once

// Reference implementations used only by tests. They are deliberately
// naive: plain loops, no Eigen algorithms, no shared code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "avgeig/rng.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct JacobiResult {
  /// Decreasing.
  Vec values;
  /// Columns match `values`.
  Mat vectors;
};

/// Cyclic Jacobi rotations on a symmetric matrix.
inline JacobiResult jacobi_eigen(Mat a, double tol = 1e-14, int max_sweeps = 100) {
  const auto n = a.rows();
  Mat v = Mat::Identity(n, n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        total += a(i, j) * a(i, j);
        if (i != j) {
          off += a(i, j) * a(i, j);
        }
      }
    }
    if (off <= tol * tol * std::max(total, 1e-300)) {
      break;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) {
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&a](auto x, auto y) { return a(x, x) > a(y, y); });
  JacobiResult out{Vec(n), Mat(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

inline Mat naive_multiply(const Mat& a, const Mat& b) {
  Mat c = Mat::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        s += a(i, k) * b(k, j);
      }
      c(i, j) = s;
    }
  }
  return c;
}

inline Mat naive_transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

/// Largest singular value: sqrt of the top Jacobi eigenvalue of A^T A.
inline double jacobi_spectral_norm(const Mat& a) {
  const auto eig = jacobi_eigen(naive_multiply(naive_transpose(a), a));
  return std::sqrt(std::max(eig.values(0), 0.0));
}

/// Smallest singular value through Jacobi on A^T A.
inline double jacobi_min_singular(const Mat& a) {
  const auto eig = jacobi_eigen(naive_multiply(naive_transpose(a), a));
  return std::sqrt(std::max(eig.values(eig.values.size() - 1), 0.0));
}

inline double naive_frobenius(const Mat& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

inline double naive_max_abs(const Mat& a) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      m = std::max(m, std::abs(a(i, j)));
    }
  }
  return m;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline Vec gauss_solve(Mat a, Vec b) {
  const auto n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) {
        pivot = r;
      }
    }
    if (a(pivot, col) == 0.0) {
      throw std::runtime_error("singular system");
    }
    a.row(col).swap(a.row(pivot));
    std::swap(b(col), b(pivot));
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (Eigen::Index c = col; c < n; ++c) {
        a(r, c) -= f * a(col, c);
      }
      b(r) -= f * b(col);
    }
  }
  Vec x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    double s = b(r);
    for (Eigen::Index c = r + 1; c < n; ++c) {
      s -= a(r, c) * x(c);
    }
    x(r) = s / a(r, r);
  }
  return x;
}

/// Rank by definition: 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> brute_ranks(const Vec& x) {
  std::vector<double> r(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double less = 0;
    double equal = 0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x(j) < x(i)) {
        less += 1;
      } else if (x(j) == x(i)) {
        equal += 1;
      }
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

inline double brute_spearman(const Vec& x, const Vec& y) {
  const auto rx = brute_ranks(x);
  const auto ry = brute_ranks(y);
  const double n = static_cast<double>(rx.size());
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Seed-fixed symmetric matrix with entries uniform in [-1, 1].
inline Mat random_symmetric(Eigen::Index n, std::uint64_t seed) {
  avgeig::RandomStream rng(seed, 0xabc);
  Mat a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      a(i, j) = a(j, i) = 2.0 * rng.uniform() - 1.0;
    }
  }
  return a;
}

inline Mat random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  avgeig::RandomStream rng(seed, 0xdef);
  Mat a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      a(i, j) = 2.0 * rng.uniform() - 1.0;
    }
  }
  return a;
}

/// Random orthonormal columns by modified Gram-Schmidt on Gaussian vectors.
inline Mat random_orthonormal(Eigen::Index n, Eigen::Index r, std::uint64_t seed) {
  avgeig::RandomStream rng(seed, 0x0f0);
  Mat q(n, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i) = rng.normal();
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < j; ++k) {
        double d = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          d += q(i, k) * x(i);
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          x(i) -= d * q(i, k);
        }
      }
    }
    double nn = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      nn += x(i) * x(i);
    }
    q.col(j) = x / std::sqrt(nn);
  }
  return q;
}

/// Angle-independent agreement: 1 - |cos| between two vectors.
inline double misalignment(const Vec& a, const Vec& b) {
  return 1.0 - std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace oracle
