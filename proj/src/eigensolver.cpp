#include "avgeig/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "avgeig/errors.hpp"
#include "avgeig/rng.hpp"

namespace avgeig {

namespace {

constexpr double kDegenerateGap = 1e-10;
constexpr Index kNormBlock = 4;

Vector random_start(Index n, std::uint64_t seed, std::uint64_t stream) {
  RandomStream rng(seed, stream);
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    x[i] = 2.0 * rng.uniform() - 1.0;
  }
  return x;
}

void project_out(Vector& x, const std::vector<EigenPair>& found) {
  for (const auto& pair : found) {
    x -= pair.vector.dot(x) * pair.vector;
  }
}

struct PowerResult {
  bool converged = false;
  double value = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  double magnitude = 0.0;
  std::size_t iterations = 0;
  Vector vector;
};

// Power iteration on (A + shift I) restricted to the complement of `found`.
// Convergence is judged on the unshifted residual ||A x - (x'Ax) x||.
PowerResult power_iterate(const LinearOperator& a, const std::vector<EigenPair>& found,
                          Vector x, double shift, double tol, double scale_floor,
                          std::size_t max_iter) {
  PowerResult out;
  project_out(x, found);
  project_out(x, found);
  double norm = x.norm();
  if (norm == 0.0) {
    // Complement is empty or the start vector degenerated; any unit vector
    // orthogonal to `found` will do.
    x = Vector::Zero(a.rows);
    for (Index i = 0; i < a.rows && norm == 0.0; ++i) {
      x.setZero();
      x[i] = 1.0;
      project_out(x, found);
      norm = x.norm();
    }
  }
  x /= norm;

  Vector y;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    a.apply(x, y);
    const double lambda = x.dot(y);
    const double residual = (y - lambda * x).norm();
    out.iterations = it;
    out.value = lambda;
    out.residual = residual;
    out.magnitude = y.norm();
    const double scale = std::max(std::abs(lambda), scale_floor);
    if (residual <= tol * scale) {
      out.converged = true;
      out.vector = std::move(x);
      return out;
    }
    y += shift * x;
    project_out(y, found);
    const double ynorm = y.norm();
    if (ynorm == 0.0) {
      // x lies in the kernel of the shifted operator.
      out.converged = residual <= tol * scale;
      break;
    }
    x = y / ynorm;
  }
  out.vector = std::move(x);
  return out;
}

}  // namespace

void fix_sign(Vector& v) {
  if (v.size() == 0) {
    return;
  }
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) {
    return;
  }
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= peak * (1.0 - 1e-9)) {
      if (v[i] < 0.0) {
        v = -v;
      }
      return;
    }
  }
}

std::vector<EigenPair> top_k_eigen(const LinearOperator& a, std::size_t k,
                                   const EigenOptions& options) {
  if (a.rows != a.cols) {
    throw ShapeMismatch("top_k_eigen: operator must be square");
  }
  const auto n = static_cast<std::size_t>(a.rows);
  if (k > n) {
    throw InvalidArgument("top_k_eigen: k exceeds the dimension");
  }
  const std::size_t max_iter = options.max_iter ? options.max_iter : 100 * std::max<std::size_t>(n, 1);

  std::vector<EigenPair> found;
  found.reserve(k);
  double scale_floor = 0.0;
  for (std::size_t idx = 0; idx < k; ++idx) {
    const Vector start = random_start(a.rows, options.seed, idx);
    PowerResult result = power_iterate(a, found, start, 0.0, options.tol, scale_floor, max_iter);
    const bool last_direction = idx + 1 == n;
    if (!result.converged || (result.value < 0.0 && !last_direction)) {
      // Either the dominant eigenvalue of the deflated operator is negative
      // (so the largest one is elsewhere) or a +/- pair stalled the
      // iteration. Shifting by the spectral radius estimate makes the
      // algebraically largest eigenvalue dominant.
      const double shift = result.converged ? std::abs(result.value) : result.magnitude;
      const std::size_t used = result.iterations;
      result = power_iterate(a, found, result.converged ? start : result.vector, shift,
                             options.tol, scale_floor, max_iter);
      result.iterations += used;
    }
    if (!result.converged) {
      throw NoConvergence(idx + 1, result.residual,
                          "power iteration did not converge for eigenpair " +
                              std::to_string(idx + 1) + " (residual " +
                              std::to_string(result.residual) + ")");
    }
    if (idx == 0) {
      scale_floor = std::abs(result.value);
    }
    EigenPair pair;
    pair.value = result.value;
    pair.vector = std::move(result.vector);
    pair.residual_norm = result.residual;
    pair.iterations = result.iterations;
    fix_sign(pair.vector);
    found.push_back(std::move(pair));
  }

  if (!found.empty()) {
    const double top = std::abs(found.front().value);
    for (std::size_t i = 0; i + 1 < found.size(); ++i) {
      if (std::abs(found[i].value - found[i + 1].value) < kDegenerateGap * top) {
        found[i].degenerate_gap = true;
        found[i + 1].degenerate_gap = true;
      }
    }
  }
  return found;
}

std::vector<EigenPair> top_k_eigen(const DenseSymmetric& a, std::size_t k,
                                   const EigenOptions& options) {
  return top_k_eigen(as_operator(a), k, options);
}

std::vector<EigenPair> top_k_eigen(const SparseCSR& a, std::size_t k,
                                   const EigenOptions& options) {
  return top_k_eigen(as_operator(a, true), k, options);
}

double spectral_norm(const LinearOperator& a, const NormOptions& options) {
  if (a.rows == 0 || a.cols == 0) {
    return 0.0;
  }
  const std::size_t max_iter =
      options.max_iter ? options.max_iter
                       : 100 * static_cast<std::size_t>(std::max(a.rows, a.cols));
  // Subspace iteration on A^T A with a small block: a single vector stalls
  // when the top two singular values nearly coincide, which is common for
  // symmetric random matrices whose extreme eigenvalues have opposite signs.
  const Index block = std::min<Index>(kNormBlock, a.cols);
  DenseMatrix x(a.cols, block);
  for (Index j = 0; j < block; ++j) {
    x.col(j) = random_start(a.cols, options.seed, 0x5eed + static_cast<std::uint64_t>(j));
  }
  if (options.start) {
    if (options.start->size() != a.cols) {
      throw ShapeMismatch("spectral_norm: start vector has the wrong length");
    }
    if (options.start->norm() > 0.0) {
      x.col(0) = *options.start;
    }
  }
  x = Eigen::HouseholderQR<DenseMatrix>(x).householderQ() * DenseMatrix::Identity(a.cols, block);

  DenseMatrix y(a.rows, block);
  DenseMatrix z(a.cols, block);
  Vector in;
  Vector out;
  double previous = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (Index j = 0; j < block; ++j) {
      in = x.col(j);
      a.apply(in, out);
      y.col(j) = out;
      a.transpose_apply(out, in);
      z.col(j) = in;
    }
    // Top Ritz value of A^T A on span(x); it never decreases between sweeps.
    const DenseMatrix h = y.transpose() * y;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> ritz(h, Eigen::EigenvaluesOnly);
    const double estimate = std::sqrt(std::max(ritz.eigenvalues().maxCoeff(), 0.0));
    if (estimate == 0.0 && z.norm() == 0.0) {
      return 0.0;
    }
    if (it > 0 && estimate - previous <= options.tol * estimate) {
      return estimate;
    }
    previous = estimate;
    x = Eigen::HouseholderQR<DenseMatrix>(z).householderQ() * DenseMatrix::Identity(a.cols, block);
  }
  throw NoConvergence(1, 0.0, "spectral norm iteration did not converge");
}

double spectral_norm(const DenseMatrix& a, const NormOptions& options) {
  return spectral_norm(as_operator(a), options);
}

double spectral_norm(const DenseSymmetric& a, const NormOptions& options) {
  return spectral_norm(as_operator(a), options);
}

double spectral_norm(const SparseCSR& a, const NormOptions& options) {
  return spectral_norm(as_operator(a), options);
}

namespace {

double numerical_rank_from(double frobenius, double spectral) {
  if (frobenius == 0.0 || spectral == 0.0) {
    throw ZeroMatrix();
  }
  return (frobenius * frobenius) / (spectral * spectral);
}

}  // namespace

double numerical_rank(const DenseMatrix& a) {
  return numerical_rank_from(norms(a).frobenius, spectral_norm(a));
}

double numerical_rank(const DenseSymmetric& a) { return numerical_rank(a.matrix()); }

double numerical_rank(const SparseCSR& a) {
  return numerical_rank_from(norms(a).frobenius, spectral_norm(a));
}

DenseEigen dense_eigendecomposition(const DenseSymmetric& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NoConvergence(0, 0.0, "dense eigendecomposition failed");
  }
  const Index n = a.size();
  DenseEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  for (Index j = 0; j < n; ++j) {
    Vector column = out.vectors.col(j);
    fix_sign(column);
    out.vectors.col(j) = column;
  }
  return out;
}

}  // namespace avgeig
