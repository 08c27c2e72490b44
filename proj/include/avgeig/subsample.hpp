#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "avgeig/matrix.hpp"
#include "avgeig/rng.hpp"

namespace avgeig {

/// Elementwise Bernoulli sampling parameters. `stream` selects an
/// independent random stream for the same seed; Monte Carlo loops pass the
/// draw index.
struct SampleConfig {
  double p = 1.0;
  std::uint64_t seed = 0;
  /// Sample i <= j and mirror, so the sample of a symmetric matrix stays
  /// symmetric. The diagonal is sampled like any other entry.
  bool symmetric = true;
  std::uint64_t stream = 0;

  /// Throws InvalidArgument unless 0 < p <= 1.
  void validate() const;
};

/// One subsampled matrix S with S_ij = M_ij / p on retained entries.
struct SampleDraw {
  SparseCSR s;
  SampleConfig config;
  /// Retained positions (upper triangle when symmetric), counted before
  /// zero entries of M are pruned.
  std::int64_t kept_count = 0;
};

/// Visits the positions retained by independent Bernoulli(p) trials, in
/// row-major order over the upper triangle (symmetric) or the full matrix.
/// Uses geometric skipping, so the cost is proportional to the number kept.
template <typename Visit>
void for_each_kept(Index rows, Index cols, double p, bool symmetric, RandomStream& rng,
                   Visit&& visit) {
  if (p <= 0.0 || rows == 0 || cols == 0) {
    return;
  }
  const double log_q = std::log1p(-p);
  auto row_start = [symmetric](Index r) { return symmetric ? r : Index{0}; };
  Index i = 0;
  Index j = row_start(0);
  while (i < rows) {
    if (p < 1.0) {
      const double gap = std::floor(std::log(rng.uniform_open_low()) / log_q);
      if (gap > 9.0e18) {
        return;
      }
      auto skip = static_cast<std::uint64_t>(gap);
      while (skip > 0) {
        const auto remaining = static_cast<std::uint64_t>(cols - j);
        if (skip < remaining) {
          j += static_cast<Index>(skip);
          skip = 0;
        } else {
          skip -= remaining;
          if (++i >= rows) {
            return;
          }
          j = row_start(i);
        }
      }
    }
    visit(i, j);
    if (++j == cols) {
      if (++i >= rows) {
        return;
      }
      j = row_start(i);
    }
  }
}

/// S of a dense symmetric matrix. Identical (M, cfg) give bit-identical S.
SampleDraw draw_sample(const DenseSymmetric& m, const SampleConfig& cfg);
/// S of a general (possibly rectangular) matrix; cfg.symmetric must be false
/// unless the matrix is square.
SampleDraw draw_sample(const DenseMatrix& m, const SampleConfig& cfg);
/// S of a matrix given by an entry accessor, for operators that are never
/// materialised densely.
SampleDraw draw_sample(Index rows, Index cols, const std::function<double(Index, Index)>& entry,
                       const SampleConfig& cfg);

/// Symmetric centred Bernoulli matrix C: entries sqrt((1-p)/p) with
/// probability p, -sqrt(p/(1-p)) otherwise. Stored as the 0/1 pattern of the
/// positive entries, so C = (a + b) P - b 11^T.
class CenteredBernoulliMatrix {
 public:
  CenteredBernoulliMatrix(Index n, double p, SparseCSR positive_pattern);

  Index size() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  /// sqrt((1-p)/p)
  double high() const noexcept { return high_; }
  /// -sqrt(p/(1-p)); zero when p == 1 (every entry takes the high value 0).
  double low() const noexcept { return low_; }

  double operator()(Index i, Index j) const;
  DenseSymmetric dense() const;
  void multiply(const Vector& x, Vector& y) const;
  /// References *this.
  LinearOperator as_operator() const;

  /// Number of positive entries in each column (diagonal counted once).
  std::vector<std::int64_t> degrees() const;
  const SparseCSR& positive_pattern() const noexcept { return pattern_; }

 private:
  Index n_;
  double p_;
  double high_;
  double low_;
  SparseCSR pattern_;
};

/// C drawn from the same stream as draw_sample(M, {p, seed, true, stream}),
/// so the retained positions of S are exactly the positive entries of C.
CenteredBernoulliMatrix draw_c(Index n, double p, std::uint64_t seed, std::uint64_t stream = 0);

/// E = S - M.
DenseSymmetric residual(const DenseSymmetric& m, const SampleDraw& draw);
DenseMatrix residual(const DenseMatrix& m, const SampleDraw& draw);
/// sqrt((1-p)/p) (M o C).
DenseSymmetric residual_from_c(const DenseSymmetric& m, const CenteredBernoulliMatrix& c);

/// Empirical distribution of ||C / sqrt(n)||_2 over independent draws.
struct ConcentrationProfile {
  double median = 0.0;
  std::vector<double> norms;
  /// |norm - median| per draw.
  std::vector<double> deviations;

  /// Fraction of draws with deviation > t.
  double tail_fraction(double t) const;
};

ConcentrationProfile concentration_profile(Index n, double p, std::size_t draws,
                                           std::uint64_t seed, std::size_t workers = 1);

/// 4 exp(-t^2 p (1-p) n / 8): deviation bound for ||C / sqrt(n)||_2 around its median.
double c_deviation_bound(Index n, double p, double t);

/// Empirical distribution of ||E||_2 = ||S - M||_2 over draws.
ConcentrationProfile residual_norm_profile(const DenseSymmetric& m, double p, std::size_t draws,
                                           std::uint64_t seed, std::size_t workers = 1);

}  // namespace avgeig
