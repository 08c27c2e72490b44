#pragma once

#include <cstdint>
#include <vector>

#include "avgeig/matrix.hpp"

namespace avgeig {

/// Diagonal of C^T C for a centred Bernoulli matrix whose i-th column holds
/// degrees[i] positive entries: np/(1-p) + d_i ((1-p)/p - p/(1-p)).
/// Needs 0 < p < 1.
std::vector<double> t_diagonal(const std::vector<std::int64_t>& degrees, Index n, double p);

/// (1-p)/p - p/(1-p), the per-degree slope of T(i,i).
double degree_slope(double p);
/// Largest p with degree_slope(p) >= 1/(2p); the inequality holds exactly on (0, 1/3].
inline constexpr double kDegreeSlopeCrossover = 1.0 / 3.0;

/// k = np + (log n)^(1 - 4 delta / 5). Needs n >= 3 and 0 < delta < 1.
double threshold_k(double n, double p, double delta);
/// k = np (1 + v_n). Throws InvalidVn unless 0 < v_n < log n and
/// v_n < (u_n^-1 (log n)^delta)^(1/4) with u_n = p n / (log n)^(1 - delta).
double threshold_k_generalized(double n, double p, double delta, double v_n);
/// v_n = (log n)^(delta/5), under which both forms of k agree at p = (log n)^(1-delta)/n.
double default_vn(double n, double delta);

struct BinomialTailBound {
  /// log of (2 pi p q n)^(-1/2) exp(-h^2/(2pqn) - h^3/(2q^2n^2) - h^4/(3p^3n^3) - h/(pn) - beta).
  double log_bound = 0.0;
  double bound = 0.0;
  /// log(n * bound), the quantity that must diverge.
  double log_witness = 0.0;
  double witness = 0.0;
};

/// Lower bound on the binomial point probability at k, evaluated in log space.
/// Throws DomainError unless 0 < k < n; needs 0 < p < 1.
BinomialTailBound bollobas_lower_bound(Index n, double p, double k);

/// Positive-entry count of each column of the symmetric C drawn by
/// draw_c(n, p, seed, stream), diagonal counted once. p = 0 gives zeros.
std::vector<std::int64_t> sample_degrees(Index n, double p, std::uint64_t seed,
                                         std::uint64_t stream = 0);

/// (log n)^(1 - delta) / n.
double blowup_p(Index n, double delta);
/// (log n)^2 / n.
double contrast_p(Index n);

enum class BlowupRegime { Critical, Contrast };

struct BlowupDraw {
  std::size_t draw = 0;
  double max_t_over_n = 0.0;
  /// Power-iteration estimate of ||C / sqrt(n)||_2 (a lower bound).
  double opnorm = 0.0;
  std::int64_t max_degree = 0;
};

struct BlowupTrace {
  Index n = 0;
  double p = 0.0;
  double delta = 0.0;
  /// Degrees of draw 0.
  std::vector<std::int64_t> degrees;
  /// Medians over draws.
  double max_t_over_n = 0.0;
  double opnorm_estimate = 0.0;
  double mean_max_t_over_n = 0.0;
  double k_threshold = 0.0;
  double k_over_2np = 0.0;
  double tail_lower_bound = 0.0;
  double tail_lower_bound_log = 0.0;
  std::vector<BlowupDraw> draws;
};

struct BlowupConfig {
  double delta = 0.5;
  std::vector<Index> n_grid;
  std::size_t draws = 5;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  BlowupRegime regime = BlowupRegime::Critical;
  /// Relative tolerance of the operator norm iteration.
  double norm_tol = 1e-8;
};

/// Draws C at p = (log n)^(1-delta)/n (or the contrast rate) for each n and
/// records max_i T(i,i)/n and ||C/sqrt(n)||_2. Draw d of size n uses stream
/// substream(n, d). The norm iteration starts at e_i for the column with the
/// largest T(i,i), so its estimate never falls below sqrt(max_i T(i,i)/n).
std::vector<BlowupTrace> blowup_experiment(const BlowupConfig& config);

}  // namespace avgeig
