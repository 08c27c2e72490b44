#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "avgeig/blowup.hpp"
#include "avgeig/eigensolver.hpp"
#include "avgeig/estimator.hpp"
#include "avgeig/graph.hpp"
#include "avgeig/incoherence.hpp"

namespace avgeig {

struct AlignmentRow {
  double p = 0.0;
  std::size_t samples = 0;
  /// Alignment of the averaged vector.
  double alignment = 0.0;
  /// Statistics of the single-draw alignments.
  double median_alignment = 0.0;
  double mean_alignment = 0.0;
  double std_alignment = 0.0;
  /// Fraction of draws with ||E||_2 < d_k / 2; absent when not computed.
  std::optional<double> pert_fraction;
  /// ||nu - u||.
  double error = 0.0;
};

struct SweepConfig {
  std::vector<double> p_grid;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  Index k = 0;
  Gauge gauge = Gauge::AverageThenNormalize;
  bool pert_fraction = true;
  EigenOptions eigen;
};

/// One row per p: averaged and single-draw alignments with the truth.
std::vector<AlignmentRow> sweep_alignment(const DenseSymmetric& m, const SpectralModel& truth,
                                          const SweepConfig& config);

/// At a fixed p, rows for averages over the first N draws for each N in
/// `sample_grid` (one shared set of draws).
std::vector<AlignmentRow> sweep_samples(const DenseSymmetric& m, const SpectralModel& truth,
                                        double p, const std::vector<std::size_t>& sample_grid,
                                        const SweepConfig& config);

enum class PagerankSubsample {
  /// Subsample the dense damped matrix P.
  Google,
  /// Subsample the adjacency matrix, then damp and normalise.
  Adjacency,
};

struct PagerankRow {
  double p = 0.0;
  std::size_t samples = 0;
  /// Spearman rho between the true and the averaged vector.
  double rho = 0.0;
  double median_rho = 0.0;
  double mean_rho = 0.0;
  double std_rho = 0.0;
  /// Alignment of the averaged unit vector with the unit PageRank vector.
  double alignment = 0.0;
  /// Fraction of draws with ||S - P||_2 < (1 - c) / 2; absent when not computed.
  std::optional<double> pert_fraction;
};

struct PagerankSweepConfig {
  std::vector<double> p_grid;
  std::size_t samples = 50;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  double damping = 0.85;
  PagerankSubsample variant = PagerankSubsample::Google;
  bool pert_fraction = true;
  /// Relative tie tolerance of the rank correlation.
  double tie_tol = 1e-10;
  PerronOptions perron;
};

std::vector<PagerankRow> sweep_pagerank(const WebGraph& g, const PagerankSweepConfig& config);

struct SpeedupRow {
  double p = 0.0;
  /// Median wall-clock seconds.
  double t_sample = 0.0;
  double t_eig_sub = 0.0;
  double t_eig_full = 0.0;
  /// (t_sample + t_eig_sub) / t_eig_full.
  double ratio = 0.0;
  /// nnz(S) / n^2 of the last repetition.
  double nnz_fraction = 0.0;
};

/// Times sampling plus a leading-eigenvector solve of S against a solve of
/// M, single-threaded, median over `repetitions` (raised to 5 when smaller).
std::vector<SpeedupRow> speedup_harness(const DenseSymmetric& m, const std::vector<double>& p_grid,
                                        std::uint64_t seed, std::size_t repetitions = 5);

inline constexpr std::string_view kSweepCsvHeader =
    "p,samples,alignment,median_alignment,mean_alignment,std_alignment,pert_fraction,error";
inline constexpr std::string_view kPagerankCsvHeader =
    "p,samples,rho,median_rho,mean_rho,std_rho,alignment,pert_fraction";
inline constexpr std::string_view kSpeedupCsvHeader =
    "p,t_sample,t_eig_sub,t_eig_full,ratio,nnz_fraction";
inline constexpr std::string_view kBlowupCsvHeader =
    "n,p,draw,max_T_over_n,opnorm,k_over_2np,tail_lower_bound_log";

/// CSV with the frozen headers above. Missing optional values are empty fields.
void write_csv(std::ostream& out, const std::vector<AlignmentRow>& rows);
void write_csv(std::ostream& out, const std::vector<PagerankRow>& rows);
void write_csv(std::ostream& out, const std::vector<SpeedupRow>& rows);
/// One line per (n, draw).
void write_csv(std::ostream& out, const std::vector<BlowupTrace>& traces);

}  // namespace avgeig
