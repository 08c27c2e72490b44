#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "avgeig/incoherence.hpp"
#include "avgeig/matrix.hpp"

namespace avgeig {

enum class SupportLayout {
  /// Supports are prefixes of one random permutation, so smaller ones nest in larger ones.
  Nested,
  /// Supports are consecutive blocks of one random permutation.
  Disjoint,
};

struct SyntheticSpec {
  Index n = 0;
  /// Column count for rectangular models; 0 for symmetric ones.
  Index m = 0;
  /// Strictly decreasing positive eigenvalues (or singular values).
  std::vector<double> spectrum;
  /// Support size of each u_i; empty means fully dense.
  std::vector<Index> support_sizes;
  /// Support size of each v_i (rectangular only); empty means fully dense.
  std::vector<Index> right_support_sizes;
  SupportLayout layout = SupportLayout::Nested;
  /// When set, the spectrum is scaled to lambda_1 = 1 and the tail rescaled
  /// so that lambda_2 / lambda_1 equals this value.
  std::optional<double> gap_ratio;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Orthonormal n x r basis whose i-th column is supported on supports[i].
/// Throws InfeasibleSupports when a column cannot be made orthogonal to the
/// earlier ones within its support.
DenseMatrix orthonormal_on_supports(Index n, const std::vector<std::vector<Index>>& supports,
                                    std::uint64_t seed, std::uint64_t stream = 0);

/// Index sets of the requested sizes laid out per `layout`.
std::vector<std::vector<Index>> make_supports(Index n, const std::vector<Index>& sizes,
                                              SupportLayout layout, std::uint64_t seed,
                                              std::uint64_t stream = 0);

/// The spectrum after the optional gap rescaling.
std::vector<double> effective_spectrum(const SyntheticSpec& spec);

/// M = sum_i lambda_i u_i u_i^T with the exact ground-truth model.
std::pair<DenseSymmetric, SpectralModel> synth_symmetric(const SyntheticSpec& spec);

/// n x m matrix sum_i sigma_i u_i v_i^T with its exact model.
std::pair<DenseMatrix, RectSpectralModel> synth_rect(const SyntheticSpec& spec);

}  // namespace avgeig
