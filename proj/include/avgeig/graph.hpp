#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "avgeig/matrix.hpp"

namespace avgeig {

/// Directed graph with deduplicated, sorted out-neighbour lists.
class WebGraph {
 public:
  WebGraph() = default;
  /// Edges with endpoints outside [0, n) raise NodeIdOverflow. Duplicates collapse.
  WebGraph(Index n, const std::vector<std::pair<Index, Index>>& edges);

  Index size() const noexcept { return static_cast<Index>(out_.size()); }
  const std::vector<Index>& out_neighbors(Index i) const { return out_[i]; }
  Index out_degree(Index i) const { return static_cast<Index>(out_[i].size()); }
  bool dangling(Index i) const { return out_[i].empty(); }
  /// Indicator of nodes without out-links.
  Vector dangling_indicator() const;
  std::size_t edge_count() const;
  std::vector<std::pair<Index, Index>> edges() const;
  SparseCSR adjacency() const;

 private:
  std::vector<std::vector<Index>> out_;
};

/// Reads "src dst" pairs with '#' comments. Optional header comments
/// "# nodes N" and "# base 0|1" declare the node count and the id base
/// (default 0). Without "# nodes" the count is the largest id + 1.
/// Throws ParseError(line) on malformed lines and NodeIdOverflow on ids
/// outside the declared range.
WebGraph load_edge_list(std::istream& in);
WebGraph load_edge_list(const std::filesystem::path& path);
/// Writes the header and 0-based edges in sorted order.
void write_edge_list(std::ostream& out, const WebGraph& g);
void write_edge_list(const std::filesystem::path& path, const WebGraph& g);

/// Directed preferential attachment: node t links to `out_links` distinct
/// earlier nodes chosen with probability proportional to in-degree + 1.
WebGraph gen_power_law(Index n, Index out_links, std::uint64_t seed);

/// P = c B + (1 - c) 11^T / n with B the row-normalised A + delta 1^T / n,
/// where delta flags dangling nodes. References the graph.
class GoogleMatrix {
 public:
  /// Throws EmptyGraph for n == 0 and InvalidArgument unless 0 < c <= 1.
  GoogleMatrix(const WebGraph& g, double c = 0.85);

  Index size() const noexcept { return g_->size(); }
  double damping() const noexcept { return c_; }
  double entry(Index i, Index j) const;
  /// y = P x
  void apply(const Vector& x, Vector& y) const;
  /// y = P^T x
  void apply_transpose(const Vector& x, Vector& y) const;
  LinearOperator as_operator() const;
  DenseMatrix to_dense() const;

 private:
  const WebGraph* g_;
  double c_;
};

struct PerronOptions {
  /// Stop when the L1 change between iterates is below tol.
  double tol = 1e-12;
  /// 0 selects 100 * n.
  std::size_t max_iter = 0;
};

/// Left Perron vector of a nonnegative operator: x <- A^T x normalised to
/// unit sum. Throws NoConvergence.
Vector perron_vector(const LinearOperator& a, const PerronOptions& options = {});
/// PageRank vector of the Google matrix, a probability vector.
Vector pagerank(const GoogleMatrix& p, const PerronOptions& options = {});

/// Average ranks (1-based). Values within tie_tol * max|x| of the first
/// value of a run of sorted values share that run's average rank.
std::vector<double> average_ranks(const Vector& x, double tie_tol = 0.0);

/// Pearson correlation of the average-rank vectors.
/// Throws LengthMismatch for unequal or < 2 lengths, ZeroVariance for constant ranks.
double spearman_rho(const Vector& x, const Vector& y, double tie_tol = 0.0);

}  // namespace avgeig
