#include "avgeig/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "avgeig/errors.hpp"
#include "avgeig/rng.hpp"

namespace avgeig {

WebGraph::WebGraph(Index n, const std::vector<std::pair<Index, Index>>& edges)
    : out_(static_cast<std::size_t>(n)) {
  for (const auto& [src, dst] : edges) {
    if (src < 0 || src >= n || dst < 0 || dst >= n) {
      throw NodeIdOverflow("edge (" + std::to_string(src) + ", " + std::to_string(dst) +
                           ") outside [0, " + std::to_string(n) + ")");
    }
    out_[src].push_back(dst);
  }
  for (auto& list : out_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

Vector WebGraph::dangling_indicator() const {
  Vector d(size());
  for (Index i = 0; i < size(); ++i) {
    d(i) = dangling(i) ? 1.0 : 0.0;
  }
  return d;
}

std::size_t WebGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : out_) {
    total += list.size();
  }
  return total;
}

std::vector<std::pair<Index, Index>> WebGraph::edges() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(edge_count());
  for (Index i = 0; i < size(); ++i) {
    for (Index j : out_[i]) {
      out.emplace_back(i, j);
    }
  }
  return out;
}

SparseCSR WebGraph::adjacency() const {
  std::vector<Triplet> triplets;
  triplets.reserve(edge_count());
  for (const auto& [i, j] : edges()) {
    triplets.push_back({i, j, 1.0});
  }
  return SparseCSR::from_triplets(size(), size(), std::move(triplets));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

long long parse_id(const std::string& token, std::size_t line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::out_of_range&) {
    throw NodeIdOverflow("line " + std::to_string(line) + ": node id out of range");
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer node id, got '" + token + "'");
  }
  if (used != token.size()) {
    throw ParseError(line, "expected an integer node id, got '" + token + "'");
  }
  return v;
}

}  // namespace

WebGraph load_edge_list(std::istream& in) {
  std::optional<Index> declared;
  int base = 0;
  std::vector<std::pair<long long, long long>> raw;
  std::vector<std::size_t> raw_lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) {
      continue;
    }
    if (t[0] == '#') {
      std::istringstream header(t.substr(1));
      std::string key;
      header >> key;
      if (key == "nodes") {
        long long n = -1;
        if (!(header >> n) || n < 0) {
          throw ParseError(lineno, "malformed '# nodes' header");
        }
        declared = static_cast<Index>(n);
      } else if (key == "base") {
        if (!(header >> base) || (base != 0 && base != 1)) {
          throw ParseError(lineno, "'# base' must be 0 or 1");
        }
      }
      continue;
    }
    std::istringstream fields(t);
    std::string a;
    std::string b;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(lineno, "expected 'src dst'");
    }
    raw.emplace_back(parse_id(a, lineno), parse_id(b, lineno));
    raw_lines.push_back(lineno);
  }

  long long max_id = -1;
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(raw.size());
  for (std::size_t e = 0; e < raw.size(); ++e) {
    const long long src = raw[e].first - base;
    const long long dst = raw[e].second - base;
    if (src < 0 || dst < 0) {
      throw NodeIdOverflow("line " + std::to_string(raw_lines[e]) + ": node id below base " +
                           std::to_string(base));
    }
    if (declared && (src >= *declared || dst >= *declared)) {
      throw NodeIdOverflow("line " + std::to_string(raw_lines[e]) + ": node id exceeds '# nodes " +
                           std::to_string(*declared) + "'");
    }
    max_id = std::max({max_id, src, dst});
    edges.emplace_back(static_cast<Index>(src), static_cast<Index>(dst));
  }
  const Index n = declared ? *declared : static_cast<Index>(max_id + 1);
  return WebGraph(n, edges);
}

WebGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument("cannot open " + path.string());
  }
  return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const WebGraph& g) {
  out << "# nodes " << g.size() << "\n# base 0\n";
  for (const auto& [i, j] : g.edges()) {
    out << i << ' ' << j << '\n';
  }
}

void write_edge_list(const std::filesystem::path& path, const WebGraph& g) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument("cannot write " + path.string());
  }
  write_edge_list(out, g);
}

WebGraph gen_power_law(Index n, Index out_links, std::uint64_t seed) {
  if (n < 1 || out_links < 1) {
    throw InvalidArgument("gen_power_law needs n >= 1 and out_links >= 1");
  }
  RandomStream rng(seed, 0);
  // Each node appears once for its base weight and once per in-link, so a
  // uniform pick from `urn` is proportional to in-degree + 1.
  std::vector<Index> urn;
  urn.reserve(static_cast<std::size_t>(n * (out_links + 1)));
  std::vector<std::pair<Index, Index>> edges;
  urn.push_back(0);
  for (Index t = 1; t < n; ++t) {
    const Index want = std::min(out_links, t);
    std::vector<Index> chosen;
    while (static_cast<Index>(chosen.size()) < want) {
      const auto pick = urn[static_cast<std::size_t>(rng.uniform() * static_cast<double>(urn.size()))];
      if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end()) {
        chosen.push_back(pick);
      }
    }
    for (Index target : chosen) {
      edges.emplace_back(t, target);
      urn.push_back(target);
    }
    urn.push_back(t);
  }
  return WebGraph(n, edges);
}

GoogleMatrix::GoogleMatrix(const WebGraph& g, double c) : g_(&g), c_(c) {
  if (g.size() == 0) {
    throw EmptyGraph();
  }
  if (!(c > 0.0 && c <= 1.0)) {
    throw InvalidArgument("damping must lie in (0, 1]");
  }
}

double GoogleMatrix::entry(Index i, Index j) const {
  const double n = static_cast<double>(size());
  double b = 0.0;
  if (g_->dangling(i)) {
    b = 1.0 / n;
  } else {
    const auto& list = g_->out_neighbors(i);
    if (std::binary_search(list.begin(), list.end(), j)) {
      b = 1.0 / static_cast<double>(list.size());
    }
  }
  return c_ * b + (1.0 - c_) / n;
}

void GoogleMatrix::apply(const Vector& x, Vector& y) const {
  const Index n = size();
  const double mean = x.sum() / static_cast<double>(n);
  y.resize(n);
  for (Index i = 0; i < n; ++i) {
    double b = 0.0;
    if (g_->dangling(i)) {
      b = mean;
    } else {
      const auto& list = g_->out_neighbors(i);
      for (Index j : list) {
        b += x(j);
      }
      b /= static_cast<double>(list.size());
    }
    y(i) = c_ * b + (1.0 - c_) * mean;
  }
}

void GoogleMatrix::apply_transpose(const Vector& x, Vector& y) const {
  const Index n = size();
  y = Vector::Zero(n);
  double spread = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (g_->dangling(i)) {
      spread += x(i);
    } else {
      const auto& list = g_->out_neighbors(i);
      const double share = x(i) / static_cast<double>(list.size());
      for (Index j : list) {
        y(j) += share;
      }
    }
  }
  const double nd = static_cast<double>(n);
  y *= c_;
  y.array() += c_ * spread / nd + (1.0 - c_) * x.sum() / nd;
}

LinearOperator GoogleMatrix::as_operator() const {
  LinearOperator op;
  op.rows = op.cols = size();
  op.symmetric = false;
  op.apply = [this](const Vector& x, Vector& y) { apply(x, y); };
  op.apply_transpose = [this](const Vector& x, Vector& y) { apply_transpose(x, y); };
  return op;
}

DenseMatrix GoogleMatrix::to_dense() const {
  const Index n = size();
  DenseMatrix p(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      p(i, j) = entry(i, j);
    }
  }
  return p;
}

Vector perron_vector(const LinearOperator& a, const PerronOptions& options) {
  if (a.rows != a.cols || a.rows == 0) {
    throw ShapeMismatch("perron_vector needs a non-empty square operator");
  }
  const Index n = a.rows;
  const std::size_t max_iter = options.max_iter ? options.max_iter : 100 * static_cast<std::size_t>(n);
  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector y;
  double change = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < max_iter; ++it) {
    a.transpose_apply(x, y);
    const double total = y.sum();
    if (!(total > 0.0)) {
      throw NoConvergence(1, change, "perron_vector: iterate lost all mass");
    }
    y /= total;
    change = (y - x).lpNorm<1>();
    x.swap(y);
    if (change <= options.tol) {
      return x;
    }
  }
  throw NoConvergence(1, change,
                      "perron_vector did not converge (L1 change " + std::to_string(change) + ")");
}

Vector pagerank(const GoogleMatrix& p, const PerronOptions& options) {
  return perron_vector(p.as_operator(), options);
}

std::vector<double> average_ranks(const Vector& x, double tie_tol) {
  const auto n = static_cast<std::size_t>(x.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&x](std::size_t a, std::size_t b) { return x(a) < x(b); });
  const double tol = n > 0 ? tie_tol * x.cwiseAbs().maxCoeff() : 0.0;
  std::vector<double> ranks(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && x(order[end]) - x(order[start]) <= tol) {
      ++end;
    }
    const double rank = 0.5 * static_cast<double>(start + end - 1) + 1.0;
    for (std::size_t i = start; i < end; ++i) {
      ranks[order[i]] = rank;
    }
    start = end;
  }
  return ranks;
}

double spearman_rho(const Vector& x, const Vector& y, double tie_tol) {
  if (x.size() != y.size()) {
    throw LengthMismatch("spearman_rho: lengths differ");
  }
  if (x.size() < 2) {
    throw LengthMismatch("spearman_rho needs at least two values");
  }
  const auto rx = average_ranks(x, tie_tol);
  const auto ry = average_ranks(y, tie_tol);
  const Eigen::Map<const Vector> a(rx.data(), x.size());
  const Eigen::Map<const Vector> b(ry.data(), y.size());
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  const double va = ca.squaredNorm();
  const double vb = cb.squaredNorm();
  if (va == 0.0 || vb == 0.0) {
    throw ZeroVariance();
  }
  return std::clamp(ca.dot(cb) / std::sqrt(va * vb), -1.0, 1.0);
}

}  // namespace avgeig
