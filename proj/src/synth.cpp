#include "avgeig/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "avgeig/errors.hpp"
#include "avgeig/rng.hpp"

namespace avgeig {

namespace {

constexpr double kFeasibilityTol = 1e-8;

void check_sizes(Index n, const std::vector<Index>& sizes, std::size_t count, const char* what) {
  if (!sizes.empty() && sizes.size() != count) {
    throw InvalidArgument(std::string(what) + ": one support size per vector required");
  }
  for (Index s : sizes) {
    if (s < 1 || s > n) {
      throw InvalidArgument(std::string(what) + ": support sizes must lie in [1, n]");
    }
  }
}

std::vector<Index> dense_sizes(Index n, const std::vector<Index>& sizes, std::size_t count) {
  return sizes.empty() ? std::vector<Index>(count, n) : sizes;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n < 1) {
    throw InvalidArgument("synthetic spec needs n >= 1");
  }
  if (spectrum.empty()) {
    throw InvalidArgument("synthetic spec needs a non-empty spectrum");
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (!(spectrum[i] > 0.0) || (i > 0 && !(spectrum[i] < spectrum[i - 1]))) {
      throw InvalidArgument("spectrum must be strictly decreasing and positive");
    }
  }
  const Index dim = m > 0 ? std::min(n, m) : n;
  if (static_cast<Index>(spectrum.size()) > dim) {
    throw InvalidArgument("spectrum longer than the dimension");
  }
  check_sizes(n, support_sizes, spectrum.size(), "support_sizes");
  if (m > 0) {
    check_sizes(m, right_support_sizes, spectrum.size(), "right_support_sizes");
  }
  if (gap_ratio && !(*gap_ratio > 0.0 && *gap_ratio < 1.0)) {
    throw InvalidArgument("gap_ratio must lie in (0, 1)");
  }
  if (gap_ratio && spectrum.size() < 2) {
    throw InvalidArgument("gap_ratio needs at least two eigenvalues");
  }
}

std::vector<std::vector<Index>> make_supports(Index n, const std::vector<Index>& sizes,
                                              SupportLayout layout, std::uint64_t seed,
                                              std::uint64_t stream) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  RandomStream rng(seed, stream);
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<std::vector<Index>> out;
  out.reserve(sizes.size());
  Index offset = 0;
  for (Index size : sizes) {
    if (layout == SupportLayout::Nested) {
      out.emplace_back(perm.begin(), perm.begin() + size);
    } else {
      if (offset + size > n) {
        throw InfeasibleSupports("disjoint supports need a total size <= n");
      }
      out.emplace_back(perm.begin() + offset, perm.begin() + offset + size);
      offset += size;
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

DenseMatrix orthonormal_on_supports(Index n, const std::vector<std::vector<Index>>& supports,
                                    std::uint64_t seed, std::uint64_t stream) {
  const auto r = static_cast<Index>(supports.size());
  DenseMatrix u = DenseMatrix::Zero(n, r);
  RandomStream rng(seed, stream);
  for (Index i = 0; i < r; ++i) {
    const auto& support = supports[i];
    const auto s = static_cast<Index>(support.size());
    // Orthonormal basis of the earlier columns restricted to this support;
    // the new column must be orthogonal to all of them.
    std::vector<Vector> basis;
    for (Index j = 0; j < i; ++j) {
      Vector c(s);
      for (Index a = 0; a < s; ++a) {
        c(a) = u(support[a], j);
      }
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
          c -= b.dot(c) * b;
        }
      }
      const double cn = c.norm();
      if (cn > 1e-10) {
        basis.push_back(c / cn);
      }
    }
    Vector x(s);
    for (Index a = 0; a < s; ++a) {
      x(a) = rng.normal();
    }
    const double scale = x.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        x -= b.dot(x) * b;
      }
    }
    const double norm = x.norm();
    if (!(norm > kFeasibilityTol * scale)) {
      throw InfeasibleSupports("vector " + std::to_string(i) +
                               " cannot be orthogonalised within its support");
    }
    x /= norm;
    for (Index a = 0; a < s; ++a) {
      u(support[a], i) = x(a);
    }
  }
  return u;
}

std::vector<double> effective_spectrum(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<double> out = spec.spectrum;
  if (spec.gap_ratio) {
    const double top = out.front();
    const double tail_scale = *spec.gap_ratio / (out[1] / top);
    out[0] = 1.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
      out[i] = out[i] / top * tail_scale;
    }
  }
  return out;
}

std::pair<DenseSymmetric, SpectralModel> synth_symmetric(const SyntheticSpec& spec) {
  const auto values = effective_spectrum(spec);
  const auto r = values.size();
  const auto sizes = dense_sizes(spec.n, spec.support_sizes, r);
  const auto supports = make_supports(spec.n, sizes, spec.layout, spec.seed, 0);
  DenseMatrix u = orthonormal_on_supports(spec.n, supports, spec.seed, 1);
  Vector lambda = Eigen::Map<const Vector>(values.data(), static_cast<Index>(r));
  std::vector<double> alpha;
  if (spec.n >= 2) {
    for (Index size : sizes) {
      alpha.push_back(std::log(static_cast<double>(size)) / std::log(static_cast<double>(spec.n)));
    }
  } else {
    alpha.assign(r, 0.0);
  }
  SpectralModel model(std::move(lambda), std::move(u), std::move(alpha));
  DenseSymmetric m = model.assemble();
  return {std::move(m), std::move(model)};
}

std::pair<DenseMatrix, RectSpectralModel> synth_rect(const SyntheticSpec& spec) {
  if (spec.m < 1) {
    throw InvalidArgument("synth_rect needs m >= 1");
  }
  const auto values = effective_spectrum(spec);
  const auto r = values.size();
  const auto left_sizes = dense_sizes(spec.n, spec.support_sizes, r);
  const auto right_sizes = dense_sizes(spec.m, spec.right_support_sizes, r);
  const auto left_supports = make_supports(spec.n, left_sizes, spec.layout, spec.seed, 0);
  const auto right_supports = make_supports(spec.m, right_sizes, spec.layout, spec.seed, 2);
  DenseMatrix u = orthonormal_on_supports(spec.n, left_supports, spec.seed, 1);
  DenseMatrix v = orthonormal_on_supports(spec.m, right_supports, spec.seed, 3);
  auto exponents = [](Index dim, const std::vector<Index>& sizes) {
    std::vector<double> out;
    for (Index size : sizes) {
      out.push_back(dim >= 2 ? std::log(static_cast<double>(size)) / std::log(static_cast<double>(dim))
                             : 0.0);
    }
    return out;
  };
  Vector sigma = Eigen::Map<const Vector>(values.data(), static_cast<Index>(r));
  RectSpectralModel model(std::move(sigma), std::move(u), std::move(v),
                          exponents(spec.n, left_sizes), exponents(spec.m, right_sizes));
  DenseMatrix m = model.assemble();
  return {std::move(m), std::move(model)};
}

}  // namespace avgeig
