#include "avgeig/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "avgeig/eigensolver.hpp"
#include "avgeig/errors.hpp"
#include "avgeig/parallel.hpp"
#include "avgeig/rng.hpp"
#include "avgeig/stats.hpp"
#include "avgeig/subsample.hpp"

namespace avgeig {

namespace {

void check_open_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("p must lie in (0, 1)");
  }
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
}

}  // namespace

double degree_slope(double p) { return (1.0 - p) / p - p / (1.0 - p); }

std::vector<double> t_diagonal(const std::vector<std::int64_t>& degrees, Index n, double p) {
  check_open_p(p);
  const double base = static_cast<double>(n) * p / (1.0 - p);
  const double slope = degree_slope(p);
  std::vector<double> out;
  out.reserve(degrees.size());
  for (auto d : degrees) {
    out.push_back(base + static_cast<double>(d) * slope);
  }
  return out;
}

double threshold_k(double n, double p, double delta) {
  if (n < 3) {
    throw InvalidArgument("threshold_k needs n >= 3");
  }
  check_delta(delta);
  return n * p + std::pow(std::log(n), 1.0 - 0.8 * delta);
}

double default_vn(double n, double delta) {
  return std::pow(std::log(n), delta / 5.0);
}

double threshold_k_generalized(double n, double p, double delta, double v_n) {
  if (n < 3) {
    throw InvalidArgument("threshold_k needs n >= 3");
  }
  check_delta(delta);
  check_open_p(p);
  const double log_n = std::log(n);
  const double u_n = p * n / std::pow(log_n, 1.0 - delta);
  const double cap = std::pow(std::pow(log_n, delta) / u_n, 0.25);
  if (!(v_n > 0.0) || !(v_n < log_n) || !(v_n < cap)) {
    throw InvalidVn("v_n = " + std::to_string(v_n) + " must satisfy 0 < v_n < log n = " +
                    std::to_string(log_n) + " and v_n < (u_n^-1 (log n)^delta)^(1/4) = " +
                    std::to_string(cap));
  }
  return n * p * (1.0 + v_n);
}

BinomialTailBound bollobas_lower_bound(Index n, double p, double k) {
  check_open_p(p);
  const double nd = static_cast<double>(n);
  if (!(k > 0.0 && k < nd)) {
    throw DomainError("bollobas_lower_bound needs 0 < k < n");
  }
  const double q = 1.0 - p;
  const double h = k - nd * p;
  const double beta = 1.0 / (12.0 * k) + 1.0 / (12.0 * (nd - k));
  const double exponent = -h * h / (2.0 * p * q * nd) - h * h * h / (2.0 * q * q * nd * nd) -
                          h * h * h * h / (3.0 * p * p * p * nd * nd * nd) - h / (p * nd) - beta;
  BinomialTailBound out;
  out.log_bound = -0.5 * std::log(2.0 * M_PI * p * q * nd) + exponent;
  out.bound = std::exp(out.log_bound);
  out.log_witness = std::log(nd) + out.log_bound;
  out.witness = std::exp(out.log_witness);
  return out;
}

std::vector<std::int64_t> sample_degrees(Index n, double p, std::uint64_t seed,
                                         std::uint64_t stream) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("p must lie in [0, 1]");
  }
  if (p == 0.0) {
    return std::vector<std::int64_t>(static_cast<std::size_t>(n), 0);
  }
  return draw_c(n, p, seed, stream).degrees();
}

double blowup_p(Index n, double delta) {
  const double log_n = std::log(static_cast<double>(n));
  return std::pow(log_n, 1.0 - delta) / static_cast<double>(n);
}

double contrast_p(Index n) {
  const double log_n = std::log(static_cast<double>(n));
  return log_n * log_n / static_cast<double>(n);
}

std::vector<BlowupTrace> blowup_experiment(const BlowupConfig& config) {
  check_delta(config.delta);
  if (config.draws < 1) {
    throw InvalidArgument("blowup_experiment needs at least one draw");
  }
  std::vector<BlowupTrace> out;
  for (Index n : config.n_grid) {
    if (n < 3) {
      throw InvalidArgument("blowup_experiment needs n >= 3");
    }
    BlowupTrace trace;
    trace.n = n;
    trace.delta = config.delta;
    trace.p = config.regime == BlowupRegime::Critical ? blowup_p(n, config.delta) : contrast_p(n);
    check_open_p(trace.p);
    trace.k_threshold = threshold_k(n, trace.p, config.delta);
    trace.k_over_2np = trace.k_threshold / (2.0 * static_cast<double>(n) * trace.p);
    const auto tail = bollobas_lower_bound(n, trace.p, trace.k_threshold);
    trace.tail_lower_bound = tail.bound;
    trace.tail_lower_bound_log = tail.log_bound;

    trace.draws.resize(config.draws);
    std::vector<std::int64_t> first_degrees;
    parallel_for(config.draws, config.workers, [&](std::size_t d) {
      const auto c = draw_c(n, trace.p, config.seed, substream(static_cast<std::uint64_t>(n), d));
      const auto degrees = c.degrees();
      const auto t = t_diagonal(degrees, n, trace.p);
      const auto top = std::max_element(t.begin(), t.end());
      Vector start = Vector::Zero(n);
      start(std::distance(t.begin(), top)) = 1.0;
      NormOptions options;
      options.tol = config.norm_tol;
      options.start = &start;
      BlowupDraw& rec = trace.draws[d];
      rec.draw = d;
      rec.max_t_over_n = *top / static_cast<double>(n);
      rec.max_degree = *std::max_element(degrees.begin(), degrees.end());
      rec.opnorm = spectral_norm(c.as_operator(), options) / std::sqrt(static_cast<double>(n));
      if (d == 0) {
        first_degrees = degrees;
      }
    });
    trace.degrees = std::move(first_degrees);
    std::vector<double> max_t;
    std::vector<double> norms;
    for (const auto& rec : trace.draws) {
      max_t.push_back(rec.max_t_over_n);
      norms.push_back(rec.opnorm);
    }
    trace.max_t_over_n = stats::median(max_t);
    trace.mean_max_t_over_n = stats::mean(max_t);
    trace.opnorm_estimate = stats::median(norms);
    out.push_back(std::move(trace));
  }
  return out;
}

}  // namespace avgeig
