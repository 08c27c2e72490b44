#include "avgeig/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "avgeig/errors.hpp"
#include "avgeig/parallel.hpp"
#include "avgeig/stats.hpp"
#include "avgeig/subsample.hpp"

namespace avgeig {

namespace {

void fill_stats(AlignmentRow& row, const std::vector<double>& alignments) {
  row.median_alignment = stats::median(alignments);
  row.mean_alignment = stats::mean(alignments);
  row.std_alignment = stats::stddev(alignments);
}

AveragingPlan plan_for(const SweepConfig& config, double p, std::size_t samples) {
  AveragingPlan plan;
  plan.p = p;
  plan.num_samples = samples;
  plan.k = config.k;
  plan.seed = config.seed;
  plan.gauge = config.gauge;
  plan.workers = config.workers;
  plan.eigen = config.eigen;
  return plan;
}

// Fraction of the first `count` draws of `plan` whose residual norm is
// below `threshold`. Regenerates the draws from their streams.
double residual_fraction(const DenseSymmetric& m, const AveragingPlan& plan, std::size_t count,
                         double threshold) {
  std::vector<char> inside(count, 0);
  const LinearOperator mop = as_operator(m);
  parallel_for(count, plan.workers, [&](std::size_t i) {
    const auto draw = draw_sample(m, SampleConfig{plan.p, plan.seed, true, i});
    const LinearOperator sop = as_operator(draw.s, true);
    NormOptions options;
    options.seed = substream(plan.seed, i);
    options.tol = 1e-8;
    inside[i] = spectral_norm(difference_operator(sop, mop), options) < threshold ? 1 : 0;
  });
  return static_cast<double>(std::count(inside.begin(), inside.end(), 1)) /
         static_cast<double>(count);
}

std::vector<double> alignments_of(const std::vector<Vector>& vectors, const Vector& u,
                                  std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(alignment(u, vectors[i]));
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void put_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) {
    out << *v;
  }
}

}  // namespace

std::vector<AlignmentRow> sweep_alignment(const DenseSymmetric& m, const SpectralModel& truth,
                                          const SweepConfig& config) {
  const Vector u = truth.eigenvector(config.k);
  const double d = separation(truth, config.k);
  std::vector<AlignmentRow> rows;
  for (double p : config.p_grid) {
    const auto plan = plan_for(config, p, config.samples);
    auto draws = sample_eigenvectors(m, plan);
    const Vector nu = combine_draws(draws.vectors, plan.gauge);
    AlignmentRow row;
    row.p = p;
    row.samples = config.samples;
    row.alignment = alignment(u, nu);
    row.error = oriented_error(u, nu);
    fill_stats(row, alignments_of(draws.vectors, u, draws.vectors.size()));
    if (config.pert_fraction) {
      row.pert_fraction = residual_fraction(m, plan, config.samples, d / 2.0);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<AlignmentRow> sweep_samples(const DenseSymmetric& m, const SpectralModel& truth,
                                        double p, const std::vector<std::size_t>& sample_grid,
                                        const SweepConfig& config) {
  if (sample_grid.empty()) {
    return {};
  }
  const std::size_t total = *std::max_element(sample_grid.begin(), sample_grid.end());
  const auto plan = plan_for(config, p, total);
  auto draws = sample_eigenvectors(m, plan);
  const Vector u = truth.eigenvector(config.k);
  const double d = separation(truth, config.k);
  std::vector<AlignmentRow> rows;
  for (std::size_t count : sample_grid) {
    if (count < 1) {
      throw InvalidArgument("sample counts must be >= 1");
    }
    const std::vector<Vector> prefix(draws.vectors.begin(),
                                     draws.vectors.begin() + static_cast<std::ptrdiff_t>(count));
    const Vector nu = combine_draws(prefix, plan.gauge);
    AlignmentRow row;
    row.p = p;
    row.samples = count;
    row.alignment = alignment(u, nu);
    row.error = oriented_error(u, nu);
    fill_stats(row, alignments_of(draws.vectors, u, count));
    if (config.pert_fraction) {
      row.pert_fraction = residual_fraction(m, plan, count, d / 2.0);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<PagerankRow> sweep_pagerank(const WebGraph& g, const PagerankSweepConfig& config) {
  const GoogleMatrix google(g, config.damping);
  const Vector truth = pagerank(google, config.perron);
  const Vector truth_unit = truth.normalized();
  const double threshold = (1.0 - config.damping) / 2.0;
  const LinearOperator pop = google.as_operator();

  std::vector<PagerankRow> rows;
  for (double p : config.p_grid) {
    SampleConfig{p}.validate();
    std::vector<Vector> vectors(config.samples);
    std::vector<double> rhos(config.samples);
    std::vector<char> inside(config.samples, 0);
    parallel_for(config.samples, config.workers, [&](std::size_t i) {
      const SampleConfig sc{p, config.seed, false, i};
      Vector v;
      if (config.variant == PagerankSubsample::Google) {
        const auto draw = draw_sample(
            g.size(), g.size(), [&google](Index a, Index b) { return google.entry(a, b); }, sc);
        const LinearOperator sop = as_operator(draw.s);
        v = perron_vector(sop, config.perron);
        if (config.pert_fraction) {
          NormOptions options;
          options.seed = substream(config.seed, i);
          options.tol = 1e-8;
          inside[i] = spectral_norm(difference_operator(sop, pop), options) < threshold ? 1 : 0;
        }
      } else {
        std::vector<std::pair<Index, Index>> kept;
        const auto draw = draw_sample(
            g.size(), g.size(),
            [&g](Index a, Index b) {
              const auto& list = g.out_neighbors(a);
              return std::binary_search(list.begin(), list.end(), b) ? 1.0 : 0.0;
            },
            sc);
        for (Index a = 0; a < draw.s.rows(); ++a) {
          for (auto e = draw.s.row_ptr()[a]; e < draw.s.row_ptr()[a + 1]; ++e) {
            kept.emplace_back(a, draw.s.col_idx()[e]);
          }
        }
        const WebGraph sub(g.size(), kept);
        const GoogleMatrix sub_google(sub, config.damping);
        v = pagerank(sub_google, config.perron);
        if (config.pert_fraction) {
          NormOptions options;
          options.seed = substream(config.seed, i);
          options.tol = 1e-8;
          inside[i] =
              spectral_norm(difference_operator(sub_google.as_operator(), pop), options) < threshold
                  ? 1
                  : 0;
        }
      }
      rhos[i] = spearman_rho(truth, v, config.tie_tol);
      vectors[i] = v.normalized();
    });
    const Vector nu = combine_draws(vectors, Gauge::AverageThenNormalize);
    PagerankRow row;
    row.p = p;
    row.samples = config.samples;
    row.rho = spearman_rho(truth, nu, config.tie_tol);
    row.median_rho = stats::median(rhos);
    row.mean_rho = stats::mean(rhos);
    row.std_rho = stats::stddev(rhos);
    row.alignment = alignment(truth_unit, nu);
    if (config.pert_fraction) {
      row.pert_fraction = static_cast<double>(std::count(inside.begin(), inside.end(), 1)) /
                          static_cast<double>(config.samples);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SpeedupRow> speedup_harness(const DenseSymmetric& m, const std::vector<double>& p_grid,
                                        std::uint64_t seed, std::size_t repetitions) {
  repetitions = std::max<std::size_t>(repetitions, 5);
  const double n2 = static_cast<double>(m.size()) * static_cast<double>(m.size());
  std::vector<double> full_times;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    top_k_eigen(m, 1, EigenOptions{1e-10, 0, seed});
    full_times.push_back(seconds_since(start));
  }
  const double t_full = stats::median(full_times);

  std::vector<SpeedupRow> rows;
  for (double p : p_grid) {
    std::vector<double> sample_times;
    std::vector<double> eig_times;
    SpeedupRow row;
    row.p = p;
    for (std::size_t r = 0; r < repetitions; ++r) {
      auto start = std::chrono::steady_clock::now();
      const auto draw = draw_sample(m, SampleConfig{p, seed, true, r});
      sample_times.push_back(seconds_since(start));
      start = std::chrono::steady_clock::now();
      top_k_eigen(draw.s, 1, EigenOptions{1e-10, 0, seed});
      eig_times.push_back(seconds_since(start));
      row.nnz_fraction = static_cast<double>(draw.s.nnz()) / n2;
    }
    row.t_sample = stats::median(sample_times);
    row.t_eig_sub = stats::median(eig_times);
    row.t_eig_full = t_full;
    row.ratio = (row.t_sample + row.t_eig_sub) / t_full;
    rows.push_back(row);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<AlignmentRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.p << ',' << r.samples << ',' << r.alignment << ',' << r.median_alignment << ','
        << r.mean_alignment << ',' << r.std_alignment << ',';
    put_optional(out, r.pert_fraction);
    out << ',' << r.error << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<PagerankRow>& rows) {
  out << kPagerankCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.p << ',' << r.samples << ',' << r.rho << ',' << r.median_rho << ',' << r.mean_rho
        << ',' << r.std_rho << ',' << r.alignment << ',';
    put_optional(out, r.pert_fraction);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<SpeedupRow>& rows) {
  out << kSpeedupCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.p << ',' << r.t_sample << ',' << r.t_eig_sub << ',' << r.t_eig_full << ','
        << r.ratio << ',' << r.nnz_fraction << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<BlowupTrace>& traces) {
  out << kBlowupCsvHeader << '\n';
  for (const auto& t : traces) {
    for (const auto& d : t.draws) {
      out << t.n << ',' << t.p << ',' << d.draw << ',' << d.max_t_over_n << ',' << d.opnorm << ','
          << t.k_over_2np << ',' << t.tail_lower_bound_log << '\n';
    }
  }
}

}  // namespace avgeig
