// avgeig: command line front end for the averaged-eigenvector experiments.
//
// Every subcommand prints one table, as CSV (frozen headers) or as a JSON
// array of objects with the same keys. Eigenpair indices are 1-based here.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "avgeig/blowup.hpp"
#include "avgeig/errors.hpp"
#include "avgeig/estimator.hpp"
#include "avgeig/graph.hpp"
#include "avgeig/incoherence.hpp"
#include "avgeig/matrix_market.hpp"
#include "avgeig/stats.hpp"
#include "avgeig/sweeps.hpp"
#include "avgeig/synth.hpp"

using namespace avgeig;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitInfeasible = 4;

constexpr std::string_view kBoundsCsvHeader =
    "p,n,k,alpha_min,mu,am07_bound,incoherence_bound,bound_ratio,hypothesis_ratio,"
    "hypotheses_ok,separation,admissible,xi,strong_separation_ok";
constexpr std::string_view kEstimateCsvHeader =
    "side,p,samples,k,gauge,alignment,median_alignment,error,xi,predicted_error,"
    "strong_separation_ok";
constexpr std::string_view kBlowupSummaryCsvHeader =
    "n,p,max_T_over_n,opnorm,mean_max_T_over_n,k_threshold,k_over_2np,tail_lower_bound,"
    "tail_lower_bound_log";

struct Globals {
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string format = "csv";
};

std::vector<std::string> split_header(std::string_view header) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = header.find(',', start);
    out.emplace_back(header.substr(start, comma - start));
    if (comma == std::string_view::npos) {
      return out;
    }
    start = comma + 1;
  }
}

std::string csv_field(const json& v) {
  if (v.is_null()) {
    return "";
  }
  if (v.is_boolean()) {
    return v.get<bool>() ? "1" : "0";
  }
  if (v.is_number_float()) {
    const double x = v.get<double>();
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  }
  if (v.is_string()) {
    return v.get<std::string>();
  }
  return v.dump();
}

// Rows must carry exactly the header's keys, in order.
void emit(std::ostream& out, const Globals& g, std::string_view header, const json& rows) {
  const auto columns = split_header(header);
  for (const auto& row : rows) {
    std::size_t i = 0;
    for (const auto& item : row.items()) {
      if (i >= columns.size() || item.key() != columns[i]) {
        throw std::logic_error("row keys do not match the CSV header at " + item.key());
      }
      ++i;
    }
    if (i != columns.size()) {
      throw std::logic_error("row is missing CSV columns");
    }
  }
  if (g.format == "json") {
    out << rows.dump(2) << '\n';
    return;
  }
  out << header << '\n';
  for (const auto& row : rows) {
    bool first = true;
    for (const auto& item : row.items()) {
      out << (first ? "" : ",") << csv_field(item.value());
      first = false;
    }
    out << '\n';
  }
}

json optional_value(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }
json optional_value(const std::optional<bool>& x) { return x ? json(*x) : json(nullptr); }

/// Ground truth either from a Matrix Market file or from a synthetic spec.
struct MatrixSource {
  std::string path;
  Index n = 200;
  Index m = 0;
  std::vector<double> spectrum{1.0, 0.5, 0.25};
  std::vector<Index> support;
  std::vector<Index> right_support;
  std::optional<double> gap_ratio;
  std::string layout = "nested";
  std::optional<std::uint64_t> matrix_seed;

  void add(CLI::App* app) {
    app->add_option("--matrix", path, "Matrix Market file (symmetric); overrides the synthetic model")
        ->check(CLI::ExistingFile);
    app->add_option("--n", n, "Synthetic size")->check(CLI::PositiveNumber);
    app->add_option("--m", m, "Column count of a rectangular synthetic model (0: symmetric)");
    app->add_option("--spectrum", spectrum, "Strictly decreasing positive eigenvalues")
        ->delimiter(',');
    app->add_option("--support", support, "Support size of each eigenvector (default dense)")
        ->delimiter(',');
    app->add_option("--right-support", right_support, "Support sizes of right singular vectors")
        ->delimiter(',');
    app->add_option("--gap-ratio", gap_ratio, "Rescale so lambda_1 = 1 and lambda_2 = ratio");
    app->add_option("--layout", layout, "Support layout")
        ->check(CLI::IsMember({"nested", "disjoint"}));
    app->add_option("--matrix-seed", matrix_seed,
                    "Seed of the synthetic model (default derived from --seed)");
  }

  SyntheticSpec spec(const Globals& g) const {
    SyntheticSpec s;
    s.n = n;
    s.m = m;
    s.spectrum = spectrum;
    s.support_sizes = support;
    s.right_support_sizes = right_support;
    s.gap_ratio = gap_ratio;
    s.layout = layout == "disjoint" ? SupportLayout::Disjoint : SupportLayout::Nested;
    // Keeps the model's RNG streams apart from the sampling streams under one --seed.
    s.seed = matrix_seed.value_or(g.seed ^ 0x9e3779b97f4a7c15ULL);
    return s;
  }

  bool rectangular() const { return path.empty() && m > 0; }

  std::pair<DenseSymmetric, SpectralModel> symmetric(const Globals& g) const {
    if (path.empty()) {
      if (m > 0) {
        throw InvalidArgument("this subcommand needs a symmetric model; drop --m");
      }
      return synth_symmetric(spec(g));
    }
    DenseSymmetric mat = to_dense_symmetric(read_matrix_market(path));
    SpectralModel model = SpectralModel::from_dense(mat);
    return {std::move(mat), std::move(model)};
  }
};

json bounds_rows(const MatrixSource& src, const Globals& g, const std::vector<double>& p_grid,
                 Index k1, const BoundConfig& config) {
  auto [m, model] = src.symmetric(g);
  const Index k = k1 - 1;
  if (k < 0 || k >= model.rank()) {
    throw InvalidArgument("--k must lie in [1, rank]");
  }
  const double ratio = bound_ratio(m, model);
  const double mu_value = mu(model);
  json rows = json::array();
  for (double p : p_grid) {
    const auto report = incoherence_bound(model, p, config);
    const auto adm = perturbation_admissible(model, p, k, config);
    const double x = xi(model, p);
    rows.push_back({
        {"p", p},
        {"n", model.n()},
        {"k", k1},
        {"alpha_min", model.alpha_min()},
        {"mu", mu_value},
        {"am07_bound", am07_bound(m, p)},
        {"incoherence_bound", report.value},
        {"bound_ratio", ratio},
        {"hypothesis_ratio", report.hypothesis_ratio},
        {"hypotheses_ok", report.hypotheses_ok},
        {"separation", adm.separation},
        {"admissible", adm.ok},
        {"xi", x},
        {"strong_separation_ok", strong_separation_ok(x, adm.separation)},
    });
  }
  return rows;
}

json estimate_row(const char* side, const AveragingPlan& plan, const EstimatorReport& r) {
  std::optional<double> median;
  if (!r.per_sample_alignments.empty()) {
    median = stats::median(r.per_sample_alignments);
  }
  return {
      {"side", side},
      {"p", plan.p},
      {"samples", r.samples},
      {"k", plan.k + 1},
      {"gauge", to_string(plan.gauge)},
      {"alignment", optional_value(r.alignment)},
      {"median_alignment", optional_value(median)},
      {"error", optional_value(r.error)},
      {"xi", optional_value(r.xi)},
      {"predicted_error", optional_value(r.predicted_error)},
      {"strong_separation_ok", optional_value(r.strong_condition_ok)},
  };
}

void write_vector(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) {
    throw InvalidArgument("cannot open " + path);
  }
  out.precision(17);
  for (Index i = 0; i < v.size(); ++i) {
    out << v(i) << '\n';
  }
}

json sweep_json(const std::vector<AlignmentRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"p", r.p},
                   {"samples", r.samples},
                   {"alignment", r.alignment},
                   {"median_alignment", r.median_alignment},
                   {"mean_alignment", r.mean_alignment},
                   {"std_alignment", r.std_alignment},
                   {"pert_fraction", optional_value(r.pert_fraction)},
                   {"error", r.error}});
  }
  return out;
}

json pagerank_json(const std::vector<PagerankRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"p", r.p},
                   {"samples", r.samples},
                   {"rho", r.rho},
                   {"median_rho", r.median_rho},
                   {"mean_rho", r.mean_rho},
                   {"std_rho", r.std_rho},
                   {"alignment", r.alignment},
                   {"pert_fraction", optional_value(r.pert_fraction)}});
  }
  return out;
}

json speedup_json(const std::vector<SpeedupRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"p", r.p},
                   {"t_sample", r.t_sample},
                   {"t_eig_sub", r.t_eig_sub},
                   {"t_eig_full", r.t_eig_full},
                   {"ratio", r.ratio},
                   {"nnz_fraction", r.nnz_fraction}});
  }
  return out;
}

json blowup_json(const std::vector<BlowupTrace>& traces, bool summary) {
  json out = json::array();
  for (const auto& t : traces) {
    if (summary) {
      out.push_back({{"n", t.n},
                     {"p", t.p},
                     {"max_T_over_n", t.max_t_over_n},
                     {"opnorm", t.opnorm_estimate},
                     {"mean_max_T_over_n", t.mean_max_t_over_n},
                     {"k_threshold", t.k_threshold},
                     {"k_over_2np", t.k_over_2np},
                     {"tail_lower_bound", t.tail_lower_bound},
                     {"tail_lower_bound_log", t.tail_lower_bound_log}});
      continue;
    }
    for (const auto& d : t.draws) {
      out.push_back({{"n", t.n},
                     {"p", t.p},
                     {"draw", d.draw},
                     {"max_T_over_n", d.max_t_over_n},
                     {"opnorm", d.opnorm},
                     {"k_over_2np", t.k_over_2np},
                     {"tail_lower_bound_log", t.tail_lower_bound_log}});
    }
  }
  return out;
}

std::ostream* open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") {
    return &std::cout;
  }
  file.open(path);
  if (!file) {
    throw InvalidArgument("cannot open " + path);
  }
  return &file;
}

int run(int argc, char** argv) {
  CLI::App app{"Averaged eigenvectors of subsampled matrices: bounds, estimates and sweeps"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out-format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Spectral-norm error bounds and regime checks");
  MatrixSource bounds_src;
  bounds_src.add(bounds);
  std::vector<double> bounds_p{0.5, 0.25, 0.1};
  Index bounds_k = 1;
  BoundConfig bound_config;
  bounds->add_option("--p", bounds_p, "Sampling rates")->delimiter(',');
  bounds->add_option("--k", bounds_k, "Eigenpair index (1-based)");
  bounds->add_option("--ratio-threshold", bound_config.ratio_threshold,
                     "Largest hypothesis ratio treated as asymptotic");
  bounds->add_option("--delta", bound_config.delta, "delta of the alpha_min floor");

  // estimate
  auto* est = app.add_subcommand("estimate", "Averaged eigenvector of N subsampled copies");
  MatrixSource est_src;
  est_src.add(est);
  AveragingPlan plan;
  Index est_k = 1;
  std::string est_gauge = "avg-norm";
  std::string vector_out;
  bool no_truth = false;
  est->add_option("--p", plan.p, "Sampling rate")->required();
  est->add_option("--samples,-N", plan.num_samples, "Number of draws")->capture_default_str();
  est->add_option("--k", est_k, "Eigenpair index (1-based)");
  est->add_option("--gauge", est_gauge)->check(CLI::IsMember({"avg-norm", "norm-avg"}));
  est->add_option("--tol", plan.eigen.tol, "Eigensolver tolerance");
  est->add_option("--max-iter", plan.eigen.max_iter, "Eigensolver iteration cap");
  est->add_option("--vector-out", vector_out, "Write the averaged vector, one entry per line");
  est->add_flag("--no-truth", no_truth, "Skip the dense ground-truth solve for --matrix input");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Alignment with the truth across sampling rates");
  MatrixSource sweep_src;
  sweep_src.add(sweep);
  SweepConfig sweep_cfg;
  sweep_cfg.p_grid = {1.0, 0.5, 0.2, 0.1, 0.05};
  Index sweep_k = 1;
  std::string sweep_gauge = "avg-norm";
  std::vector<std::size_t> sample_grid;
  bool sweep_no_pert = false;
  sweep->add_option("--p", sweep_cfg.p_grid, "Sampling rates")->delimiter(',');
  sweep->add_option("--samples,-N", sweep_cfg.samples)->capture_default_str();
  sweep->add_option("--k", sweep_k, "Eigenpair index (1-based)");
  sweep->add_option("--gauge", sweep_gauge)->check(CLI::IsMember({"avg-norm", "norm-avg"}));
  sweep->add_option("--sample-grid", sample_grid,
                    "Sweep N at the single --p instead of sweeping p")
      ->delimiter(',');
  sweep->add_flag("--no-pert-fraction", sweep_no_pert, "Skip the per-draw ||E|| solves");

  // pagerank-sweep
  auto* pr = app.add_subcommand("pagerank-sweep", "Rank correlation of averaged PageRank vectors");
  std::string graph_path;
  Index pr_nodes = 500;
  Index pr_links = 3;
  PagerankSweepConfig pr_cfg;
  pr_cfg.p_grid = {1.0, 0.5, 0.2, 0.1, 0.05};
  std::string variant = "google";
  bool pr_no_pert = false;
  pr->add_option("--graph", graph_path, "Edge list (default: synthetic power-law graph)")
      ->check(CLI::ExistingFile);
  pr->add_option("--nodes", pr_nodes, "Synthetic graph size")->check(CLI::PositiveNumber);
  pr->add_option("--out-links", pr_links, "Out-links per synthetic node");
  pr->add_option("--p", pr_cfg.p_grid, "Sampling rates")->delimiter(',');
  pr->add_option("--samples,-N", pr_cfg.samples)->capture_default_str();
  pr->add_option("--damping,-c", pr_cfg.damping)->capture_default_str();
  pr->add_option("--variant", variant, "Matrix that is subsampled")
      ->check(CLI::IsMember({"google", "adjacency"}));
  pr->add_option("--tie-tol", pr_cfg.tie_tol, "Relative tie tolerance of the ranks");
  pr->add_flag("--no-pert-fraction", pr_no_pert, "Skip the per-draw ||S - P|| solves");

  // blowup
  auto* blow = app.add_subcommand("blowup", "Degree-driven growth of ||C / sqrt(n)||");
  BlowupConfig blow_cfg;
  blow_cfg.n_grid = {1024, 2048, 4096, 8192};
  std::string regime = "critical";
  bool blow_summary = false;
  blow->add_option("--n", blow_cfg.n_grid, "Matrix sizes")->delimiter(',');
  blow->add_option("--draws", blow_cfg.draws)->capture_default_str();
  blow->add_option("--delta", blow_cfg.delta)->capture_default_str();
  blow->add_option("--regime", regime, "critical: p = (log n)^(1-delta)/n, contrast: (log n)^2/n")
      ->check(CLI::IsMember({"critical", "contrast"}));
  blow->add_option("--norm-tol", blow_cfg.norm_tol, "Relative tolerance of the norm iteration");
  blow->add_flag("--summary", blow_summary, "One row per n with medians over draws");

  // speedup
  auto* speed = app.add_subcommand("speedup", "Sampling plus subsampled solve vs full solve");
  MatrixSource speed_src;
  speed_src.n = 2000;
  speed_src.add(speed);
  std::vector<double> speed_p{1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  std::size_t repetitions = 5;
  speed->add_option("--p", speed_p, "Sampling rates")->delimiter(',');
  speed->add_option("--repetitions", repetitions, "Timing repetitions (at least 5)");

  // synth
  auto* syn = app.add_subcommand("synth", "Write a synthetic matrix as Matrix Market");
  MatrixSource syn_src;
  syn_src.add(syn);
  std::string syn_out;
  std::string model_out;
  syn->add_option("--out,-o", syn_out, "Output path (default stdout)");
  syn->add_option("--model-out", model_out, "Write eigenvalues, alpha and mu as JSON");

  // gen-graph
  auto* gen = app.add_subcommand("gen-graph", "Write a preferential-attachment edge list");
  Index gen_nodes = 500;
  Index gen_links = 3;
  std::string gen_out;
  gen->add_option("--nodes", gen_nodes)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--out-links", gen_links)->capture_default_str();
  gen->add_option("--out,-o", gen_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  std::cout.precision(12);

  if (*bounds) {
    emit(std::cout, g, kBoundsCsvHeader, bounds_rows(bounds_src, g, bounds_p, bounds_k, bound_config));
  } else if (*est) {
    plan.k = est_k - 1;
    plan.seed = g.seed;
    plan.workers = g.workers;
    plan.gauge = parse_gauge(est_gauge);
    json rows = json::array();
    if (est_src.rectangular()) {
      auto [m, model] = synth_rect(est_src.spec(g));
      const auto r = estimate_rect(m, plan, &model);
      rows.push_back(estimate_row("left", plan, r.left));
      rows.push_back(estimate_row("right", plan, r.right));
      if (!vector_out.empty()) {
        write_vector(vector_out, r.left.nu);
      }
    } else {
      EstimatorReport r;
      if (!est_src.path.empty() && no_truth) {
        r = estimate(to_dense_symmetric(read_matrix_market(est_src.path)), plan);
      } else {
        auto [m, truth] = est_src.symmetric(g);
        r = estimate(m, plan, &truth);
      }
      rows.push_back(estimate_row("sym", plan, r));
      if (!vector_out.empty()) {
        write_vector(vector_out, r.nu);
      }
    }
    emit(std::cout, g, kEstimateCsvHeader, rows);
  } else if (*sweep) {
    auto [m, truth] = sweep_src.symmetric(g);
    sweep_cfg.seed = g.seed;
    sweep_cfg.workers = g.workers;
    sweep_cfg.k = sweep_k - 1;
    sweep_cfg.gauge = parse_gauge(sweep_gauge);
    sweep_cfg.pert_fraction = !sweep_no_pert;
    std::vector<AlignmentRow> rows;
    if (sample_grid.empty()) {
      rows = sweep_alignment(m, truth, sweep_cfg);
    } else {
      if (sweep_cfg.p_grid.size() != 1) {
        throw InvalidArgument("--sample-grid needs exactly one --p");
      }
      rows = sweep_samples(m, truth, sweep_cfg.p_grid.front(), sample_grid, sweep_cfg);
    }
    emit(std::cout, g, kSweepCsvHeader, sweep_json(rows));
  } else if (*pr) {
    const WebGraph graph = graph_path.empty()
                               ? gen_power_law(pr_nodes, pr_links, g.seed ^ 0x9e3779b97f4a7c15ULL)
                               : load_edge_list(std::filesystem::path(graph_path));
    pr_cfg.seed = g.seed;
    pr_cfg.workers = g.workers;
    pr_cfg.variant = variant == "adjacency" ? PagerankSubsample::Adjacency : PagerankSubsample::Google;
    pr_cfg.pert_fraction = !pr_no_pert;
    emit(std::cout, g, kPagerankCsvHeader, pagerank_json(sweep_pagerank(graph, pr_cfg)));
  } else if (*blow) {
    blow_cfg.seed = g.seed;
    blow_cfg.workers = g.workers;
    blow_cfg.regime = regime == "contrast" ? BlowupRegime::Contrast : BlowupRegime::Critical;
    const auto traces = blowup_experiment(blow_cfg);
    emit(std::cout, g, blow_summary ? kBlowupSummaryCsvHeader : kBlowupCsvHeader,
         blowup_json(traces, blow_summary));
  } else if (*speed) {
    DenseSymmetric m = speed_src.path.empty() ? synth_symmetric(speed_src.spec(g)).first
                                              : to_dense_symmetric(read_matrix_market(speed_src.path));
    emit(std::cout, g, kSpeedupCsvHeader, speedup_json(speedup_harness(m, speed_p, g.seed, repetitions)));
  } else if (*syn) {
    std::ofstream file;
    std::ostream* out = open_output(syn_out, file);
    out->precision(17);
    json model_json;
    if (syn_src.rectangular()) {
      auto [m, model] = synth_rect(syn_src.spec(g));
      write_matrix_market(*out, m);
      model_json = {{"singular_values", std::vector<double>(model.singular_values().begin(),
                                                            model.singular_values().end())},
                    {"alpha", model.alpha()},
                    {"beta", model.beta()},
                    {"mu", mu_rect(model)}};
    } else {
      auto [m, model] = syn_src.symmetric(g);
      write_matrix_market(*out, m);
      model_json = {{"eigenvalues", std::vector<double>(model.eigenvalues().begin(),
                                                        model.eigenvalues().end())},
                    {"alpha", model.alpha()},
                    {"mu", mu(model)}};
    }
    if (!model_out.empty()) {
      std::ofstream mo(model_out);
      if (!mo) {
        throw InvalidArgument("cannot open " + model_out);
      }
      mo << model_json.dump(2) << '\n';
    }
  } else if (*gen) {
    std::ofstream file;
    std::ostream* out = open_output(gen_out, file);
    write_edge_list(*out, gen_power_law(gen_nodes, gen_links, g.seed));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const NoConvergence& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const AllDrawsFailed& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const Error& e) {
    std::cerr << "infeasible configuration: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
