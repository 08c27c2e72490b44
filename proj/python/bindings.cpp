#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "avgeig/blowup.hpp"
#include "avgeig/eigensolver.hpp"
#include "avgeig/errors.hpp"
#include "avgeig/estimator.hpp"
#include "avgeig/graph.hpp"
#include "avgeig/incoherence.hpp"
#include "avgeig/perturbation.hpp"
#include "avgeig/subsample.hpp"
#include "avgeig/synth.hpp"

namespace py = pybind11;
using namespace avgeig;
using namespace pybind11::literals;

namespace {

// Models cross the boundary as (eigenvalues, eigenvectors[, alpha]).
SpectralModel make_model(const Vector& values, const DenseMatrix& vectors,
                         std::vector<double> alpha) {
  return SpectralModel(values, vectors, std::move(alpha));
}

py::dict report_dict(const EstimatorReport& r) {
  py::dict d("nu"_a = r.nu, "samples"_a = r.samples,
             "sample_eigenvalues"_a = r.sample_eigenvalues);
  d["alignment"] = r.alignment ? py::cast(*r.alignment) : py::none();
  d["error"] = r.error ? py::cast(*r.error) : py::none();
  d["xi"] = r.xi ? py::cast(*r.xi) : py::none();
  d["predicted_error"] = r.predicted_error ? py::cast(*r.predicted_error) : py::none();
  d["per_sample_alignments"] = r.per_sample_alignments;
  d["per_sample_errors"] = r.per_sample_errors;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Averaged eigenvectors of elementwise-subsampled matrices";

  // Every library error derives from avgeig.Error; argument errors are also ValueErrors.
  // Translators registered later take precedence, so the base goes first.
  const py::object base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  const py::tuple value_bases = py::make_tuple(base, py::handle(PyExc_ValueError));
  py::register_exception<NoConvergence>(m, "NoConvergence", base);
  py::register_exception<AllDrawsFailed>(m, "AllDrawsFailed", base);
  py::register_exception<OutsidePerturbativeRegime>(m, "OutsidePerturbativeRegime", base);
  py::register_exception<InfeasibleSupports>(m, "InfeasibleSupports", base);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", value_bases);
  py::register_exception<ShapeMismatch>(m, "ShapeMismatch", value_bases);
  py::register_exception<DomainError>(m, "DomainError", value_bases);
  py::register_exception<InvalidVn>(m, "InvalidVn", value_bases);
  py::register_exception<LengthMismatch>(m, "LengthMismatch", value_bases);
  py::register_exception<ZeroVariance>(m, "ZeroVariance", value_bases);

  m.def(
      "draw_sample",
      [](const DenseMatrix& a, double p, std::uint64_t seed, std::uint64_t stream, bool symmetric) {
        const SampleConfig cfg{p, seed, symmetric, stream};
        return symmetric ? draw_sample(DenseSymmetric(a), cfg).s.to_dense()
                         : draw_sample(a, cfg).s.to_dense();
      },
      "Dense copy of one subsampled matrix S with S_ij = M_ij / p on kept entries.", "m"_a,
      "p"_a, "seed"_a = 0, "stream"_a = 0, "symmetric"_a = true);

  m.def(
      "synth_symmetric",
      [](Index n, std::vector<double> spectrum, std::vector<Index> support_sizes,
         std::optional<double> gap_ratio, std::uint64_t seed) {
        SyntheticSpec spec;
        spec.n = n;
        spec.spectrum = std::move(spectrum);
        spec.support_sizes = std::move(support_sizes);
        spec.gap_ratio = gap_ratio;
        spec.seed = seed;
        auto [mat, model] = synth_symmetric(spec);
        return py::make_tuple(mat.matrix(), model.eigenvalues(), model.eigenvectors(),
                              model.alpha());
      },
      "Returns (M, eigenvalues, eigenvectors, alpha).", "n"_a, "spectrum"_a,
      "support_sizes"_a = std::vector<Index>{}, "gap_ratio"_a = py::none(), "seed"_a = 0);

  m.def(
      "mu",
      [](const Vector& values, const DenseMatrix& vectors, std::vector<double> alpha) {
        return mu(make_model(values, vectors, std::move(alpha)));
      },
      "sum_i |lambda_i| n^alpha_i ||u_i||_inf^2", "eigenvalues"_a, "eigenvectors"_a, "alpha"_a);

  m.def(
      "incoherence_bound",
      [](const Vector& values, const DenseMatrix& vectors, std::vector<double> alpha, double p) {
        const auto r = incoherence_bound(make_model(values, vectors, std::move(alpha)), p);
        return py::dict("value"_a = r.value, "hypothesis_ratio"_a = r.hypothesis_ratio,
                        "alpha_floor"_a = r.alpha_floor, "hypotheses_ok"_a = r.hypotheses_ok);
      },
      "eigenvalues"_a, "eigenvectors"_a, "alpha"_a, "p"_a);

  m.def(
      "am07_bound", [](const DenseMatrix& a, double p) { return am07_bound(DenseSymmetric(a), p); },
      "4 ||M||_inf sqrt(n / p)", "m"_a, "p"_a);

  m.def(
      "top_k_eigen",
      [](const DenseMatrix& a, std::size_t k, double tol, std::size_t max_iter) {
        EigenOptions opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        const auto pairs = top_k_eigen(DenseSymmetric(a), k, opt);
        Vector values(static_cast<Index>(pairs.size()));
        DenseMatrix vectors(a.rows(), static_cast<Index>(pairs.size()));
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          values(static_cast<Index>(i)) = pairs[i].value;
          vectors.col(static_cast<Index>(i)) = pairs[i].vector;
        }
        return py::make_tuple(values, vectors);
      },
      "Leading k eigenpairs (algebraic order) by power iteration with deflation.", "m"_a, "k"_a,
      "tol"_a = 1e-10, "max_iter"_a = 0);

  m.def(
      "spectral_norm", [](const DenseMatrix& a) { return spectral_norm(a); }, "m"_a);

  m.def(
      "estimate",
      [](const DenseMatrix& a, double p, std::size_t num_samples, Index k, std::uint64_t seed,
         const std::string& gauge, std::size_t workers, std::optional<Vector> eigenvalues,
         std::optional<DenseMatrix> eigenvectors) {
        AveragingPlan plan;
        plan.p = p;
        plan.num_samples = num_samples;
        plan.k = k;
        plan.seed = seed;
        plan.gauge = parse_gauge(gauge);
        plan.workers = workers;
        const DenseSymmetric mat(a);
        if (eigenvalues.has_value() != eigenvectors.has_value()) {
          throw InvalidArgument("pass both eigenvalues and eigenvectors, or neither");
        }
        if (eigenvalues) {
          const SpectralModel truth(*eigenvalues, *eigenvectors, fit_alpha(*eigenvectors));
          return report_dict(estimate(mat, plan, &truth));
        }
        return report_dict(estimate(mat, plan));
      },
      "Averaged k-th eigenvector (0-based) of num_samples subsampled copies.", "m"_a, "p"_a,
      "num_samples"_a, "k"_a = 0, "seed"_a = 0, "gauge"_a = "avg-norm", "workers"_a = 1,
      "eigenvalues"_a = py::none(), "eigenvectors"_a = py::none());

  m.def(
      "expand",
      [](const Vector& values, const DenseMatrix& vectors, Index k, const DenseMatrix& e,
         std::size_t order) {
        const auto x = expand(make_model(values, vectors, {}), k, DenseSymmetric(e), order);
        return py::dict("corrected"_a = x.corrected, "gamma"_a = x.gamma, "norm_e"_a = x.norm_e,
                        "ratio"_a = x.ratio, "error_budget"_a = x.error_budget);
      },
      "Order-j expansion of the k-th eigenvector of M + E, in the gauge v^T u = 1.",
      "eigenvalues"_a, "eigenvectors"_a, "k"_a, "e"_a, "order"_a);

  m.def(
      "pagerank",
      [](Index n, const std::vector<std::pair<Index, Index>>& edges, double c) {
        const WebGraph g(n, edges);
        return pagerank(GoogleMatrix(g, c));
      },
      "n"_a, "edges"_a, "c"_a = 0.85);

  m.def(
      "spearman_rho",
      [](const Vector& x, const Vector& y, double tie_tol) { return spearman_rho(x, y, tie_tol); },
      "x"_a, "y"_a, "tie_tol"_a = 0.0);

  m.def("t_diagonal", &t_diagonal, "degrees"_a, "n"_a, "p"_a);
  m.def("threshold_k", &threshold_k, "n"_a, "p"_a, "delta"_a);
  m.def(
      "bollobas_lower_bound",
      [](Index n, double p, double k) {
        const auto b = bollobas_lower_bound(n, p, k);
        return py::dict("log_bound"_a = b.log_bound, "bound"_a = b.bound,
                        "log_witness"_a = b.log_witness, "witness"_a = b.witness);
      },
      "n"_a, "p"_a, "k"_a);
  m.def(
      "blowup",
      [](std::vector<Index> n_grid, std::size_t draws, double delta, std::uint64_t seed,
         bool contrast) {
        BlowupConfig cfg;
        cfg.n_grid = std::move(n_grid);
        cfg.draws = draws;
        cfg.delta = delta;
        cfg.seed = seed;
        cfg.regime = contrast ? BlowupRegime::Contrast : BlowupRegime::Critical;
        py::list out;
        for (const auto& t : blowup_experiment(cfg)) {
          out.append(py::dict("n"_a = t.n, "p"_a = t.p, "max_t_over_n"_a = t.max_t_over_n,
                              "opnorm"_a = t.opnorm_estimate, "k_over_2np"_a = t.k_over_2np,
                              "tail_lower_bound"_a = t.tail_lower_bound));
        }
        return out;
      },
      "n_grid"_a, "draws"_a = 5, "delta"_a = 0.5, "seed"_a = 0, "contrast"_a = false);
}
