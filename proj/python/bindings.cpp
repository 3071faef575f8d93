#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "genlab/cli.hpp"
#include "genlab/experiments.hpp"
#include "genlab/svg.hpp"

namespace py = pybind11;
using namespace genlab;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Latent-variable generative model for non-contrastive "
              "self-supervised learning: samplers, exact likelihood, "
              "closed-form and numeric MLEs, posterior sampling, and the "
              "experiment harness.";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<InvalidMatrix>(m, "InvalidMatrix", PyExc_ValueError);
    py::register_exception<NotPSD>(m, "NotPSDError", PyExc_ValueError);
    py::register_exception<InvalidNoise>(m, "InvalidNoise", PyExc_ValueError);
    py::register_exception<SingularModel>(m, "SingularModelError", PyExc_ValueError);
    py::register_exception<InvalidPrior>(m, "InvalidPrior", PyExc_ValueError);
    py::register_exception<DegenerateData>(m, "DegenerateDataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure",
                                               PyExc_RuntimeError);

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform", &Rng::uniform)
        .def("normal", &Rng::normal);

    m.def("mix64", &mix64, py::arg("x"));
    m.def("hash_combine", &hash_combine, py::arg("a"), py::arg("b"));

    py::class_<SymMatrix>(m, "SymMatrix")
        .def(py::init<const Matrix&>(), py::arg("m"))
        .def_property_readonly("mat", &SymMatrix::mat)
        .def_property_readonly("dim", &SymMatrix::dim);

    py::class_<EigenPairs>(m, "EigenPairs")
        .def_readonly("values", &EigenPairs::values)
        .def_readonly("vectors", &EigenPairs::vectors);

    py::class_<OrthonormalFrame>(m, "OrthonormalFrame")
        .def(py::init<const Matrix&>(), py::arg("m"))
        .def_property_readonly("mat", &OrthonormalFrame::mat)
        .def_property_readonly("rows", &OrthonormalFrame::rows)
        .def_property_readonly("cols", &OrthonormalFrame::cols);

    m.def("sym_eig", &sym_eig, py::arg("m"));
    m.def("sample_orthonormal", &sample_orthonormal, py::arg("d"), py::arg("k"),
          py::arg("rng"));
    m.def("psd_sqrt", &psd_sqrt, py::arg("m"));
    m.def("structured_inverse_iso", &structured_inverse_iso, py::arg("w"),
          py::arg("sigma2"));
    m.def("structured_inverse_ortho", &structured_inverse_ortho, py::arg("w"),
          py::arg("gamma"));
    m.def("gram_schmidt", &gram_schmidt, py::arg("m"));
    m.def(
        "procrustes_align",
        [](const Matrix& z_true, const Matrix& z_hat) {
            const ProcrustesResult r = procrustes_align(z_true, z_hat);
            return py::make_tuple(r.q, r.degenerate);
        },
        py::arg("z_true"), py::arg("z_hat"),
        "Returns (Q, degenerate): Q minimizes ||Z_true - Z_hat Q^T||_F.");

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def_static("isotropic", &NoiseSpec::isotropic, py::arg("scale"))
        .def_static("orthogonal_complement", &NoiseSpec::orthogonal_complement,
                    py::arg("level"))
        .def_static("custom", &NoiseSpec::custom, py::arg("cov"))
        .def("realize", &NoiseSpec::realize, py::arg("w"));

    py::class_<ModelParams>(m, "ModelParams")
        .def_readonly("w", &ModelParams::w)
        .def_readonly("a", &ModelParams::a)
        .def_readonly("b", &ModelParams::b)
        .def_readonly("d", &ModelParams::d)
        .def_readonly("k", &ModelParams::k)
        .def("hash", &ModelParams::hash);

    m.def("make_params", &make_params, py::arg("d"), py::arg("k"), py::arg("w"),
          py::arg("a_spec"), py::arg("b_spec"));

    py::class_<MixtureComponent>(m, "MixtureComponent")
        .def(py::init([](double weight, const Vector& mean, const SymMatrix& cov) {
                 return MixtureComponent{weight, mean, cov};
             }),
             py::arg("weight"), py::arg("mean"), py::arg("cov"))
        .def_readonly("weight", &MixtureComponent::weight)
        .def_readonly("mean", &MixtureComponent::mean)
        .def_readonly("cov", &MixtureComponent::cov);

    py::class_<LatentSpec>(m, "LatentSpec")
        .def_static("standard_gaussian", &LatentSpec::standard_gaussian, py::arg("k"))
        .def_static("mixture", &LatentSpec::mixture, py::arg("components"))
        .def_property_readonly("k", &LatentSpec::k)
        .def_property_readonly("is_mixture", &LatentSpec::is_mixture)
        .def("hash", &LatentSpec::hash);

    py::class_<PairedDataset>(m, "PairedDataset")
        .def_readonly("z", &PairedDataset::z)
        .def_readonly("x", &PairedDataset::x)
        .def_readonly("xplus", &PairedDataset::xplus)
        .def_readonly("params_hash", &PairedDataset::params_hash)
        .def_readonly("latent_hash", &PairedDataset::latent_hash)
        .def_readonly("seed", &PairedDataset::seed)
        .def_property_readonly("n", &PairedDataset::n);

    m.def("sample_latents", &sample_latents, py::arg("spec"), py::arg("n"),
          py::arg("rng"));
    m.def("sample_dataset", &sample_dataset, py::arg("params"), py::arg("latent"),
          py::arg("n"), py::arg("rng"), py::arg("seed_tag") = 0);

    py::class_<SufficientStats>(m, "SufficientStats")
        .def_static("zero", &SufficientStats::zero, py::arg("d"))
        .def_readonly("s_delta", &SufficientStats::s_delta)
        .def_readonly("s_x", &SufficientStats::s_x)
        .def_readonly("n", &SufficientStats::n)
        .def_property_readonly("dim", &SufficientStats::dim);

    m.def("sufficient_stats", &sufficient_stats, py::arg("data"));
    m.def("neg_log_likelihood", &neg_log_likelihood, py::arg("w"), py::arg("a"),
          py::arg("b"), py::arg("stats"));
    m.def("neg_log_likelihood_dense", &neg_log_likelihood_dense, py::arg("w"),
          py::arg("a"), py::arg("b"), py::arg("stats"));

    py::class_<PriorSpec>(m, "PriorSpec")
        .def_static("uniform", &PriorSpec::uniform)
        .def_static("concentration", &PriorSpec::concentration, py::arg("w0"),
                    py::arg("kappa"))
        .def("log_density", &PriorSpec::log_density, py::arg("w"));

    m.def("log_posterior", &log_posterior, py::arg("w"), py::arg("a"), py::arg("b"),
          py::arg("stats"), py::arg("prior"));

    py::enum_<FitMethod>(m, "FitMethod")
        .value("PCA", FitMethod::PCA)
        .value("SSL", FitMethod::SSL)
        .value("Numeric", FitMethod::Numeric)
        .value("MAP", FitMethod::MAP);

    py::class_<SubspaceEstimate>(m, "SubspaceEstimate")
        .def_readonly("w_hat", &SubspaceEstimate::w_hat)
        .def_readonly("criterion_values", &SubspaceEstimate::criterion_values)
        .def_readonly("method", &SubspaceEstimate::method)
        .def_readonly("degenerate_spectrum", &SubspaceEstimate::degenerate_spectrum)
        .def_readonly("converged", &SubspaceEstimate::converged)
        .def_readonly("objective", &SubspaceEstimate::objective);

    py::class_<NumericConfig>(m, "NumericConfig")
        .def(py::init<>())
        .def_readwrite("angle_resolution", &NumericConfig::angle_resolution)
        .def_readwrite("max_iters", &NumericConfig::max_iters)
        .def_readwrite("tol", &NumericConfig::tol)
        .def_readwrite("n_starts", &NumericConfig::n_starts)
        .def_readwrite("fd_step", &NumericConfig::fd_step)
        .def_readwrite("init_step", &NumericConfig::init_step)
        .def_readwrite("seed", &NumericConfig::seed);

    m.def("fit_pca", &fit_pca, py::arg("stats"), py::arg("k"));
    m.def("fit_ssl", &fit_ssl, py::arg("stats"), py::arg("k"));
    m.def("fit_numeric",
          py::overload_cast<const SufficientStats&, const NoiseSpec&, const NoiseSpec&,
                            int, const NumericConfig&>(&fit_numeric),
          py::arg("stats"), py::arg("a_spec"), py::arg("b_spec"), py::arg("k"),
          py::arg("config") = NumericConfig{});
    m.def("fit_numeric",
          py::overload_cast<const SufficientStats&, const SymMatrix&, const SymMatrix&,
                            int, const NumericConfig&>(&fit_numeric),
          py::arg("stats"), py::arg("a"), py::arg("b"), py::arg("k"),
          py::arg("config") = NumericConfig{});
    m.def("fit_map",
          py::overload_cast<const SufficientStats&, const NoiseSpec&, const NoiseSpec&,
                            int, const PriorSpec&, const NumericConfig&>(&fit_map),
          py::arg("stats"), py::arg("a_spec"), py::arg("b_spec"), py::arg("k"),
          py::arg("prior"), py::arg("config") = NumericConfig{});
    m.def("fit_map",
          py::overload_cast<const SufficientStats&, const SymMatrix&, const SymMatrix&,
                            int, const PriorSpec&, const NumericConfig&>(&fit_map),
          py::arg("stats"), py::arg("a"), py::arg("b"), py::arg("k"), py::arg("prior"),
          py::arg("config") = NumericConfig{});

    py::class_<MhConfig>(m, "MhConfig")
        .def(py::init<>())
        .def_readwrite("step", &MhConfig::step)
        .def_readwrite("burn_in", &MhConfig::burn_in)
        .def_readwrite("thin", &MhConfig::thin);

    py::class_<PosteriorChain>(m, "PosteriorChain")
        .def_readonly("samples", &PosteriorChain::samples)
        .def_readonly("acceptance_rate", &PosteriorChain::acceptance_rate)
        .def_readonly("acceptance_warning", &PosteriorChain::acceptance_warning);

    m.def("sample_posterior_mh",
          py::overload_cast<const SufficientStats&, const NoiseSpec&, const NoiseSpec&,
                            const PriorSpec&, int, int, const MhConfig&, Rng&>(
              &sample_posterior_mh),
          py::arg("stats"), py::arg("a_spec"), py::arg("b_spec"), py::arg("prior"),
          py::arg("k"), py::arg("n_samples"), py::arg("config"), py::arg("rng"));
    m.def("sample_posterior_mh",
          py::overload_cast<const SufficientStats&, const SymMatrix&, const SymMatrix&,
                            const PriorSpec&, int, int, const MhConfig&, Rng&>(
              &sample_posterior_mh),
          py::arg("stats"), py::arg("a"), py::arg("b"), py::arg("prior"), py::arg("k"),
          py::arg("n_samples"), py::arg("config"), py::arg("rng"));

    py::class_<RecoveryReport>(m, "RecoveryReport")
        .def_readonly("loss", &RecoveryReport::loss)
        .def_readonly("alignment", &RecoveryReport::alignment)
        .def_readonly("method", &RecoveryReport::method)
        .def_readonly("procrustes_degenerate", &RecoveryReport::procrustes_degenerate);

    m.def(
        "recovery_loss",
        [](const Matrix& z_true, const Matrix& x, const OrthonormalFrame& w_hat,
           const std::optional<OrthonormalFrame>& w_true) {
            return recovery_loss(z_true, x, w_hat, w_true);
        },
        py::arg("z_true"), py::arg("x"), py::arg("w_hat"),
        py::arg("w_true") = std::nullopt);
    m.def("subspace_alignment", &subspace_alignment, py::arg("w"), py::arg("w_hat"));
    m.def("max_principal_angle", &max_principal_angle, py::arg("w"), py::arg("w_hat"));

    py::enum_<Regime>(m, "Regime")
        .value("Isotropic", Regime::Isotropic)
        .value("Orthogonal", Regime::Orthogonal);

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("regime", &SweepConfig::regime)
        .def_readwrite("grid_a", &SweepConfig::grid_a)
        .def_readwrite("grid_b", &SweepConfig::grid_b)
        .def_readwrite("d", &SweepConfig::d)
        .def_readwrite("k", &SweepConfig::k)
        .def_readwrite("n", &SweepConfig::n)
        .def_readwrite("reps", &SweepConfig::reps)
        .def_readwrite("base_seed", &SweepConfig::base_seed);

    py::class_<SweepCell>(m, "SweepCell")
        .def_readonly("row_param", &SweepCell::row_param)
        .def_readonly("col_param", &SweepCell::col_param)
        .def_readonly("mean_diff", &SweepCell::mean_diff)
        .def_readonly("se_diff", &SweepCell::se_diff)
        .def_readonly("reps", &SweepCell::reps)
        .def_readonly("cell_seed", &SweepCell::cell_seed);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("config", &SweepResult::config)
        .def_readonly("cells", &SweepResult::cells)
        .def("to_csv", &SweepResult::to_csv);

    m.def("run_sweep", &run_sweep, py::arg("config"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<KdeCurve>(m, "KdeCurve")
        .def_readonly("eval_points", &KdeCurve::eval_points)
        .def_readonly("densities", &KdeCurve::densities)
        .def_readonly("bandwidth", &KdeCurve::bandwidth);

    m.def("kde", py::overload_cast<const Vector&>(&kde), py::arg("values"));
    m.def("kde", py::overload_cast<const Vector&, const Vector&>(&kde),
          py::arg("values"), py::arg("eval_points"));
    m.def("count_local_maxima", &count_local_maxima, py::arg("curve"));

    py::class_<GmmDemoConfig>(m, "GmmDemoConfig")
        .def(py::init<>())
        .def_readwrite("d", &GmmDemoConfig::d)
        .def_readwrite("k", &GmmDemoConfig::k)
        .def_readwrite("n", &GmmDemoConfig::n)
        .def_readwrite("rho", &GmmDemoConfig::rho)
        .def_readwrite("gamma", &GmmDemoConfig::gamma)
        .def_readwrite("weights", &GmmDemoConfig::weights)
        .def_readwrite("means", &GmmDemoConfig::means)
        .def_readwrite("component_var", &GmmDemoConfig::component_var)
        .def_readwrite("seed", &GmmDemoConfig::seed)
        .def_readwrite("kde_points", &GmmDemoConfig::kde_points);

    py::class_<GmmDemoResult>(m, "GmmDemoResult")
        .def_readonly("w_true", &GmmDemoResult::w_true)
        .def_readonly("w_pca", &GmmDemoResult::w_pca)
        .def_readonly("w_ssl", &GmmDemoResult::w_ssl)
        .def_readonly("z_true", &GmmDemoResult::z_true)
        .def_readonly("z_pca", &GmmDemoResult::z_pca)
        .def_readonly("z_ssl", &GmmDemoResult::z_ssl)
        .def_readonly("kde_true", &GmmDemoResult::kde_true)
        .def_readonly("kde_pca", &GmmDemoResult::kde_pca)
        .def_readonly("kde_ssl", &GmmDemoResult::kde_ssl)
        .def_readonly("x", &GmmDemoResult::x)
        .def_readonly("xplus", &GmmDemoResult::xplus)
        .def_readonly("align_pca", &GmmDemoResult::align_pca)
        .def_readonly("align_ssl", &GmmDemoResult::align_ssl);

    m.def("run_gmm_demo", &run_gmm_demo, py::arg("config") = GmmDemoConfig{});

    m.def("svg_heatmap", &svg_heatmap, py::arg("result"));

#ifdef GENLAB_VERSION
    m.attr("__version__") = GENLAB_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
