#include <doctest.h>

#include <cmath>

#include "genlab/estimators.hpp"
#include "genlab/metrics.hpp"

using namespace genlab;

namespace {

SufficientStats stats_from_diag(std::initializer_list<double> s_delta_diag,
                                std::initializer_list<double> s_x_diag, long n = 100) {
    const int d = static_cast<int>(s_delta_diag.size());
    Matrix sd = Matrix::Zero(d, d), sx = Matrix::Zero(d, d);
    int i = 0;
    for (double v : s_delta_diag) sd(i, i) = v, ++i;
    i = 0;
    for (double v : s_x_diag) sx(i, i) = v, ++i;
    return SufficientStats{SymMatrix(sd), SymMatrix(sx), n};
}

struct Instance {
    ModelParams params;
    PairedDataset data;
    SufficientStats stats;
    NoiseSpec a_spec;
    NoiseSpec b_spec;
};

Instance make_instance(int d, int k, int n, bool isotropic, double va, double vb,
                       std::uint64_t seed) {
    Rng rng(seed);
    const OrthonormalFrame w = sample_orthonormal(d, k, rng);
    NoiseSpec a = isotropic ? NoiseSpec::isotropic(va)
                            : NoiseSpec::orthogonal_complement(va);
    NoiseSpec b = isotropic ? NoiseSpec::isotropic(vb)
                            : NoiseSpec::orthogonal_complement(vb);
    ModelParams params = make_params(d, k, w, a, b);
    PairedDataset data =
        sample_dataset(params, LatentSpec::standard_gaussian(k), n, rng);
    SufficientStats stats = sufficient_stats(data);
    return Instance{std::move(params), std::move(data), std::move(stats),
                    std::move(a), std::move(b)};
}

}  // namespace

TEST_CASE("fit_pca: diagonal scatter picks the top axis") {
    const SufficientStats stats = stats_from_diag({1, 1, 1}, {5, 2, 1});
    const SubspaceEstimate est = fit_pca(stats, 1);
    CHECK(std::abs(est.w_hat.mat()(0, 0)) == doctest::Approx(1.0));
    CHECK(est.criterion_values[0] == doctest::Approx(5.0));
    CHECK_FALSE(est.degenerate_spectrum);
    CHECK(est.method == FitMethod::PCA);
}

TEST_CASE("fit_pca: degenerate spectrum flagged, residual still valid") {
    const SufficientStats stats = stats_from_diag({1, 1, 1}, {1, 1, 1});
    const SubspaceEstimate est = fit_pca(stats, 1);
    CHECK(est.degenerate_spectrum);
    const Vector v = est.w_hat.mat().col(0);
    CHECK((stats.s_x.mat() * v - est.criterion_values[0] * v).norm() < 1e-10);
}

TEST_CASE("fit_ssl: least-variance direction and negated criterion values") {
    const SufficientStats stats = stats_from_diag({5, 2, 1}, {1, 1, 1});
    const SubspaceEstimate est = fit_ssl(stats, 1);
    CHECK(std::abs(est.w_hat.mat()(2, 0)) == doctest::Approx(1.0));
    CHECK(est.criterion_values[0] == doctest::Approx(-1.0));

    const SubspaceEstimate est2 = fit_ssl(stats, 2);
    CHECK(est2.criterion_values[0] == doctest::Approx(-1.0));
    CHECK(est2.criterion_values[1] == doctest::Approx(-2.0));
    CHECK(est2.criterion_values[0] >= est2.criterion_values[1]);
}

TEST_CASE("fit_ssl: zero statistic flags a degenerate spectrum") {
    const SufficientStats stats = stats_from_diag({0, 0, 0}, {1, 2, 3});
    const SubspaceEstimate est = fit_ssl(stats, 1);
    CHECK(est.degenerate_spectrum);
    const Matrix gram = est.w_hat.mat().transpose() * est.w_hat.mat();
    CHECK((gram - Matrix::Identity(1, 1)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fit_pca / fit_ssl: dimension errors") {
    const SufficientStats stats = stats_from_diag({1, 1}, {1, 1});
    CHECK_THROWS_AS(fit_pca(stats, 3), DimensionError);
    CHECK_THROWS_AS(fit_ssl(stats, 0), DimensionError);
}

TEST_CASE("fit_numeric agrees with fit_pca on an isotropic instance (d=2 grid)") {
    const Instance inst = make_instance(2, 1, 2000, true, 0.1, 0.1, 501);
    const SubspaceEstimate pca = fit_pca(inst.stats, 1);
    NumericConfig config;
    config.seed = 77;
    const SubspaceEstimate numeric =
        fit_numeric(inst.stats, inst.a_spec, inst.b_spec, 1, config);
    CHECK(numeric.converged);
    CHECK(max_principal_angle(pca.w_hat, numeric.w_hat) < 1e-3);
}

TEST_CASE("fit_numeric agrees with fit_ssl on an orthogonal instance (d=2 grid)") {
    const Instance inst = make_instance(2, 1, 2000, false, 1.5, 1.5, 502);
    const SubspaceEstimate ssl = fit_ssl(inst.stats, 1);
    NumericConfig config;
    config.seed = 78;
    const SubspaceEstimate numeric =
        fit_numeric(inst.stats, inst.a_spec, inst.b_spec, 1, config);
    CHECK(max_principal_angle(ssl.w_hat, numeric.w_hat) < 1e-2);
}

TEST_CASE("fit_numeric: projected-gradient path recovers the PCA subspace at d=3") {
    const Instance inst = make_instance(3, 1, 2000, true, 0.2, 0.3, 503);
    const SubspaceEstimate pca = fit_pca(inst.stats, 1);
    NumericConfig config;
    config.seed = 79;
    const SubspaceEstimate numeric =
        fit_numeric(inst.stats, inst.a_spec, inst.b_spec, 1, config);
    CHECK(max_principal_angle(pca.w_hat, numeric.w_hat) < 1e-2);
    CHECK(numeric.objective ==
          doctest::Approx(neg_log_likelihood(numeric.w_hat, inst.params.a,
                                             inst.params.b, inst.stats))
              .epsilon(1e-9));
}

TEST_CASE("fit_numeric: custom model keeps the descent property") {
    Rng rng(504);
    const OrthonormalFrame w = sample_orthonormal(2, 1, rng);
    Matrix a_diag = Matrix::Zero(2, 2);
    a_diag(0, 0) = 2.0;
    a_diag(1, 1) = 0.1;
    const ModelParams params = make_params(2, 1, w, NoiseSpec::custom(SymMatrix(a_diag)),
                                           NoiseSpec::isotropic(0.25));
    const PairedDataset data =
        sample_dataset(params, LatentSpec::standard_gaussian(1), 400, rng);
    const SufficientStats stats = sufficient_stats(data);
    NumericConfig config;
    config.seed = 80;
    const SubspaceEstimate numeric =
        fit_numeric(stats, params.a, params.b, 1, config);
    for (int trial = 0; trial < 50; ++trial) {
        const OrthonormalFrame probe = sample_orthonormal(2, 1, rng);
        CHECK(numeric.objective <=
              neg_log_likelihood(probe, params.a, params.b, stats) + 1e-12);
    }
}

TEST_CASE("fit_ssl: trace criterion equals the dense angle-grid loss minimum") {
    const Instance inst = make_instance(2, 1, 400, false, 1.2, 1.2, 505);
    const SubspaceEstimate ssl = fit_ssl(inst.stats, 1);
    const double trace_value =
        (ssl.w_hat.mat().transpose() * inst.stats.s_delta.mat() * ssl.w_hat.mat())
            .trace();

    // independent oracle: scan the non-contrastive loss directly
    const Matrix delta = inst.data.x - inst.data.xplus;
    auto loss_at = [&](double theta) {
        Vector w(2);
        w << std::cos(theta), std::sin(theta);
        return (delta * w).squaredNorm();
    };
    double best = 1e300, best_theta = 0.0;
    const int steps = 31416;
    for (int i = 0; i < steps; ++i) {
        const double theta = 3.14159265358979 * i / steps;
        const double v = loss_at(theta);
        if (v < best) {
            best = v;
            best_theta = theta;
        }
    }
    double lo = best_theta - 1e-4, hi = best_theta + 1e-4;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    while (hi - lo > 1e-13) {
        const double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
        if (loss_at(x1) < loss_at(x2))
            hi = x2;
        else
            lo = x1;
    }
    best = std::min(best, loss_at(0.5 * (lo + hi)));
    CHECK(trace_value == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("fit_ssl: subspace invariant to uniform rescaling of the differences") {
    const Instance inst = make_instance(3, 2, 300, false, 1.4, 1.4, 506);
    const SubspaceEstimate base = fit_ssl(inst.stats, 2);
    const SufficientStats scaled{SymMatrix(4.0 * inst.stats.s_delta.mat()),
                                 inst.stats.s_x, inst.stats.n};
    const SubspaceEstimate rescaled = fit_ssl(scaled, 2);
    CHECK(subspace_alignment(base.w_hat, rescaled.w_hat).minCoeff() >
          1.0 - 1e-12);
}

TEST_CASE("fit_map: uniform prior reproduces fit_numeric, strong prior pulls to w0") {
    const Instance inst = make_instance(2, 1, 10, true, 0.4, 0.4, 507);
    NumericConfig config;
    config.seed = 81;
    const SubspaceEstimate mle =
        fit_numeric(inst.stats, inst.a_spec, inst.b_spec, 1, config);
    const SubspaceEstimate map_flat = fit_map(inst.stats, inst.a_spec, inst.b_spec,
                                              1, PriorSpec::uniform(), config);
    CHECK(max_principal_angle(mle.w_hat, map_flat.w_hat) < 1e-6);

    Rng rng(508);
    const OrthonormalFrame w0 = sample_orthonormal(2, 1, rng);
    const SubspaceEstimate map_sharp =
        fit_map(inst.stats, inst.a_spec, inst.b_spec, 1,
                PriorSpec::concentration(w0, 1e4), config);
    CHECK(max_principal_angle(w0, map_sharp.w_hat) <
          max_principal_angle(w0, mle.w_hat) + 1e-9);
    CHECK(max_principal_angle(w0, map_sharp.w_hat) < 0.05);
}

TEST_CASE("sample_posterior_mh: deterministic per seed, uniform-vs-kappa0 identical") {
    const Instance inst = make_instance(2, 1, 200, false, 1.5, 1.5, 509);
    MhConfig config;
    config.burn_in = 50;
    Rng rng1(1), rng2(1), rng3(1);
    const PosteriorChain a = sample_posterior_mh(inst.stats, inst.a_spec,
                                                 inst.b_spec, PriorSpec::uniform(),
                                                 1, 100, config, rng1);
    const PosteriorChain b = sample_posterior_mh(inst.stats, inst.a_spec,
                                                 inst.b_spec, PriorSpec::uniform(),
                                                 1, 100, config, rng2);
    Rng rng_w(91);
    const PosteriorChain c = sample_posterior_mh(
        inst.stats, inst.a_spec, inst.b_spec,
        PriorSpec::concentration(sample_orthonormal(2, 1, rng_w), 0.0), 1, 100, config,
        rng3);
    REQUIRE(a.samples.size() == 100);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK((a.samples[i] - b.samples[i]).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.samples[i] - c.samples[i]).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(a.acceptance_rate == b.acceptance_rate);
}

TEST_CASE("sample_posterior_mh: posterior concentrates near the SSL MLE") {
    const Instance inst = make_instance(2, 1, 2000, false, 1.5, 1.5, 510);
    const SubspaceEstimate ssl = fit_ssl(inst.stats, 1);
    MhConfig config;  // defaults: step 0.05, burn-in 1000
    Rng rng(511);
    const PosteriorChain chain =
        sample_posterior_mh(inst.stats, inst.a_spec, inst.b_spec,
                            PriorSpec::uniform(), 1, 5000, config, rng);
    double mean_dot = 0.0;
    for (const Matrix& w : chain.samples)
        mean_dot += std::abs(w.col(0).dot(ssl.w_hat.mat().col(0)));
    mean_dot /= static_cast<double>(chain.samples.size());
    CHECK(mean_dot > 0.95);
    CHECK_FALSE(chain.acceptance_warning);
}

TEST_CASE("sample_posterior_mh: prior-dominated regime concentrates at w0") {
    const Instance inst = make_instance(2, 1, 10, true, 0.5, 0.5, 512);
    Rng rng_w(513);
    const OrthonormalFrame w0 = sample_orthonormal(2, 1, rng_w);
    MhConfig config;
    config.step = 0.02;
    config.burn_in = 3000;
    Rng rng(514);
    const PosteriorChain chain =
        sample_posterior_mh(inst.stats, inst.a_spec, inst.b_spec,
                            PriorSpec::concentration(w0, 1e4), 1, 3000, config, rng);
    double mean_dot = 0.0;
    for (const Matrix& w : chain.samples)
        mean_dot += std::abs(w.col(0).dot(w0.mat().col(0)));
    mean_dot /= static_cast<double>(chain.samples.size());
    CHECK(mean_dot > 0.99);
}

TEST_CASE("sample_posterior_mh: no data explores the frame manifold uniformly") {
    const SufficientStats empty = SufficientStats::zero(2);
    const SymMatrix eye = SymMatrix::identity(2);
    MhConfig config;
    config.burn_in = 0;
    Rng rng(515);
    const PosteriorChain chain = sample_posterior_mh(empty, eye, eye,
                                                     PriorSpec::uniform(), 1, 100000,
                                                     config, rng);
    Matrix second_moment = Matrix::Zero(2, 2);
    for (const Matrix& w : chain.samples)
        second_moment += w.col(0) * w.col(0).transpose();
    second_moment /= static_cast<double>(chain.samples.size());
    CHECK((second_moment - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.1);
    CHECK(chain.acceptance_warning);  // every proposal accepted
}
