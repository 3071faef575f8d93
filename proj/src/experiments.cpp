#include "genlab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "genlab/format.hpp"

namespace genlab {

namespace {

// Static task pool over [0, count); each task writes only its own slot, so
// scheduling order never shows in the results.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = std::min<int>(threads, static_cast<int>(count));
    pool.reserve(n_workers);
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

void validate_sweep_config(const SweepConfig& config) {
    if (config.grid_a.empty() || config.grid_b.empty())
        throw ConfigError("sweep grids must be non-empty");
    if (config.reps < 1) throw ConfigError("sweep reps must be >= 1");
    if (config.k < 1 || config.k > config.d)
        throw ConfigError("sweep requires 1 <= k <= d");
    if (config.n < 1) throw ConfigError("sweep requires n >= 1");
    for (const double v : config.grid_a) {
        if (config.regime == Regime::Isotropic && !(v > 0.0))
            throw ConfigError("isotropic grid values must be > 0 (got " + fmt17(v) + ")");
        if (config.regime == Regime::Orthogonal && !(v > 1.0))
            throw ConfigError("orthogonal grid values must be > 1 (got " + fmt17(v) + ")");
    }
    for (const double v : config.grid_b) {
        if (config.regime == Regime::Isotropic && !(v > 0.0))
            throw ConfigError("isotropic grid values must be > 0 (got " + fmt17(v) + ")");
        if (config.regime == Regime::Orthogonal && !(v > 1.0))
            throw ConfigError("orthogonal grid values must be > 1 (got " + fmt17(v) + ")");
    }
}

NoiseSpec regime_noise(Regime regime, double value) {
    return regime == Regime::Isotropic ? NoiseSpec::isotropic(value)
                                       : NoiseSpec::orthogonal_complement(value);
}

double replication_diff(Regime regime, double a_value, double b_value, int d, int k,
                        int n, std::uint64_t rep_seed) {
    Rng rng(rep_seed);
    const OrthonormalFrame w = sample_orthonormal(d, k, rng);
    const ModelParams params =
        make_params(d, k, w, regime_noise(regime, a_value), regime_noise(regime, b_value));
    const LatentSpec latent = LatentSpec::standard_gaussian(k);
    const PairedDataset data = sample_dataset(params, latent, n, rng, rep_seed);
    const SufficientStats stats = sufficient_stats(data);
    const double loss_pca = recovery_loss(data.z, data.x, fit_pca(stats, k)).loss;
    const double loss_ssl = recovery_loss(data.z, data.x, fit_ssl(stats, k)).loss;
    return loss_pca - loss_ssl;
}

}  // namespace

std::string SweepResult::to_csv() const {
    std::string out = "row_param,col_param,mean_diff,se_diff,reps,cell_seed\n";
    for (const SweepCell& cell : cells) {
        out += fmt17(cell.row_param) + "," + fmt17(cell.col_param) + "," +
               fmt17(cell.mean_diff) + "," + fmt17(cell.se_diff) + "," +
               std::to_string(cell.reps) + "," + std::to_string(cell.cell_seed) + "\n";
    }
    return out;
}

SweepResult run_sweep(const SweepConfig& config, int threads) {
    validate_sweep_config(config);
    const std::size_t na = config.grid_a.size();
    const std::size_t nb = config.grid_b.size();
    const std::size_t n_cells = na * nb;
    const std::size_t reps = static_cast<std::size_t>(config.reps);

    std::vector<double> diffs(n_cells * reps);
    parallel_for(n_cells * reps, threads, [&](std::size_t task) {
        const std::size_t cell = task / reps;
        const std::size_t rep = task % reps;
        const std::size_t i = cell / nb;
        const std::size_t j = cell % nb;
        const std::uint64_t cell_seed =
            hash_combine(config.base_seed, hash_combine(i, j));
        const std::uint64_t rep_seed = hash_combine(cell_seed, rep);
        diffs[task] = replication_diff(config.regime, config.grid_a[i],
                                       config.grid_b[j], config.d, config.k,
                                       config.n, rep_seed);
    });

    SweepResult result;
    result.config = config;
    result.cells.reserve(n_cells);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        const std::size_t i = cell / nb;
        const std::size_t j = cell % nb;
        double mean = 0.0;
        for (std::size_t r = 0; r < reps; ++r) mean += diffs[cell * reps + r];
        mean /= static_cast<double>(reps);
        double var = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            const double dev = diffs[cell * reps + r] - mean;
            var += dev * dev;
        }
        const double se =
            reps > 1 ? std::sqrt(var / static_cast<double>(reps - 1)) /
                           std::sqrt(static_cast<double>(reps))
                     : 0.0;
        result.cells.push_back(SweepCell{config.grid_a[i], config.grid_b[j], mean, se,
                                         config.reps,
                                         hash_combine(config.base_seed,
                                                      hash_combine(i, j))});
    }
    return result;
}

KdeCurve kde(const Vector& values) {
    if (values.size() < 2) throw DegenerateData("kde requires at least 2 values");
    const double mean = values.mean();
    const double sd = std::sqrt((values.array() - mean).square().sum() /
                                static_cast<double>(values.size() - 1));
    if (!(sd > 0.0)) throw DegenerateData("kde requires nonzero variance");
    const double bw =
        1.06 * sd * std::pow(static_cast<double>(values.size()), -0.2);
    const double lo = values.minCoeff() - 3.0 * bw;
    const double hi = values.maxCoeff() + 3.0 * bw;
    Vector grid = Vector::LinSpaced(256, lo, hi);
    return kde(values, grid);
}

KdeCurve kde(const Vector& values, const Vector& eval_points) {
    if (values.size() < 2) throw DegenerateData("kde requires at least 2 values");
    const double mean = values.mean();
    const double sd = std::sqrt((values.array() - mean).square().sum() /
                                static_cast<double>(values.size() - 1));
    if (!(sd > 0.0)) throw DegenerateData("kde requires nonzero variance");
    KdeCurve curve;
    curve.bandwidth = 1.06 * sd * std::pow(static_cast<double>(values.size()), -0.2);
    curve.eval_points = eval_points;
    curve.densities = Vector::Zero(eval_points.size());
    const double norm = 1.0 / (static_cast<double>(values.size()) * curve.bandwidth *
                               std::sqrt(2.0 * 3.1415926535897932384626433832795));
    for (int i = 0; i < eval_points.size(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < values.size(); ++j) {
            const double u = (eval_points[i] - values[j]) / curve.bandwidth;
            acc += std::exp(-0.5 * u * u);
        }
        curve.densities[i] = acc * norm;
    }
    return curve;
}

int count_local_maxima(const KdeCurve& curve) {
    // Collapse plateaus first so equal runs count once.
    std::vector<double> y;
    y.reserve(curve.densities.size());
    for (int i = 0; i < curve.densities.size(); ++i)
        if (y.empty() || curve.densities[i] != y.back()) y.push_back(curve.densities[i]);
    int count = 0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] > y[i + 1]) ++count;
    return count;
}

GmmDemoResult run_gmm_demo(const GmmDemoConfig& config) {
    if (config.k != 1) throw ConfigError("gmm demo embeddings are 1-d; k must be 1");
    if (config.d < 2) throw ConfigError("gmm demo requires d >= 2");
    if (config.n < 2) throw ConfigError("gmm demo requires n >= 2");
    if (config.weights.size() != config.means.size() || config.weights.empty())
        throw ConfigError("gmm demo: weights and means must have equal, nonzero length");
    if (!(config.component_var > 0.0))
        throw ConfigError("gmm demo: component_var must be > 0");
    if (config.kde_points < 4) throw ConfigError("gmm demo: kde_points must be >= 4");

    std::vector<MixtureComponent> comps;
    comps.reserve(config.weights.size());
    for (std::size_t c = 0; c < config.weights.size(); ++c) {
        Vector mu(1);
        mu[0] = config.means[c];
        comps.push_back(MixtureComponent{
            config.weights[c], mu,
            SymMatrix(config.component_var * Matrix::Identity(1, 1))});
    }
    const LatentSpec latent = LatentSpec::mixture(std::move(comps));

    Rng rng(hash_combine(config.seed, 0x676d6dULL));  // demo stream tag
    const OrthonormalFrame w_true = sample_orthonormal(config.d, config.k, rng);
    const ModelParams params =
        make_params(config.d, config.k, w_true,
                    NoiseSpec::orthogonal_complement(config.rho),
                    NoiseSpec::orthogonal_complement(config.gamma));
    const PairedDataset data =
        sample_dataset(params, latent, config.n, rng, config.seed);
    const SufficientStats stats = sufficient_stats(data);

    const SubspaceEstimate pca = fit_pca(stats, 1);
    const SubspaceEstimate ssl = fit_ssl(stats, 1);

    const Vector z_true = data.z.col(0);
    auto aligned_embedding = [&](const OrthonormalFrame& w_hat) {
        Vector e = data.x * w_hat.mat().col(0);
        const ProcrustesResult align = procrustes_align(data.z, e);
        return Vector(e * align.q(0, 0));
    };
    const Vector z_pca = aligned_embedding(pca.w_hat);
    const Vector z_ssl = aligned_embedding(ssl.w_hat);

    auto demo_kde = [&](const Vector& v) {
        KdeCurve base = kde(v);
        if (config.kde_points == 256) return base;
        Vector grid = Vector::LinSpaced(config.kde_points, base.eval_points[0],
                                        base.eval_points[base.eval_points.size() - 1]);
        return kde(v, grid);
    };

    GmmDemoResult result{w_true,
                         pca.w_hat,
                         ssl.w_hat,
                         z_true,
                         z_pca,
                         z_ssl,
                         demo_kde(z_true),
                         demo_kde(z_pca),
                         demo_kde(z_ssl),
                         data.x,
                         data.xplus,
                         subspace_alignment(w_true, pca.w_hat)[0],
                         subspace_alignment(w_true, ssl.w_hat)[0],
                         data.params_hash,
                         data.latent_hash};
    return result;
}

}  // namespace genlab
