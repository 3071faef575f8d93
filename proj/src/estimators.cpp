#include "genlab/estimators.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Cholesky>

namespace genlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.1415926535897932384626433832795;

// Relative tie tolerance for the eigenvalue gap at the selection boundary.
constexpr double kGapTol = 1e-8;

bool gap_degenerate(double inside, double outside, double scale) {
    return std::abs(inside - outside) <= kGapTol * std::max(1.0, std::abs(scale));
}

using Objective = std::function<double(const Matrix&)>;

struct MinimizeResult {
    Matrix w;
    double value = kInf;
    bool converged = false;
};

Matrix plane_frame(double theta) {
    Matrix w(2, 1);
    w(0, 0) = std::cos(theta);
    w(1, 0) = std::sin(theta);
    return w;
}

// Exhaustive scan over W(theta), theta in [0, span), then golden-section
// refinement of the bracketing interval.
MinimizeResult minimize_plane_angle(const Objective& f, double span, double resolution) {
    const int steps = static_cast<int>(std::ceil(span / resolution));
    double best_theta = 0.0;
    double best_value = kInf;
    for (int i = 0; i < steps; ++i) {
        const double theta = span * i / steps;
        const double value = f(plane_frame(theta));
        if (value < best_value) {
            best_value = value;
            best_theta = theta;
        }
    }
    const double h = span / steps;
    double lo = best_theta - h;
    double hi = best_theta + h;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = f(plane_frame(x1));
    double f2 = f(plane_frame(x2));
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(plane_frame(x1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(plane_frame(x2));
        }
    }
    const double theta = 0.5 * (lo + hi);
    const double value = f(plane_frame(theta));
    MinimizeResult out;
    if (value < best_value) {
        out.w = plane_frame(theta);
        out.value = value;
    } else {
        out.w = plane_frame(best_theta);
        out.value = best_value;
    }
    out.converged = true;
    return out;
}

Matrix fd_gradient(const Objective& f, const Matrix& w, double fd_step) {
    Matrix g(w.rows(), w.cols());
    Matrix probe = w;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j) {
            const double h = fd_step * (1.0 + std::abs(w(i, j)));
            probe(i, j) = w(i, j) + h;
            const double fp = f(probe);
            probe(i, j) = w(i, j) - h;
            const double fm = f(probe);
            probe(i, j) = w(i, j);
            g(i, j) = (fp - fm) / (2.0 * h);
        }
    return g;
}

MinimizeResult projected_gradient_start(const Objective& f, Matrix w,
                                        const NumericConfig& cfg) {
    double fw = f(w);
    double tau = cfg.init_step;
    MinimizeResult out;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const Matrix g = fd_gradient(f, w, cfg.fd_step);
        bool stepped = false;
        Matrix w_new;
        double f_new = fw;
        while (tau >= 1e-14) {
            try {
                Matrix candidate = gram_schmidt(w - tau * g);
                const double fc = f(candidate);
                if (fc < fw) {
                    w_new = std::move(candidate);
                    f_new = fc;
                    stepped = true;
                    break;
                }
            } catch (const InvalidMatrix&) {
                // retraction degenerated; shrink the step
            }
            tau *= 0.5;
        }
        if (!stepped) {
            out.converged = true;  // no descent direction at tested scales
            break;
        }
        const double drop = fw - f_new;
        w = std::move(w_new);
        fw = f_new;
        if (drop < cfg.tol) {
            out.converged = true;
            break;
        }
        tau = std::min(tau * 2.0, cfg.init_step);
    }
    out.w = std::move(w);
    out.value = fw;
    return out;
}

MinimizeResult minimize_over_frames(const Objective& f, int d, int k, double span,
                                    const NumericConfig& cfg) {
    if (d == 2 && k == 1) return minimize_plane_angle(f, span, cfg.angle_resolution);
    MinimizeResult best;
    for (int s = 0; s < cfg.n_starts; ++s) {
        Rng rng(hash_combine(cfg.seed, static_cast<std::uint64_t>(s)));
        const OrthonormalFrame start = sample_orthonormal(d, k, rng);
        MinimizeResult r = projected_gradient_start(f, start.mat(), cfg);
        if (r.value < best.value) best = std::move(r);
    }
    return best;
}

// log det M and Tr(M^-1 S) through a dense Cholesky factorization; +inf
// objective when M is not numerically PD (the line search rejects it).
double dense_block_objective(const Matrix& m, const Matrix& s) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return kInf;
    const auto& l = llt.matrixLLT();
    double log_det = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        const double pivot = l(i, i);
        if (!(pivot > 1e-12)) return kInf;
        log_det += 2.0 * std::log(pivot);
    }
    const double trace = llt.solve(s).trace();
    return std::isfinite(trace) ? log_det + trace : kInf;
}

// Noise covariance realized against an arbitrary (possibly off-manifold)
// candidate matrix; this is what ties the orthogonal-complement regime to
// the frame being optimized.
Matrix realize_raw(const NoiseSpec& spec, const Matrix& w) {
    const int d = static_cast<int>(w.rows());
    switch (spec.kind()) {
        case NoiseSpec::Kind::Isotropic:
            return spec.scale() * Matrix::Identity(d, d);
        case NoiseSpec::Kind::OrthogonalComplement:
            return spec.scale() * Matrix::Identity(d, d) - w * w.transpose();
        case NoiseSpec::Kind::Custom:
            if (spec.cov().dim() != d)
                throw DimensionError("noise covariance must be d x d");
            return spec.cov().mat();
    }
    throw std::logic_error("unreachable");
}

bool depends_on_candidate(const NoiseSpec& spec) {
    return spec.kind() == NoiseSpec::Kind::OrthogonalComplement;
}

// Exact likelihood objective as a smooth function of a raw d x k matrix,
// evaluated through dense factorizations only (no structured shortcuts), so
// the numeric route stays independent of the closed forms it cross-checks.
Objective likelihood_objective(const SufficientStats& stats, const NoiseSpec& a_spec,
                               const NoiseSpec& b_spec, int d) {
    const double n = static_cast<double>(stats.n);
    const Matrix s_delta_scaled = stats.s_delta.mat() / n;
    const Matrix s_x_scaled = stats.s_x.mat() / n;

    std::optional<double> b_const;
    if (!depends_on_candidate(b_spec)) {
        const Matrix b_fixed = realize_raw(b_spec, Matrix::Zero(d, 1));
        const double value = dense_block_objective(b_fixed, s_delta_scaled);
        if (!std::isfinite(value)) throw SingularModel("B is not PD");
        b_const = value;
    }
    std::optional<Matrix> a_fixed;
    if (!depends_on_candidate(a_spec))
        a_fixed = realize_raw(a_spec, Matrix::Zero(d, 1));

    return [=](const Matrix& w) {
        const double b_part =
            b_const ? *b_const
                    : dense_block_objective(realize_raw(b_spec, w), s_delta_scaled);
        if (!std::isfinite(b_part)) return kInf;
        const Matrix m =
            w * w.transpose() + (a_fixed ? *a_fixed : realize_raw(a_spec, w));
        const double m_part = dense_block_objective(m, s_x_scaled);
        return std::isfinite(m_part) ? b_part + m_part : kInf;
    };
}

}  // namespace

SubspaceEstimate fit_pca(const SufficientStats& stats, int k) {
    const int d = stats.dim();
    if (k < 1 || k > d) throw DimensionError("fit_pca requires 1 <= k <= d");
    const EigenPairs eig = sym_eig(stats.s_x);
    SubspaceEstimate out{OrthonormalFrame(eig.vectors.leftCols(k)),
                         eig.values.head(k), FitMethod::PCA};
    if (k < d)
        out.degenerate_spectrum = gap_degenerate(eig.values[k - 1], eig.values[k],
                                                 eig.values[0]);
    return out;
}

SubspaceEstimate fit_ssl(const SufficientStats& stats, int k) {
    const int d = stats.dim();
    if (k < 1 || k > d) throw DimensionError("fit_ssl requires 1 <= k <= d");
    const EigenPairs eig = sym_eig(stats.s_delta);
    Matrix w(d, k);
    Vector criterion(k);
    for (int j = 0; j < k; ++j) {
        w.col(j) = eig.vectors.col(d - 1 - j);
        criterion[j] = -eig.values[d - 1 - j];
    }
    SubspaceEstimate out{OrthonormalFrame(w), criterion, FitMethod::SSL};
    if (k < d)
        out.degenerate_spectrum = gap_degenerate(eig.values[d - k], eig.values[d - k - 1],
                                                 eig.values[0]);
    return out;
}

SubspaceEstimate fit_numeric(const SufficientStats& stats, const NoiseSpec& a_spec,
                             const NoiseSpec& b_spec, int k,
                             const NumericConfig& config) {
    const int d = stats.dim();
    if (k < 1 || k > d) throw DimensionError("fit_numeric requires 1 <= k <= d");
    if (stats.n < 1) throw std::invalid_argument("fit_numeric requires stats.n >= 1");

    const Objective f = likelihood_objective(stats, a_spec, b_spec, d);
    MinimizeResult r = minimize_over_frames(f, d, k, kPi, config);
    SubspaceEstimate out{OrthonormalFrame(gram_schmidt(r.w)), Vector(),
                         FitMethod::Numeric};
    out.converged = r.converged;
    out.objective = r.value;
    return out;
}

SubspaceEstimate fit_numeric(const SufficientStats& stats, const SymMatrix& a,
                             const SymMatrix& b, int k, const NumericConfig& config) {
    return fit_numeric(stats, NoiseSpec::custom(a), NoiseSpec::custom(b), k, config);
}

SubspaceEstimate fit_map(const SufficientStats& stats, const NoiseSpec& a_spec,
                         const NoiseSpec& b_spec, int k, const PriorSpec& prior,
                         const NumericConfig& config) {
    const int d = stats.dim();
    if (k < 1 || k > d) throw DimensionError("fit_map requires 1 <= k <= d");

    Objective f;
    if (stats.n > 0) {
        const double n = static_cast<double>(stats.n);
        const Objective likelihood = likelihood_objective(stats, a_spec, b_spec, d);
        f = [likelihood, &prior, n](const Matrix& w) {
            return likelihood(w) - (2.0 / n) * prior.log_density(w);
        };
    } else {
        f = [&prior](const Matrix& w) { return -prior.log_density(w); };
    }

    // The concentration prior is not sign-symmetric, so the planar scan must
    // cover the full circle.
    MinimizeResult r = minimize_over_frames(f, d, k, 2.0 * kPi, config);
    SubspaceEstimate out{OrthonormalFrame(gram_schmidt(r.w)), Vector(), FitMethod::MAP};
    out.converged = r.converged;
    out.objective = r.value;
    return out;
}

SubspaceEstimate fit_map(const SufficientStats& stats, const SymMatrix& a,
                         const SymMatrix& b, int k, const PriorSpec& prior,
                         const NumericConfig& config) {
    return fit_map(stats, NoiseSpec::custom(a), NoiseSpec::custom(b), k, prior, config);
}

PosteriorChain sample_posterior_mh(const SufficientStats& stats,
                                   const NoiseSpec& a_spec, const NoiseSpec& b_spec,
                                   const PriorSpec& prior, int k, int n_samples,
                                   const MhConfig& config, Rng& rng) {
    const int d = stats.dim();
    if (k < 1 || k > d) throw DimensionError("sample_posterior_mh requires 1 <= k <= d");
    if (n_samples < 1)
        throw std::invalid_argument("sample_posterior_mh requires n_samples >= 1");
    if (config.thin < 1 || config.burn_in < 0)
        throw ConfigError("sample_posterior_mh: thin >= 1 and burn_in >= 0 required");

    // Unnormalized log posterior with the model covariances realized against
    // the frame under evaluation.
    auto logpost = [&](const OrthonormalFrame& w) {
        if (stats.n == 0) return prior.log_density(w.mat());
        const SymMatrix a(realize_raw(a_spec, w.mat()));
        const SymMatrix b(realize_raw(b_spec, w.mat()));
        return log_posterior(w, a, b, stats, prior);
    };

    OrthonormalFrame current = sample_orthonormal(d, k, rng);
    double current_lp = logpost(current);

    PosteriorChain chain;
    chain.samples.reserve(n_samples);
    const long total = static_cast<long>(config.burn_in) +
                       static_cast<long>(n_samples) * config.thin;
    long accepted_post = 0;
    Matrix g(d, k);
    for (long t = 0; t < total; ++t) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < k; ++j) g(i, j) = rng.normal();
        bool accepted = false;
        try {
            OrthonormalFrame proposal(gram_schmidt(current.mat() + config.step * g));
            const double proposal_lp = logpost(proposal);
            const double u = rng.uniform();
            if (std::log(u) < proposal_lp - current_lp) {
                current = std::move(proposal);
                current_lp = proposal_lp;
                accepted = true;
            }
        } catch (const InvalidMatrix&) {
            // degenerate retraction: reject, stay at the current state
        }
        if (t >= config.burn_in) {
            if (accepted) ++accepted_post;
            if ((t - config.burn_in) % config.thin == 0)
                chain.samples.push_back(current.mat());
        }
    }
    const long post_steps = total - config.burn_in;
    chain.acceptance_rate =
        post_steps > 0 ? static_cast<double>(accepted_post) / post_steps : 0.0;
    chain.acceptance_warning =
        chain.acceptance_rate < 0.05 || chain.acceptance_rate > 0.95;
    return chain;
}

PosteriorChain sample_posterior_mh(const SufficientStats& stats, const SymMatrix& a,
                                   const SymMatrix& b, const PriorSpec& prior,
                                   int k, int n_samples, const MhConfig& config,
                                   Rng& rng) {
    return sample_posterior_mh(stats, NoiseSpec::custom(a), NoiseSpec::custom(b),
                               prior, k, n_samples, config, rng);
}

}  // namespace genlab
