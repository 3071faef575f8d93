#pragma once

#include <vector>

#include "genlab/likelihood.hpp"

namespace genlab {

enum class FitMethod { PCA, SSL, Numeric, MAP };

struct SubspaceEstimate {
    OrthonormalFrame w_hat;
    // Selected eigenvalues, sorted descending: top of S_x for PCA, top of
    // -S_delta for SSL (i.e. the negated smallest eigenvalues of the stored
    // positive scatter). Empty for Numeric/MAP.
    Vector criterion_values;
    FitMethod method;
    bool degenerate_spectrum = false;
    bool converged = true;
    double objective = 0.0;  // final objective value for Numeric/MAP
};

// Closed-form MLE under isotropic noise: top-k eigenvectors of S_x.
SubspaceEstimate fit_pca(const SufficientStats& stats, int k);

// Closed-form MLE under orthogonal-complement noise, equivalently the
// minimizer of the non-contrastive loss sum_i ||W^T x_i - W^T xplus_i||^2:
// the k eigenvectors of the stored (positive) S_delta with the smallest
// eigenvalues.
SubspaceEstimate fit_ssl(const SufficientStats& stats, int k);

struct NumericConfig {
    double angle_resolution = 1e-4;  // d=2, k=1 exhaustive-scan resolution
    int max_iters = 10000;
    double tol = 1e-10;   // stop when the objective improves by less
    int n_starts = 8;     // multi-start count for the projected-gradient path
    double fd_step = 1e-6;
    double init_step = 0.1;
    std::uint64_t seed = 0;
};

// Numeric minimizer of the exact likelihood objective over orthonormal
// frames; the independent cross-check for the closed forms above. The noise
// specs are realized against each candidate frame, which is what makes the
// orthogonal-complement regime's covariances track the frame being
// optimized; isotropic and custom specs realize to constants. d=2, k=1 uses
// an exhaustive angle scan plus golden-section refinement; otherwise
// multi-start finite-difference projected gradient with Gram-Schmidt
// retraction. The objective is evaluated through dense factorizations only.
// Non-convergence returns best-so-far with converged=false.
SubspaceEstimate fit_numeric(const SufficientStats& stats, const NoiseSpec& a_spec,
                             const NoiseSpec& b_spec, int k,
                             const NumericConfig& config = {});

// Fixed covariance matrices, treated as custom specs.
SubspaceEstimate fit_numeric(const SufficientStats& stats, const SymMatrix& a,
                             const SymMatrix& b, int k,
                             const NumericConfig& config = {});

// Same machinery on the unnormalized posterior; with the uniform prior this
// coincides with fit_numeric.
SubspaceEstimate fit_map(const SufficientStats& stats, const NoiseSpec& a_spec,
                         const NoiseSpec& b_spec, int k, const PriorSpec& prior,
                         const NumericConfig& config = {});
SubspaceEstimate fit_map(const SufficientStats& stats, const SymMatrix& a,
                         const SymMatrix& b, int k, const PriorSpec& prior,
                         const NumericConfig& config = {});

struct MhConfig {
    double step = 0.05;  // proposal scale tau
    int burn_in = 1000;
    int thin = 1;
};

struct PosteriorChain {
    std::vector<Matrix> samples;  // n_samples frames, d x k each
    double acceptance_rate = 0.0;
    bool acceptance_warning = false;  // post-burn-in rate outside [0.05, 0.95]
};

// Random-walk Metropolis on the frame manifold: propose
// gram_schmidt(W + step * G) with G iid standard normal, accept with
// min(1, exp(logpost' - logpost)). Noise specs realize against each visited
// frame, as in fit_numeric. stats.n == 0 targets the prior alone.
PosteriorChain sample_posterior_mh(const SufficientStats& stats,
                                   const NoiseSpec& a_spec, const NoiseSpec& b_spec,
                                   const PriorSpec& prior, int k, int n_samples,
                                   const MhConfig& config, Rng& rng);
PosteriorChain sample_posterior_mh(const SufficientStats& stats, const SymMatrix& a,
                                   const SymMatrix& b, const PriorSpec& prior,
                                   int k, int n_samples, const MhConfig& config,
                                   Rng& rng);

}  // namespace genlab
