#pragma once

#include <string>
#include <vector>

#include "genlab/metrics.hpp"

namespace genlab {

enum class Regime { Isotropic, Orthogonal };

struct SweepConfig {
    Regime regime = Regime::Orthogonal;
    std::vector<double> grid_a;  // rho or sigma^2 values (rows)
    std::vector<double> grid_b;  // gamma or eps^2 values (columns)
    int d = 2;
    int k = 1;
    int n = 1000;
    int reps = 100;
    std::uint64_t base_seed = 42;
};

struct SweepCell {
    double row_param = 0.0;
    double col_param = 0.0;
    double mean_diff = 0.0;  // mean of L_PCA - L_SSL over reps
    double se_diff = 0.0;    // sample std / sqrt(reps)
    int reps = 0;
    std::uint64_t cell_seed = 0;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepCell> cells;  // row-major over (grid_a, grid_b)

    std::string to_csv() const;
};

// One replication: fresh Haar W, fresh dataset of size n, closed-form PCA
// and SSL fits, Procrustes-aligned recovery losses against the drawn
// latents; the cell records mean and standard error of the difference.
// Streams derive as cell_seed = h(base_seed, h(i, j)), rep_seed =
// h(cell_seed, rep), so results are identical for any thread count.
SweepResult run_sweep(const SweepConfig& config, int threads = 1);

struct KdeCurve {
    Vector eval_points;
    Vector densities;
    double bandwidth = 0.0;
};

// Gaussian-kernel density with Silverman bandwidth 1.06 std n^(-1/5);
// default evaluation grid is 256 uniform points over the data range padded
// by 3 bandwidths. Requires at least 2 values with nonzero variance.
KdeCurve kde(const Vector& values);
KdeCurve kde(const Vector& values, const Vector& eval_points);

// Strict interior maxima; runs of equal values count once.
int count_local_maxima(const KdeCurve& curve);

struct GmmDemoConfig {
    int d = 2;
    int k = 1;  // embeddings and KDEs are 1-d; k must be 1
    int n = 1000;
    double rho = 1.01;
    double gamma = 1.01;
    std::vector<double> weights{0.4, 0.4, 0.2};
    // Artifact defaults: component means and variance are chosen so the
    // three modes stay separated while the total latent variance stays
    // below the orthogonal-complement noise level, which is what pushes the
    // top principal component away from the signal direction.
    std::vector<double> means{-1.0, 0.0, 1.0};
    double component_var = 0.0625;
    std::uint64_t seed = 42;
    int kde_points = 256;
};

struct GmmDemoResult {
    OrthonormalFrame w_true;
    OrthonormalFrame w_pca;
    OrthonormalFrame w_ssl;
    Vector z_true;  // latent coordinates
    Vector z_pca;   // PCA embedding, sign-aligned to z_true
    Vector z_ssl;   // SSL embedding, sign-aligned to z_true
    KdeCurve kde_true;
    KdeCurve kde_pca;
    KdeCurve kde_ssl;
    Matrix x;
    Matrix xplus;
    double align_pca = 0.0;  // |cos| of angle between w_true and w_pca
    double align_ssl = 0.0;
    std::uint64_t params_hash = 0;
    std::uint64_t latent_hash = 0;
};

GmmDemoResult run_gmm_demo(const GmmDemoConfig& config);

}  // namespace genlab
