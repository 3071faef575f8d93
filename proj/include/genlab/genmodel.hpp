#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "genlab/linalg.hpp"

namespace genlab {

// Noise covariance in one of the two named regimes, or a user matrix.
// Realized against a concrete frame W when ModelParams is built.
class NoiseSpec {
public:
    enum class Kind { Isotropic, OrthogonalComplement, Custom };

    static NoiseSpec isotropic(double scale);                // scale > 0
    static NoiseSpec orthogonal_complement(double level);    // level > 1
    static NoiseSpec custom(const SymMatrix& cov);           // PSD

    Kind kind() const { return kind_; }
    double scale() const { return scale_; }  // Isotropic scale or Ortho level
    const SymMatrix& cov() const { return *cov_; }

    // Isotropic(s)            -> s I_d
    // OrthogonalComplement(l) -> l I_d - W W^T
    // Custom(C)               -> C (dimension checked against W)
    SymMatrix realize(const OrthonormalFrame& w) const;

    std::uint64_t hash() const;

private:
    NoiseSpec(Kind kind, double scale, std::optional<SymMatrix> cov)
        : kind_(kind), scale_(scale), cov_(std::move(cov)) {}

    Kind kind_;
    double scale_;
    std::optional<SymMatrix> cov_;
};

struct ModelParams {
    OrthonormalFrame w;
    SymMatrix a;  // data-noise covariance, PSD
    SymMatrix b;  // augmentation-noise covariance, PSD
    int d;
    int k;

    std::uint64_t hash() const;
};

ModelParams make_params(int d, int k, const OrthonormalFrame& w,
                        const NoiseSpec& a_spec, const NoiseSpec& b_spec);

struct MixtureComponent {
    double weight;  // in (0, 1]
    Vector mean;    // length k
    SymMatrix cov;  // k x k PSD
};

class LatentSpec {
public:
    static LatentSpec standard_gaussian(int k);
    static LatentSpec mixture(std::vector<MixtureComponent> components);

    int k() const { return k_; }
    bool is_mixture() const { return !components_.empty(); }
    const std::vector<MixtureComponent>& components() const { return components_; }

    std::uint64_t hash() const;

private:
    LatentSpec(int k, std::vector<MixtureComponent> components)
        : k_(k), components_(std::move(components)) {}

    int k_;
    std::vector<MixtureComponent> components_;  // empty for StandardGaussian
};

struct PairedDataset {
    Matrix z;      // n x k latents
    Matrix x;      // n x d anchors
    Matrix xplus;  // n x d positives

    std::uint64_t params_hash = 0;
    std::uint64_t latent_hash = 0;
    std::uint64_t seed = 0;

    int n() const { return static_cast<int>(z.rows()); }
};

// Draw order: the full latent block first, then the data-noise block, then
// the augmentation-noise block, each filled row-major from the stream.
Matrix sample_latents(const LatentSpec& spec, int n, Rng& rng);

PairedDataset sample_dataset(const ModelParams& params, const LatentSpec& latent,
                             int n, Rng& rng, std::uint64_t seed_tag = 0);

}  // namespace genlab
