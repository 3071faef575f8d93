#include "genlab/genmodel.hpp"

#include <cmath>
#include <string>

#include "genlab/format.hpp"

namespace genlab {

namespace {

void append_matrix(std::string& out, const Matrix& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            out += fmt17(m(i, j));
            out += ',';
        }
}

void check_psd(const SymMatrix& m) {
    const EigenPairs eig = sym_eig(m);
    const double min_eig = eig.values[eig.values.size() - 1];
    if (min_eig < -1e-10) throw NotPSD(min_eig);
}

}  // namespace

NoiseSpec NoiseSpec::isotropic(double scale) {
    if (!(scale > 0.0)) throw InvalidNoise("isotropic noise requires scale > 0");
    return NoiseSpec(Kind::Isotropic, scale, std::nullopt);
}

NoiseSpec NoiseSpec::orthogonal_complement(double level) {
    if (!(level > 1.0))
        throw SingularModel("orthogonal-complement noise requires level > 1");
    return NoiseSpec(Kind::OrthogonalComplement, level, std::nullopt);
}

NoiseSpec NoiseSpec::custom(const SymMatrix& cov) {
    check_psd(cov);
    return NoiseSpec(Kind::Custom, 0.0, cov);
}

SymMatrix NoiseSpec::realize(const OrthonormalFrame& w) const {
    const int d = w.rows();
    switch (kind_) {
        case Kind::Isotropic:
            return SymMatrix(scale_ * Matrix::Identity(d, d));
        case Kind::OrthogonalComplement:
            return SymMatrix(scale_ * Matrix::Identity(d, d) -
                             w.mat() * w.mat().transpose());
        case Kind::Custom:
            if (cov_->dim() != d)
                throw DimensionError("custom noise covariance must be d x d");
            return *cov_;
    }
    throw std::logic_error("unreachable");
}

std::uint64_t NoiseSpec::hash() const {
    std::string s;
    switch (kind_) {
        case Kind::Isotropic: s = "iso(" + fmt17(scale_) + ")"; break;
        case Kind::OrthogonalComplement: s = "ortho(" + fmt17(scale_) + ")"; break;
        case Kind::Custom:
            s = "custom(" + std::to_string(cov_->dim()) + ";";
            append_matrix(s, cov_->mat());
            s += ")";
            break;
    }
    return fnv1a(s);
}

std::uint64_t ModelParams::hash() const {
    std::string s = "params|d=" + std::to_string(d) + "|k=" + std::to_string(k) + "|W=";
    append_matrix(s, w.mat());
    s += "|A=";
    append_matrix(s, a.mat());
    s += "|B=";
    append_matrix(s, b.mat());
    return fnv1a(s);
}

ModelParams make_params(int d, int k, const OrthonormalFrame& w,
                        const NoiseSpec& a_spec, const NoiseSpec& b_spec) {
    if (k < 1 || k > d) throw DimensionError("make_params requires 1 <= k <= d");
    if (w.rows() != d || w.cols() != k)
        throw DimensionError("make_params: frame shape does not match (d, k)");
    SymMatrix a = a_spec.realize(w);
    SymMatrix b = b_spec.realize(w);
    if (a_spec.kind() == NoiseSpec::Kind::Custom) check_psd(a);
    if (b_spec.kind() == NoiseSpec::Kind::Custom) check_psd(b);
    return ModelParams{w, std::move(a), std::move(b), d, k};
}

LatentSpec LatentSpec::standard_gaussian(int k) {
    if (k < 1) throw DimensionError("standard_gaussian requires k >= 1");
    return LatentSpec(k, {});
}

LatentSpec LatentSpec::mixture(std::vector<MixtureComponent> components) {
    if (components.empty())
        throw ConfigError("mixture requires at least one component");
    const int k = static_cast<int>(components.front().mean.size());
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight > 0.0) || c.weight > 1.0)
            throw ConfigError("mixture weights must lie in (0, 1]");
        if (static_cast<int>(c.mean.size()) != k || c.cov.dim() != k)
            throw DimensionError("mixture component dimensions disagree");
        check_psd(c.cov);
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ConfigError("mixture weights must sum to 1 (got " + fmt17(total) + ")");
    return LatentSpec(k, std::move(components));
}

std::uint64_t LatentSpec::hash() const {
    std::string s;
    if (!is_mixture()) {
        s = "gauss(" + std::to_string(k_) + ")";
    } else {
        s = "mix(" + std::to_string(k_) + ";";
        for (const auto& c : components_) {
            s += "w=" + fmt17(c.weight) + ";mean=";
            for (int i = 0; i < c.mean.size(); ++i) s += fmt17(c.mean[i]) + ",";
            s += "cov=";
            append_matrix(s, c.cov.mat());
            s += ";";
        }
        s += ")";
    }
    return fnv1a(s);
}

Matrix sample_latents(const LatentSpec& spec, int n, Rng& rng) {
    if (n < 1) throw DimensionError("sample_latents requires n >= 1");
    const int k = spec.k();
    Matrix z(n, k);
    if (!spec.is_mixture()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) z(i, j) = rng.normal();
        return z;
    }
    const auto& comps = spec.components();
    std::vector<Matrix> factors;
    factors.reserve(comps.size());
    for (const auto& c : comps) factors.push_back(psd_sqrt(c.cov));
    Vector g(k);
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        std::size_t pick = comps.size() - 1;
        double cum = 0.0;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            cum += comps[c].weight;
            if (u < cum) {
                pick = c;
                break;
            }
        }
        for (int j = 0; j < k; ++j) g[j] = rng.normal();
        z.row(i) = (comps[pick].mean + factors[pick] * g).transpose();
    }
    return z;
}

PairedDataset sample_dataset(const ModelParams& params, const LatentSpec& latent,
                             int n, Rng& rng, std::uint64_t seed_tag) {
    if (latent.k() != params.k)
        throw DimensionError("latent dimension does not match params.k");
    if (n < 1) throw DimensionError("sample_dataset requires n >= 1");
    const int d = params.d;

    // Factor once, reuse across all n rows.
    const Matrix f_a = psd_sqrt(params.a);
    const Matrix f_b = psd_sqrt(params.b);

    PairedDataset data;
    data.z = sample_latents(latent, n, rng);

    Matrix g_a(n, d), g_b(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) g_a(i, j) = rng.normal();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) g_b(i, j) = rng.normal();

    data.x = data.z * params.w.mat().transpose() + g_a * f_a.transpose();
    data.xplus = data.x + g_b * f_b.transpose();
    data.params_hash = params.hash();
    data.latent_hash = latent.hash();
    data.seed = seed_tag;
    if (!data.x.allFinite() || !data.xplus.allFinite() || !data.z.allFinite())
        throw InvalidMatrix("sample_dataset produced non-finite values");
    return data;
}

}  // namespace genlab
