#pragma once

#include "genlab/genmodel.hpp"

namespace genlab {

// The two d x d diagonal blocks of the block statistic S; the 2d x 2d form
// is never materialized. s_delta stores the positive sum of the
// augmentation-difference outer products.
struct SufficientStats {
    SymMatrix s_delta;  // sum_i (x_i - xplus_i)(x_i - xplus_i)^T
    SymMatrix s_x;      // sum_i x_i x_i^T
    long n;

    static SufficientStats zero(int d);
    int dim() const { return s_x.dim(); }
};

SufficientStats sufficient_stats(const PairedDataset& data);

// Minimization objective
//   log det(B) + log det(W W^T + A)
//     + [Tr(B^-1 S_delta) + Tr((W W^T + A)^-1 S_x)] / n,
// i.e. the exact negative log-likelihood per pair with the additive
// constant 2d log(2pi) and the global factor 1/2 dropped. Uses closed-form
// log-determinants and inverses when A or B has isotropic or
// orthogonal-complement structure, dense factorizations otherwise.
double neg_log_likelihood(const OrthonormalFrame& w, const SymMatrix& a,
                          const SymMatrix& b, const SufficientStats& stats);

// Same objective evaluated generically: no structured-form shortcuts, and
// defined for any d x k matrix (orthonormal or not). The numeric fitter
// differentiates this path so that it stays independent of the closed-form
// branches it is used to cross-check.
double neg_log_likelihood_dense(const Matrix& w, const SymMatrix& a,
                                const SymMatrix& b, const SufficientStats& stats);

class PriorSpec {
public:
    enum class Kind { UniformStiefel, MatrixConcentration };

    static PriorSpec uniform();
    // Density proportional to exp(kappa * Tr(W0^T W)); kappa >= 0.
    static PriorSpec concentration(const OrthonormalFrame& w0, double kappa);

    Kind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    const OrthonormalFrame& w0() const { return *w0_; }

    // Unnormalized log prior density; accepts a raw matrix so optimizer
    // finite differences can evaluate it off the frame manifold.
    double log_density(const Matrix& w) const;

private:
    PriorSpec(Kind kind, std::optional<OrthonormalFrame> w0, double kappa)
        : kind_(kind), w0_(std::move(w0)), kappa_(kappa) {}

    Kind kind_;
    std::optional<OrthonormalFrame> w0_;
    double kappa_;
};

// log P(W) - (n/2) * neg_log_likelihood, unnormalized. With no data
// (stats.n == 0) this is just the log prior.
double log_posterior(const OrthonormalFrame& w, const SymMatrix& a,
                     const SymMatrix& b, const SufficientStats& stats,
                     const PriorSpec& prior);

}  // namespace genlab
