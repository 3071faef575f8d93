#include "genlab/likelihood.hpp"

#include <cmath>
#include <optional>

namespace genlab {

namespace {

constexpr double kStructTol = 1e-12;

// Returns s when m == s * I within 1e-12 * (1 + |s|), else nullopt.
std::optional<double> detect_scalar_identity(const Matrix& m) {
    const double s = m(0, 0);
    const double tol = kStructTol * (1.0 + std::abs(s));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const double want = (i == j) ? s : 0.0;
            if (std::abs(m(i, j) - want) > tol) return std::nullopt;
        }
    return s;
}

struct LogDetTrace {
    double log_det;
    double trace_inv_s;  // Tr(M^-1 S)
};

// Dense path: eigendecomposition, PD check, log det and Tr(M^-1 S).
LogDetTrace dense_parts(const SymMatrix& m, const SymMatrix& s) {
    const EigenPairs eig = sym_eig(m);
    const int d = m.dim();
    const double lambda_max = eig.values[0];
    double log_det = 0.0;
    double trace = 0.0;
    for (int j = 0; j < d; ++j) {
        const double lambda = eig.values[j];
        if (lambda <= kStructTol * std::max(1.0, lambda_max))
            throw SingularModel("covariance block is singular or indefinite");
        log_det += std::log(lambda);
        const Vector v = eig.vectors.col(j);
        trace += v.dot(s.mat() * v) / lambda;
    }
    return {log_det, trace};
}

}  // namespace

SufficientStats SufficientStats::zero(int d) {
    return SufficientStats{SymMatrix::zero(d), SymMatrix::zero(d), 0};
}

SufficientStats sufficient_stats(const PairedDataset& data) {
    if (data.n() < 1) throw DimensionError("sufficient_stats requires n >= 1");
    const Matrix delta = data.x - data.xplus;
    return SufficientStats{SymMatrix(delta.transpose() * delta),
                           SymMatrix(data.x.transpose() * data.x),
                           data.n()};
}

double neg_log_likelihood(const OrthonormalFrame& w, const SymMatrix& a,
                          const SymMatrix& b, const SufficientStats& stats) {
    const int d = w.rows();
    const int k = w.cols();
    if (a.dim() != d || b.dim() != d || stats.dim() != d)
        throw DimensionError("neg_log_likelihood: dimension mismatch");
    if (stats.n < 1)
        throw std::invalid_argument("neg_log_likelihood requires stats.n >= 1");

    const Matrix& wm = w.mat();
    double log_det_b, tr_b;
    if (auto eps2 = detect_scalar_identity(b.mat())) {
        if (*eps2 <= kStructTol) throw SingularModel("B is singular");
        log_det_b = d * std::log(*eps2);
        tr_b = stats.s_delta.mat().trace() / *eps2;
    } else if (auto gamma = detect_scalar_identity(b.mat() + wm * wm.transpose())) {
        // B = gamma I - W W^T; PD iff gamma > 1
        if (!(*gamma > 1.0)) throw SingularModel("B = gamma I - W W^T requires gamma > 1");
        log_det_b = k * std::log(*gamma - 1.0) + (d - k) * std::log(*gamma);
        const double quad = (wm.transpose() * stats.s_delta.mat() * wm).trace();
        tr_b = (stats.s_delta.mat().trace() + quad / (*gamma - 1.0)) / *gamma;
    } else {
        const LogDetTrace parts = dense_parts(b, stats.s_delta);
        log_det_b = parts.log_det;
        tr_b = parts.trace_inv_s;
    }

    double log_det_m, tr_m;
    if (auto sigma2 = detect_scalar_identity(a.mat())) {
        // W W^T + sigma2 I: eigenvalues 1 + sigma2 (k-fold) and sigma2
        if (*sigma2 <= kStructTol) throw SingularModel("W W^T + A is singular");
        log_det_m = k * std::log1p(*sigma2) + (d - k) * std::log(*sigma2);
        const double quad = (wm.transpose() * stats.s_x.mat() * wm).trace();
        tr_m = (stats.s_x.mat().trace() - quad / (1.0 + *sigma2)) / *sigma2;
    } else if (auto rho = detect_scalar_identity(a.mat() + wm * wm.transpose())) {
        // A = rho I - W W^T collapses the anchor block to rho I
        if (!(*rho > kStructTol)) throw SingularModel("W W^T + A is singular");
        log_det_m = d * std::log(*rho);
        tr_m = stats.s_x.mat().trace() / *rho;
    } else {
        const SymMatrix m(wm * wm.transpose() + a.mat());
        const LogDetTrace parts = dense_parts(m, stats.s_x);
        log_det_m = parts.log_det;
        tr_m = parts.trace_inv_s;
    }

    return log_det_b + log_det_m + (tr_b + tr_m) / static_cast<double>(stats.n);
}

double neg_log_likelihood_dense(const Matrix& w, const SymMatrix& a,
                                const SymMatrix& b, const SufficientStats& stats) {
    const int d = static_cast<int>(w.rows());
    if (a.dim() != d || b.dim() != d || stats.dim() != d)
        throw DimensionError("neg_log_likelihood_dense: dimension mismatch");
    if (stats.n < 1)
        throw std::invalid_argument("neg_log_likelihood_dense requires stats.n >= 1");
    const LogDetTrace bp = dense_parts(b, stats.s_delta);
    const SymMatrix m(w * w.transpose() + a.mat());
    const LogDetTrace mp = dense_parts(m, stats.s_x);
    return bp.log_det + mp.log_det +
           (bp.trace_inv_s + mp.trace_inv_s) / static_cast<double>(stats.n);
}

PriorSpec PriorSpec::uniform() {
    return PriorSpec(Kind::UniformStiefel, std::nullopt, 0.0);
}

PriorSpec PriorSpec::concentration(const OrthonormalFrame& w0, double kappa) {
    if (kappa < 0.0) throw InvalidPrior("concentration prior requires kappa >= 0");
    return PriorSpec(Kind::MatrixConcentration, w0, kappa);
}

double PriorSpec::log_density(const Matrix& w) const {
    if (kind_ == Kind::UniformStiefel) return 0.0;
    if (w.rows() != w0_->rows() || w.cols() != w0_->cols())
        throw DimensionError("prior reference frame shape mismatch");
    return kappa_ * (w0_->mat().transpose() * w).trace();
}

double log_posterior(const OrthonormalFrame& w, const SymMatrix& a,
                     const SymMatrix& b, const SufficientStats& stats,
                     const PriorSpec& prior) {
    const double lp = prior.log_density(w.mat());
    if (stats.n == 0) return lp;
    return lp - 0.5 * static_cast<double>(stats.n) * neg_log_likelihood(w, a, b, stats);
}

}  // namespace genlab
