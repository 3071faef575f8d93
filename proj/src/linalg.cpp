#include "genlab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace genlab {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

// Largest-magnitude entry positive, ties broken by lowest index.
void apply_sign_convention(Matrix& vectors) {
    for (int j = 0; j < vectors.cols(); ++j) {
        int best = 0;
        double best_abs = -1.0;
        for (int i = 0; i < vectors.rows(); ++i) {
            const double a = std::abs(vectors(i, j));
            if (a > best_abs + 0.0) {  // strict: ties keep the lower index
                best_abs = a;
                best = i;
            }
        }
        if (vectors(best, j) < 0.0) vectors.col(j) = -vectors.col(j);
    }
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw DimensionError("SymMatrix requires a square matrix with dim >= 1");
    m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int dim) {
    return SymMatrix(Matrix::Identity(dim, dim));
}

SymMatrix SymMatrix::zero(int dim) {
    return SymMatrix(Matrix::Zero(dim, dim));
}

OrthonormalFrame::OrthonormalFrame(const Matrix& m) : m_(m) {
    const auto d = m_.rows();
    const auto k = m_.cols();
    if (k < 1 || k > d)
        throw DimensionError("OrthonormalFrame requires 1 <= k <= d");
    const Matrix gram = m_.transpose() * m_;
    const double err = (gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
    if (!all_finite(m_) || err > kOrthoTol)
        throw InvalidMatrix("columns are not orthonormal (max deviation " +
                            std::to_string(err) + ")");
}

EigenPairs sym_eig(const SymMatrix& m) {
    if (!all_finite(m.mat()))
        throw InvalidMatrix("sym_eig: matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.mat());
    if (solver.info() != Eigen::Success) {
        const double scale = m.mat().cwiseAbs().maxCoeff();
        throw ConvergenceFailure("sym_eig: eigensolver did not converge (matrix scale " +
                                 std::to_string(scale) + ")");
    }
    EigenPairs out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    apply_sign_convention(out.vectors);
    return out;
}

OrthonormalFrame sample_orthonormal(int d, int k, Rng& rng) {
    if (k < 1 || k > d)
        throw DimensionError("sample_orthonormal requires 1 <= k <= d");
    for (;;) {
        Matrix g(d, k);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < k; ++j) g(i, j) = rng.normal();
        try {
            return OrthonormalFrame(gram_schmidt(g));
        } catch (const InvalidMatrix&) {
            // numerically dependent Gaussian columns; redraw
        }
    }
}

Matrix psd_sqrt(const SymMatrix& m) {
    const EigenPairs eig = sym_eig(m);
    const int d = m.dim();
    Vector roots(d);
    for (int i = 0; i < d; ++i) {
        const double lambda = eig.values[i];
        if (lambda < -1e-10) throw NotPSD(lambda);
        roots[i] = std::sqrt(std::max(lambda, 0.0));
    }
    return eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
}

SymMatrix structured_inverse_iso(const OrthonormalFrame& w, double sigma2) {
    if (!(sigma2 > 0.0))
        throw InvalidNoise("structured_inverse_iso requires sigma2 > 0");
    const int d = w.rows();
    const Matrix proj = w.mat() * w.mat().transpose();
    return SymMatrix((Matrix::Identity(d, d) - proj / (1.0 + sigma2)) / sigma2);
}

SymMatrix structured_inverse_ortho(const OrthonormalFrame& w, double gamma) {
    if (!(gamma > 1.0))
        throw SingularModel("structured_inverse_ortho requires gamma > 1");
    const int d = w.rows();
    const Matrix proj = w.mat() * w.mat().transpose();
    return SymMatrix((Matrix::Identity(d, d) + proj / (gamma - 1.0)) / gamma);
}

ProcrustesResult procrustes_align(const Matrix& z_true, const Matrix& z_hat) {
    if (z_true.rows() != z_hat.rows() || z_true.cols() != z_hat.cols())
        throw DimensionError("procrustes_align: shape mismatch");
    if (z_true.rows() < z_true.cols())
        throw DimensionError("procrustes_align requires n >= k");
    const int k = static_cast<int>(z_true.cols());
    const Matrix cross = z_hat.transpose() * z_true;
    if (cross.cwiseAbs().maxCoeff() == 0.0)
        return {Matrix::Identity(k, k), true};
    Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {svd.matrixV() * svd.matrixU().transpose(), false};
}

Matrix gram_schmidt(const Matrix& m) {
    Matrix q = m;
    for (int j = 0; j < q.cols(); ++j) {
        for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
        const double norm = q.col(j).norm();
        if (norm < 1e-12)
            throw InvalidMatrix("gram_schmidt: column " + std::to_string(j) +
                                " is numerically dependent");
        q.col(j) /= norm;
    }
    return q;
}

}  // namespace genlab
