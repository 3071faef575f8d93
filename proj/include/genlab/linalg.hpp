#pragma once

#include <Eigen/Dense>

#include "genlab/errors.hpp"
#include "genlab/rng.hpp"

namespace genlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense symmetric matrix. Construction averages m with its transpose, so
// entries(i,j) == entries(j,i) holds exactly afterwards.
class SymMatrix {
public:
    explicit SymMatrix(const Matrix& m);

    static SymMatrix identity(int dim);
    static SymMatrix zero(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& mat() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    Matrix m_;
};

// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
// Each eigenvector is scaled so its largest-magnitude entry is positive,
// ties broken by lowest index; reruns produce identical matrices.
struct EigenPairs {
    Vector values;   // non-increasing
    Matrix vectors;  // column j pairs with values[j]
};

// d x k matrix with orthonormal columns (k <= d).
class OrthonormalFrame {
public:
    static constexpr double kOrthoTol = 1e-10;

    explicit OrthonormalFrame(const Matrix& m);

    int rows() const { return static_cast<int>(m_.rows()); }
    int cols() const { return static_cast<int>(m_.cols()); }
    const Matrix& mat() const { return m_; }

private:
    Matrix m_;
};

EigenPairs sym_eig(const SymMatrix& m);

// Haar-distributed orthonormal frame (Gram-Schmidt of an iid Gaussian draw).
OrthonormalFrame sample_orthonormal(int d, int k, Rng& rng);

// Symmetric square root V sqrt(diag(lambda)) V^T with eigenvalues in
// [-1e-10, 0) clamped to zero. Eigenvalues below -1e-10 raise NotPSD.
Matrix psd_sqrt(const SymMatrix& m);

// (W W^T + sigma2 I)^-1 = sigma2^-1 (I - W W^T / (1 + sigma2)).
SymMatrix structured_inverse_iso(const OrthonormalFrame& w, double sigma2);

// (gamma I - W W^T)^-1 = gamma^-1 (I + W W^T / (gamma - 1)), gamma > 1.
SymMatrix structured_inverse_ortho(const OrthonormalFrame& w, double gamma);

struct ProcrustesResult {
    Matrix q;         // k x k orthogonal
    bool degenerate;  // all-zero input; q is the identity
};

// Orthogonal Q minimizing ||Z_true - Z_hat Q^T||_F, from the SVD of
// Z_hat^T Z_true.
ProcrustesResult procrustes_align(const Matrix& z_true, const Matrix& z_hat);

// Column-wise Gram-Schmidt in fixed order; the retraction used by the
// numeric fitter and the posterior sampler. Throws InvalidMatrix when a
// column becomes numerically dependent.
Matrix gram_schmidt(const Matrix& m);

}  // namespace genlab
