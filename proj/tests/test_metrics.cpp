#include <doctest.h>

#include <cmath>

#include "genlab/metrics.hpp"

using namespace genlab;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

OrthonormalFrame planar(double theta) {
    Matrix w(2, 1);
    w << std::cos(theta), std::sin(theta);
    return OrthonormalFrame(w);
}

}  // namespace

TEST_CASE("recovery_loss: exact recovery on noiseless data") {
    Rng rng(61);
    const OrthonormalFrame w = sample_orthonormal(4, 2, rng);
    const Matrix z = random_matrix(200, 2, rng);
    const Matrix x = z * w.mat().transpose();
    const RecoveryReport report = recovery_loss(z, x, w, w);
    CHECK(report.loss < 1e-12);
    CHECK(report.alignment.size() == 2);
    CHECK(report.alignment[0] == doctest::Approx(1.0));
    CHECK(report.alignment[1] == doctest::Approx(1.0));
}

TEST_CASE("recovery_loss: sign flip absorbed by the alignment") {
    Rng rng(62);
    const OrthonormalFrame w = sample_orthonormal(2, 1, rng);
    const Matrix z = random_matrix(100, 1, rng);
    const Matrix x = z * w.mat().transpose();
    const OrthonormalFrame flipped(Matrix(-w.mat()));
    CHECK(recovery_loss(z, x, flipped).loss < 1e-12);
}

TEST_CASE("recovery_loss: orthogonal estimate carries no signal") {
    Rng rng(63);
    const int n = 10000;
    const Matrix z = random_matrix(n, 1, rng);
    Matrix w(2, 1), w_perp(2, 1);
    w << 1.0, 0.0;
    w_perp << 0.0, 1.0;
    const Matrix x = z * w.transpose();  // noiseless, so zhat is exactly zero
    const RecoveryReport report = recovery_loss(z, x, OrthonormalFrame(w_perp));
    CHECK(report.procrustes_degenerate);
    const double rms = z.norm() / std::sqrt(static_cast<double>(n));
    CHECK(report.loss == doctest::Approx(rms));
    CHECK(std::abs(report.loss - 1.0) < 0.05);
}

TEST_CASE("recovery_loss: invariant to right rotation of the estimate") {
    Rng rng(64);
    const OrthonormalFrame w = sample_orthonormal(5, 2, rng);
    const OrthonormalFrame w_hat = sample_orthonormal(5, 2, rng);
    const Matrix z = random_matrix(300, 2, rng);
    const Matrix x = z * w.mat().transpose() + 0.1 * random_matrix(300, 5, rng);

    const double theta = 0.7;
    Matrix q(2, 2);
    q << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const OrthonormalFrame rotated(w_hat.mat() * q);
    const double base = recovery_loss(z, x, w_hat).loss;
    const double turned = recovery_loss(z, x, rotated).loss;
    CHECK(std::abs(base - turned) < 1e-10);
}

TEST_CASE("recovery_loss: monotone in planar misalignment on noiseless data") {
    Rng rng(65);
    const Matrix z = random_matrix(500, 1, rng);
    const OrthonormalFrame w = planar(0.0);
    const Matrix x = z * w.mat().transpose();
    double previous = -1.0;
    for (double theta : {0.05, 0.3, 0.7, 1.1, 1.5}) {
        const double loss = recovery_loss(z, x, planar(theta)).loss;
        CHECK(loss >= previous);
        previous = loss;
    }
}

TEST_CASE("recovery_loss: shape validation") {
    Rng rng(66);
    const OrthonormalFrame w = sample_orthonormal(3, 1, rng);
    const Matrix z = random_matrix(10, 1, rng);
    const Matrix x = random_matrix(9, 3, rng);
    CHECK_THROWS_AS(recovery_loss(z, x, w), DimensionError);
}

TEST_CASE("subspace_alignment: identical frames and planar angles") {
    Rng rng(67);
    const OrthonormalFrame w = sample_orthonormal(4, 2, rng);
    const Vector self = subspace_alignment(w, w);
    CHECK(self[0] == doctest::Approx(1.0));
    CHECK(self[1] == doctest::Approx(1.0));

    const double theta = 0.42;
    const Vector cosines = subspace_alignment(planar(0.1), planar(0.1 + theta));
    CHECK(cosines[0] == doctest::Approx(std::cos(theta)).epsilon(1e-12));
}

TEST_CASE("subspace_alignment: matches the projector-spectrum oracle at d=6, k=2") {
    Rng rng(68);
    const OrthonormalFrame w = sample_orthonormal(6, 2, rng);
    const OrthonormalFrame w_hat = sample_orthonormal(6, 2, rng);
    const Vector cosines = subspace_alignment(w, w_hat);

    // eigenvalues of (W^T What)(What^T W) are the squared cosines
    const Matrix cross = w.mat().transpose() * w_hat.mat();
    const EigenPairs eig = sym_eig(SymMatrix(cross * cross.transpose()));
    for (int i = 0; i < 2; ++i)
        CHECK(cosines[i] * cosines[i] == doctest::Approx(eig.values[i]).epsilon(1e-10));

    // symmetry in the arguments
    const Vector swapped = subspace_alignment(w_hat, w);
    for (int i = 0; i < 2; ++i)
        CHECK(cosines[i] == doctest::Approx(swapped[i]).epsilon(1e-12));

    for (int i = 0; i < 2; ++i) {
        CHECK(cosines[i] >= 0.0);
        CHECK(cosines[i] <= 1.0);
    }
}

TEST_CASE("max_principal_angle: orthogonal planar frames give pi/2") {
    CHECK(max_principal_angle(planar(0.0), planar(1.5707963267948966)) ==
          doctest::Approx(1.5707963267948966).epsilon(1e-9));
    CHECK_THROWS_AS(
        subspace_alignment(planar(0.0), OrthonormalFrame(Matrix::Identity(3, 1))),
        DimensionError);
}
