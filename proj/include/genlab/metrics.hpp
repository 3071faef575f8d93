#pragma once

#include <optional>

#include "genlab/estimators.hpp"

namespace genlab {

struct RecoveryReport {
    // Per-sample RMS Frobenius residual ||Z - Z_hat Q^T||_F / sqrt(n) after
    // orthogonal Procrustes alignment of Z_hat = X W_hat against Z.
    double loss = 0.0;
    // Cosines of the principal angles between the true and estimated frames,
    // descending; empty when the true frame was not supplied.
    Vector alignment;
    std::optional<FitMethod> method;
    bool procrustes_degenerate = false;
};

RecoveryReport recovery_loss(const Matrix& z_true, const Matrix& x,
                             const OrthonormalFrame& w_hat,
                             const std::optional<OrthonormalFrame>& w_true = std::nullopt,
                             std::optional<FitMethod> method = std::nullopt);

inline RecoveryReport recovery_loss(const Matrix& z_true, const Matrix& x,
                                    const SubspaceEstimate& estimate,
                                    const std::optional<OrthonormalFrame>& w_true =
                                        std::nullopt) {
    return recovery_loss(z_true, x, estimate.w_hat, w_true, estimate.method);
}

// Singular values of W^T W_hat, sorted descending and clamped to [0, 1]:
// 1 = aligned direction, 0 = orthogonal.
Vector subspace_alignment(const OrthonormalFrame& w, const OrthonormalFrame& w_hat);

// Largest principal angle, acos of the smallest alignment cosine.
double max_principal_angle(const OrthonormalFrame& w, const OrthonormalFrame& w_hat);

}  // namespace genlab
