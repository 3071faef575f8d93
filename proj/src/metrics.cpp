#include "genlab/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace genlab {

RecoveryReport recovery_loss(const Matrix& z_true, const Matrix& x,
                             const OrthonormalFrame& w_hat,
                             const std::optional<OrthonormalFrame>& w_true,
                             std::optional<FitMethod> method) {
    if (z_true.rows() != x.rows())
        throw DimensionError("recovery_loss: Z and X row counts differ");
    if (x.cols() != w_hat.rows() || z_true.cols() != w_hat.cols())
        throw DimensionError("recovery_loss: frame shape inconsistent with data");

    const Matrix z_hat = x * w_hat.mat();
    const ProcrustesResult align = procrustes_align(z_true, z_hat);

    RecoveryReport report;
    report.loss = (z_true - z_hat * align.q.transpose()).norm() /
                  std::sqrt(static_cast<double>(z_true.rows()));
    report.procrustes_degenerate = align.degenerate;
    report.method = method;
    if (w_true) report.alignment = subspace_alignment(*w_true, w_hat);
    return report;
}

Vector subspace_alignment(const OrthonormalFrame& w, const OrthonormalFrame& w_hat) {
    if (w.rows() != w_hat.rows() || w.cols() != w_hat.cols())
        throw DimensionError("subspace_alignment: frames must share d and k");
    Eigen::JacobiSVD<Matrix> svd(w.mat().transpose() * w_hat.mat());
    Vector cosines = svd.singularValues();
    for (int i = 0; i < cosines.size(); ++i)
        cosines[i] = std::clamp(cosines[i], 0.0, 1.0);
    return cosines;
}

double max_principal_angle(const OrthonormalFrame& w, const OrthonormalFrame& w_hat) {
    const Vector cosines = subspace_alignment(w, w_hat);
    return std::acos(cosines[cosines.size() - 1]);
}

}  // namespace genlab
