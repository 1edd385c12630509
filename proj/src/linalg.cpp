#include "favar/linalg.hpp"

#include <cmath>
#include <limits>

namespace favar::linalg {

bool is_symmetric(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_spd(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    if (!m.allFinite() || !is_symmetric(m)) return false;
    Eigen::LLT<Matrix> llt(symmetrize(m));
    return llt.info() == Eigen::Success;
}

Matrix pinv_psd(const Matrix& m, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    const Vector& ev = es.eigenvalues();
    const double cutoff = rel_tol * std::max(ev.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    Vector inv = Vector::Zero(ev.size());
    for (Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > cutoff) inv[i] = 1.0 / ev[i];
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Matrix psd_factor(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal();
}

Matrix nearest_spd(const Matrix& m, double floor) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    Vector ev = es.eigenvalues().cwiseMax(floor);
    return symmetrize(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose());
}

double condition_number(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    const Vector& ev = es.eigenvalues();
    const double lo = ev.cwiseAbs().minCoeff();
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    return ev.cwiseAbs().maxCoeff() / lo;
}

double log_det_llt(const Eigen::LLT<Matrix>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace favar::linalg
