#pragma once

#include "favar/model.hpp"

namespace favar::linalg {

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

bool is_symmetric(const Matrix& m, double tol = 1e-10);
bool is_spd(const Matrix& m);

/// Moore-Penrose inverse of a symmetric PSD matrix; eigenvalues below
/// rel_tol * max eigenvalue are treated as zero.
Matrix pinv_psd(const Matrix& m, double rel_tol = 1e-10);

/// Factor G with G G' = m for a symmetric PSD m (negative eigenvalues clipped).
Matrix psd_factor(const Matrix& m);

/// Symmetric part with eigenvalues floored at `floor`.
Matrix nearest_spd(const Matrix& m, double floor = 1e-10);

/// 2-norm condition number of a symmetric matrix.
double condition_number(const Matrix& m);

/// log-determinant from a successful LLT factor.
double log_det_llt(const Eigen::LLT<Matrix>& llt);

}  // namespace favar::linalg
