#include "favar/state_space.hpp"

#include "favar/error.hpp"
#include "favar/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace favar {

namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

void require(bool ok, const std::string& what) {
    if (!ok) throw ShapeError("state space: " + what);
}

}  // namespace

void StateSpaceSystem::validate(Index T) const {
    const Index m = trans.rows();
    const Index p = obs_loading.rows();
    require(trans.cols() == m && m > 0, "transition matrix must be square");
    require(obs_loading.cols() == m, "observation loading has wrong column count");
    require(obs_noise.rows() == p && obs_noise.cols() == p, "observation noise must be p x p");
    require(trans_noise.rows() == m && trans_noise.cols() == m, "transition noise must be m x m");
    require(init_mean.size() == m && init_cov.rows() == m && init_cov.cols() == m, "initial moments have wrong size");
    require(obs_offset.size() == 0 || (obs_offset.rows() == T && obs_offset.cols() == p), "observation offset must be T x p");
    require(trans_offset.size() == 0 || (trans_offset.rows() == T && trans_offset.cols() == m),
            "transition offset must be T x m");
    if (!obs_loading.allFinite() || !obs_noise.allFinite() || !trans.allFinite() || !trans_noise.allFinite() ||
        !init_mean.allFinite() || !init_cov.allFinite() || !obs_offset.allFinite() || !trans_offset.allFinite())
        throw DataError("state space: non-finite system matrices");
}

FilterOutput kalman_filter(const StateSpaceSystem& sys, const Matrix& observations) {
    const Index T = observations.rows();
    sys.validate(T);
    if (observations.cols() != sys.obs_dim()) throw ShapeError("kalman_filter: observation width differs from p");
    if (!observations.allFinite()) throw DataError("kalman_filter: non-finite observations");

    const Index m = sys.state_dim();
    const Index p = sys.obs_dim();
    const Matrix& Z = sys.obs_loading;
    const Matrix& Phi = sys.trans;
    const Matrix I = Matrix::Identity(m, m);

    FilterOutput out;
    out.pred_mean.reserve(T);
    out.pred_cov.reserve(T);
    out.filt_mean.reserve(T + 1);
    out.filt_cov.reserve(T + 1);
    out.filt_mean.push_back(sys.init_mean);
    out.filt_cov.push_back(linalg::symmetrize(sys.init_cov));

    Vector mean = sys.init_mean;
    Matrix cov = out.filt_cov.back();
    double loglik = 0.0;

    for (Index t = 0; t < T; ++t) {
        Vector a = Phi * mean;
        if (sys.trans_offset.size() != 0) a += sys.trans_offset.row(t).transpose();
        Matrix P = linalg::symmetrize(Phi * cov * Phi.transpose() + sys.trans_noise);
        out.pred_mean.push_back(a);
        out.pred_cov.push_back(P);

        Vector v = observations.row(t).transpose() - Z * a;
        if (sys.obs_offset.size() != 0) v -= sys.obs_offset.row(t).transpose();
        const Matrix PZt = P * Z.transpose();
        const Matrix F = linalg::symmetrize(Z * PZt + sys.obs_noise);
        Eigen::LLT<Matrix> llt(F);
        if (llt.info() != Eigen::Success) {
            std::ostringstream err;
            err << "kalman_filter: innovation covariance not positive definite at t=" << t + 1;
            throw NumericalError(err.str());
        }
        const Matrix Kt = llt.solve(PZt.transpose());  // K' = F^-1 Z P
        const Matrix K = Kt.transpose();
        mean = a + K * v;
        const Matrix IKZ = I - K * Z;
        cov = linalg::symmetrize(IKZ * P * IKZ.transpose() + K * sys.obs_noise * K.transpose());

        const double scale = std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff());
        if (cov.diagonal().minCoeff() < -1e-8 * scale || !cov.allFinite()) {
            std::ostringstream err;
            err << "kalman_filter: filtered covariance lost positive semi-definiteness at t=" << t + 1;
            throw NumericalError(err.str());
        }

        loglik += -0.5 * (static_cast<double>(p) * kLog2Pi + linalg::log_det_llt(llt) + v.dot(llt.solve(v)));
        out.filt_mean.push_back(mean);
        out.filt_cov.push_back(cov);
    }
    if (!std::isfinite(loglik)) throw NumericalError("kalman_filter: log-likelihood is not finite");
    out.loglik = loglik;
    return out;
}

Matrix ffbs_draw(const StateSpaceSystem& sys, const Matrix& observations, Rng& rng) {
    return ffbs_draw(sys, observations, kalman_filter(sys, observations), rng);
}

Matrix ffbs_draw(const StateSpaceSystem& sys, const Matrix& observations, const FilterOutput& filtered, Rng& rng) {
    const Index T = observations.rows();
    const Index m = sys.state_dim();
    const Matrix& Phi = sys.trans;

    Matrix states(T + 1, m);
    Vector s = MvnFactor(filtered.filt_cov[T]).draw(filtered.filt_mean[T], rng);
    states.row(T) = s.transpose();

    // s_t | s_{t+1}, o_{1:t}; the predictive covariance is singular in the
    // companion lags and in exactly observed directions, hence the pseudo-inverse.
    for (Index t = T - 1; t >= 0; --t) {
        const Vector& mt = filtered.filt_mean[t];
        const Matrix& Pt = filtered.filt_cov[t];
        const Matrix G = Pt * Phi.transpose();
        const Matrix Ppinv = linalg::pinv_psd(filtered.pred_cov[t]);
        const Vector gap = s - filtered.pred_mean[t];
        const Vector mean = mt + G * (Ppinv * gap);
        const Matrix cov = linalg::symmetrize(Pt - G * Ppinv * G.transpose());
        s = mean + linalg::psd_factor(cov) * rng.normal_vector(m);
        states.row(t) = s.transpose();
    }
    return states;
}

FavarStateSpace build_favar_system(const FavarParams& params, const PanelData& data) {
    const int R = params.R();
    const int S = params.S();
    const int K = params.K();
    const int n = S + K;
    const int Q = params.Q();
    const Index T = data.T();
    if (n == 0 || Q < 1) throw ShapeError("build_favar_system: empty VAR");
    if (data.R() != R || data.K() != K) throw ShapeError("build_favar_system: panel and parameter dimensions differ");
    if (params.A.rows() != n || params.A.cols() != static_cast<Index>(n) * Q || params.SigmaU.rows() != n)
        throw ShapeError("build_favar_system: VAR parameter shapes inconsistent");
    if (!(params.sigma2.array() > 0.0).all()) throw ParameterError("build_favar_system: sigma2 must be positive");

    const Index m = static_cast<Index>(n) * Q;
    FavarStateSpace out;
    StateSpaceSystem& sys = out.sys;

    const CompanionForm comp = build_companion(params.A, n, Q);
    sys.trans = comp.Phi;
    sys.trans_noise = Matrix::Zero(m, m);
    sys.trans_noise.topLeftCorner(n, n) = linalg::symmetrize(params.SigmaU);
    if (data.has_proxy()) {
        sys.trans_offset = Matrix::Zero(T, m);
        sys.trans_offset.leftCols(n) = (*data.z) * params.zeta.transpose();
    }
    sys.init_mean = Vector::Zero(m);
    sys.init_cov = kInitStateVariance * Matrix::Identity(m, m);
    sys.obs_loading = Matrix::Zero(n, m);
    sys.obs_loading.leftCols(n).setIdentity();
    sys.obs_noise = Matrix::Zero(n, n);

    // Regional block: H - LambdaM M = LambdaF F + eps.
    Matrix Htilde = data.H;
    if (K > 0) Htilde.noalias() -= data.M * params.LambdaM.transpose();
    const Vector inv_var = params.sigma2.cwiseInverse();
    const double sum_log_var = params.sigma2.array().log().sum();

    out.observations = Matrix::Zero(T, n);
    if (K > 0) out.observations.rightCols(K) = data.M;

    double adjustment = 0.0;
    if (S > 0) {
        const Matrix WL = inv_var.asDiagonal() * params.LambdaF;  // D^-1 LambdaF
        const Matrix C = linalg::symmetrize(params.LambdaF.transpose() * WL);
        Eigen::LLT<Matrix> llt(C);
        if (llt.info() != Eigen::Success) throw NumericalError("build_favar_system: loading cross-product singular");
        const Matrix Fhat = llt.solve(WL.transpose() * Htilde.transpose()).transpose();  // T x S
        const Matrix resid = Htilde - Fhat * params.LambdaF.transpose();
        const double quad = (resid.array().square().rowwise() * inv_var.transpose().array()).sum();
        adjustment = -0.5 * (static_cast<double>(T) * ((R - S) * kLog2Pi + sum_log_var + linalg::log_det_llt(llt)) + quad);
        out.observations.leftCols(S) = Fhat;
        sys.obs_noise.topLeftCorner(S, S) = llt.solve(Matrix::Identity(S, S));
    } else {
        const double quad = (Htilde.array().square().rowwise() * inv_var.transpose().array()).sum();
        adjustment = -0.5 * (static_cast<double>(T) * (R * kLog2Pi + sum_log_var) + quad);
    }
    out.loglik_adjustment = adjustment;
    return out;
}

Matrix factor_path(const Matrix& states, int S) { return states.bottomRows(states.rows() - 1).leftCols(S); }

double integrated_loglik(const FavarParams& params, const PanelData& data) {
    const FavarStateSpace fs = build_favar_system(params, data);
    return kalman_filter(fs.sys, fs.observations).loglik + fs.loglik_adjustment;
}

}  // namespace favar
