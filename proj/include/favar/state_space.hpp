#pragma once

#include "favar/model.hpp"
#include "favar/random.hpp"

#include <vector>

namespace favar {

/**
 * Linear Gaussian state space model
 *
 *   o_t = Z s_t + d_t + e_t,        e_t ~ N(0, obs_noise)
 *   s_t = Phi s_{t-1} + c_t + w_t,  w_t ~ N(0, trans_noise)
 *   s_0 ~ N(init_mean, init_cov),   t = 1..T.
 *
 * obs_noise and trans_noise may be singular (exactly observed components,
 * companion-form lags). Offsets are T x dim matrices or empty for zero.
 */
struct StateSpaceSystem {
    Matrix obs_loading;    // p x m
    Matrix obs_offset;     // T x p, or empty
    Matrix obs_noise;      // p x p, symmetric PSD
    Matrix trans;          // m x m
    Matrix trans_offset;   // T x m, or empty
    Matrix trans_noise;    // m x m, symmetric PSD
    Vector init_mean;      // m
    Matrix init_cov;       // m x m

    [[nodiscard]] Index state_dim() const noexcept { return trans.rows(); }
    [[nodiscard]] Index obs_dim() const noexcept { return obs_loading.rows(); }

    void validate(Index T) const;
};

struct FilterOutput {
    // pred_* have T entries (t = 1..T). filt_* have T+1 entries; index 0 is the
    // initial state s_0 and index t is the filtered moment after observing o_t.
    std::vector<Vector> pred_mean;
    std::vector<Matrix> pred_cov;
    std::vector<Vector> filt_mean;
    std::vector<Matrix> filt_cov;
    double loglik = 0.0;
};

/// Kalman filter with Joseph-form covariance update. observations is T x p.
FilterOutput kalman_filter(const StateSpaceSystem& sys, const Matrix& observations);

/// One draw of s_{0:T} from p(s_{0:T} | o_{1:T}); row t of the result is s_t.
Matrix ffbs_draw(const StateSpaceSystem& sys, const Matrix& observations, Rng& rng);
Matrix ffbs_draw(const StateSpaceSystem& sys, const Matrix& observations, const FilterOutput& filtered, Rng& rng);

/// Initial state covariance scale used by the FAVAR system (s_0 ~ N(0, 10 I)).
inline constexpr double kInitStateVariance = 10.0;

/**
 * State space form of the FAVAR.
 *
 * The state is the companion vector s_t = (y_t, ..., y_{t-Q+1}) with
 * y_t = (F_t, M_t). The regional block H_t - LambdaM M_t = LambdaF F_t + eps_t
 * is reduced to its GLS statistic
 *   Fhat_t = C^-1 LambdaF' D^-1 (H_t - LambdaM M_t),  C = LambdaF' D^-1 LambdaF,
 * which observes F_t with noise C^-1; the part of H_t orthogonal to it does
 * not involve the state and enters the likelihood as a constant
 * (loglik_adjustment). M_t is observed without noise. The observation
 * vector is o_t = (Fhat_t, M_t) and Z picks y_t out of the state.
 */
struct FavarStateSpace {
    StateSpaceSystem sys;
    Matrix observations;  // T x (S+K)
    double loglik_adjustment = 0.0;
};

FavarStateSpace build_favar_system(const FavarParams& params, const PanelData& data);

/// Latent factor path (T x S) from a state draw (T+1 rows).
Matrix factor_path(const Matrix& states, int S);

/// log p(H, M | params) with the factors and the initial state integrated out.
double integrated_loglik(const FavarParams& params, const PanelData& data);

}  // namespace favar
