#pragma once

#include "favar/gibbs.hpp"
#include "favar/model.hpp"

#include <vector>

namespace favar {

struct DicResult {
    double d_bar = 0.0;  // mean deviance over draws
    double d_hat = 0.0;  // deviance at the posterior-mean parameters
    double p_d = 0.0;    // d_bar - d_hat
    double dic = 0.0;    // d_bar + p_d
    long n_draws_used = 0;
};

/// Assembles the criterion from per-draw deviances and the plug-in deviance.
DicResult dic_from_deviances(const std::vector<double>& deviances, double d_hat);

/// Elementwise posterior mean; SigmaU is projected back to SPD (eigenvalue floor 1e-10).
FavarParams posterior_mean(const std::vector<FavarParams>& draws);

/// Deviance -2 log p(H, M | params) with factors integrated out by the Kalman filter.
double deviance(const FavarParams& params, const PanelData& data);

/// Requires at least `min_draws` stored draws.
DicResult compute_dic(const ChainOutput& chain, const PanelData& data, long min_draws = 100);

}  // namespace favar
