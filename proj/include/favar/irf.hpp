#pragma once

#include "favar/identification.hpp"
#include "favar/model.hpp"

#include <cstdint>
#include <vector>

namespace favar {

/// Responses of y_t for horizons 0..H_max; row h is the top block of Phi^h s_0
/// with s_0 = (impact, 0, ..., 0).
Matrix propagate(const CompanionForm& companion, const Vector& impact, int H_max);

/// Region responses LambdaF f_h + LambdaM m_h; (H_max+1) x R.
Matrix regional_irf(const Matrix& macro, const FavarParams& params);

/// Prefix sums down the horizon axis.
Matrix cumulate(const Matrix& responses);

/// Linear interpolation between order statistics: h = (n-1) p.
double quantile(std::vector<double> values, double prob);

inline const std::vector<double> kDefaultBandProbs = {0.16, 0.5, 0.84};

struct Bands {
    std::vector<double> probs;
    std::vector<Matrix> q;  // one matrix per probability, same shape as each draw

    [[nodiscard]] const Matrix& median() const;
};

/// Pointwise quantiles over equally shaped per-draw matrices (at least two).
Bands quantile_bands(const std::vector<Matrix>& draws, const std::vector<double>& probs = kDefaultBandProbs);

/// Moran's I of `values` under spatial weights W (zero diagonal). Rows of W are
/// divided by their sums first when row_standardize is set.
double morans_i(const Vector& values, const Matrix& W, bool row_standardize = false);

enum class Identification { Proxy, Sign };

struct IrfOptions {
    Identification scheme = Identification::Proxy;
    SignRestrictionSpec sign;   // used by the sign scheme
    int policy_index = 0;       // position of the policy indicator in y_t
    int H_max = 72;
    std::uint64_t seed = 1;     // rotation draws
    std::vector<double> probs = kDefaultBandProbs;
};

struct IrfSet {
    Bands macro;                 // (H_max+1) x (S+K)
    Bands factor;                // (H_max+1) x S
    Bands regional;              // (H_max+1) x R
    Bands macro_cumulative;
    Bands regional_cumulative;
    Matrix cumulative_regional;  // probs x R, cumulated response at H_max

    long n_draws = 0;            // posterior draws offered
    long n_used = 0;             // draws that produced an identified shock
    long n_excluded = 0;
    long rotations_tried = 0;    // sign scheme only
    [[nodiscard]] double acceptance_rate() const noexcept {
        return rotations_tried > 0 ? static_cast<double>(n_used) / static_cast<double>(rotations_tried) : 0.0;
    }
};

/// Identification, propagation and bands over a set of posterior draws.
/// Draws without an identified shock (degenerate proxy, exhausted rotations)
/// are excluded and counted.
IrfSet compute_irfs(const std::vector<FavarParams>& draws, const IrfOptions& opts);

}  // namespace favar
