#pragma once

#include "favar/model.hpp"
#include "favar/random.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace favar {

struct ChainConfig {
    long n_draws = 20000;
    long n_burn = 10000;
    long thin = 1;
    std::uint64_t seed = 1;
    bool store_factors = true;
    // Skip every data-conditioning step and sample the prior instead.
    bool prior_only = false;

    void validate() const;
    [[nodiscard]] long n_kept() const noexcept { return (n_draws - n_burn) / thin; }
    [[nodiscard]] bool keeps(long iteration) const noexcept {
        return iteration > n_burn && (iteration - n_burn) % thin == 0;
    }
};

enum class GibbsStep : int {
    VarCoeffs = 0,  // (i)
    Factors,        // (ii)
    SigmaU,         // (iii)
    Loadings,       // (iv)
    MeasVar,        // (v)
    TauA,           // (vi)
    XiA,            // (vii)
    TauLambda,      // (viii)
    XiLambda,       // (ix)
};
inline constexpr int kGibbsSteps = 9;
const char* step_name(GibbsStep step);

struct ChainDiagnostics {
    long iterations = 0;
    long gig_chi_floored = 0;  // GIG draws whose chi fell below the floor
    std::array<double, kGibbsSteps> step_seconds{};
};

/// Everything the sampler carries from one sweep to the next.
struct SamplerState {
    long iteration = 0;      // completed sweeps
    FavarParams params;
    ShrinkageState shrink;
    Matrix factors;          // T x S
    Matrix presample;        // Q x (S+K); row q holds y_{-q}
    long gig_chi_floored = 0;
};

struct ChainOutput {
    ModelDims dims;
    bool has_proxy = false;
    std::vector<FavarParams> draws;
    std::vector<Matrix> factor_paths;
    std::vector<ShrinkageState> shrinkage_draws;
    ChainDiagnostics diagnostics;
};

// ---------------------------------------------------------------------------
// Full conditionals. Each is usable on its own.

/// Stacked VAR regression: Y is T x (S+K), X holds (y_{t-1}, ..., y_{t-Q}).
struct VarRegression {
    Matrix Y;
    Matrix X;
};
VarRegression build_var_regression(const Matrix& factors, const Matrix& M, const Matrix& presample, int Q);

struct GaussianPosterior {
    Vector mean;
    Eigen::LLT<Matrix> precision;
};

/// Posterior of vec(B), B = [A zeta]' (regressors x equations, column-major),
/// with independent prior variances per coefficient.
GaussianPosterior var_coeff_posterior(const Matrix& Y, const Matrix& X, const Matrix& SigmaU, const Vector& prior_var);

/// Prior variances of vec(B) laid out from the shrinkage state.
Vector var_prior_variances(const ShrinkageState& shrink, int n_vars, int Q, bool has_proxy);

struct VarCoeffDraw {
    Matrix A;
    Vector zeta;
};

/// Step (i): joint conjugate draw of (A, zeta). `x` excludes the proxy.
VarCoeffDraw draw_var_coeffs(const Matrix& y, const Matrix& x, const std::optional<Vector>& z, const Matrix& SigmaU,
                             const ShrinkageState& shrink, Rng& rng);

struct FactorDraw {
    Matrix factors;    // T x S
    Matrix presample;  // Q x (S+K)
};

/// Step (ii): forward filtering backward sampling under the current parameters.
FactorDraw draw_factors(const FavarParams& params, const PanelData& data, Rng& rng);

/// Step (iii): IW(v + T, Sigma_bar + sum_t u_t u_t').
Matrix draw_sigma_u(const Matrix& residuals, const Hyperparams& hyper, Rng& rng);

/// Conjugate posterior of one loading row.
GaussianPosterior loading_row_posterior(const Vector& h, const Matrix& X, double sigma2, const Vector& prior_var);

/// Substream coordinates; row-level draws use (master, iteration, step, row).
struct StreamKey {
    std::uint64_t master = 0;
    std::uint64_t iteration = 0;
    std::uint64_t step = 0;

    [[nodiscard]] Rng stream() const { return Rng::substream(master, {iteration, step}); }
    [[nodiscard]] Rng row_stream(Index row) const {
        return Rng::substream(master, {iteration, step, static_cast<std::uint64_t>(row) + 1});
    }
};

struct LoadingDraw {
    Matrix LambdaF;
    Matrix LambdaM;
};

/// Step (iv): rows S+1..R regressed on (F_t, M_t); rows 1..S are copied unchanged.
LoadingDraw draw_loadings(const PanelData& data, const Matrix& factors, const FavarParams& params,
                          const ShrinkageState& shrink, const StreamKey& key);

struct InvGammaParams {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Shape T/2 + e0 and scale SSR/2 + e1 of the sigma2_r full conditional.
InvGammaParams meas_var_posterior(double ssr, long T, const Hyperparams& hyper);

/// Step (v): all R measurement variances.
Vector draw_meas_var(const PanelData& data, const Matrix& factors, const FavarParams& params, const Hyperparams& hyper,
                     const StreamKey& key);

/// Steps (vi) and (viii): tau2_j ~ GIG(vartheta - 1/2, coeff_j^2, vartheta xi).
/// `floored` counts coefficients whose squared value fell below the chi floor.
Vector draw_local_scales(const Vector& coeffs, double xi, double vartheta, Rng& rng, long* floored = nullptr);

struct GammaParams {
    double shape = 0.0;
    double rate = 0.0;
};

/// Step (vii): xi_a ~ G(d0 + vartheta_a J, d1 + vartheta_a / 2 sum tau2_a).
GammaParams xi_a_posterior(const Vector& tau2_a, const Hyperparams& hyper);
/// Step (ix): xi_lambda ~ G(c0 + vartheta_lambda L_free, c1 + vartheta_lambda / 2 sum_free tau2_lambda).
GammaParams xi_lambda_posterior(const Vector& tau2_lambda, int R, int S, const Hyperparams& hyper);

double draw_xi_a(const Vector& tau2_a, const Hyperparams& hyper, Rng& rng);
double draw_xi_lambda(const Vector& tau2_lambda, int R, int S, const Hyperparams& hyper, Rng& rng);

/// vec(A) followed by zeta (when present); the layout of tau2_a.
Vector stack_var_coeffs(const FavarParams& params, bool has_proxy);
/// vec([LambdaF LambdaM]); the layout of tau2_lambda.
Vector stack_loadings(const FavarParams& params);

// ---------------------------------------------------------------------------

/// Draw (params, shrinkage) from the prior.
struct PriorDraw {
    FavarParams params;
    ShrinkageState shrink;
};
PriorDraw draw_from_prior(const ModelDims& dims, bool has_proxy, const Hyperparams& hyper, Rng& rng);

class GibbsSampler {
public:
    GibbsSampler(const PanelData& data, const ModelDims& dims, const Hyperparams& hyper, const ChainConfig& config);

    [[nodiscard]] SamplerState initial_state() const;

    /// One sweep through steps (i)-(ix) in order.
    void step(SamplerState& state, ChainDiagnostics* diag = nullptr) const;

    [[nodiscard]] const ModelDims& dims() const noexcept { return dims_; }
    [[nodiscard]] const ChainConfig& config() const noexcept { return config_; }
    [[nodiscard]] const Hyperparams& hyper() const noexcept { return hyper_; }
    [[nodiscard]] const PanelData& data() const noexcept { return data_; }

private:
    PanelData data_;
    ModelDims dims_;
    Hyperparams hyper_;
    ChainConfig config_;
};

/// Called with each kept draw.
using DrawSink = std::function<void(const SamplerState&)>;

/// Runs the sampler from `state` until `until_iteration` sweeps are complete.
void advance_chain(const GibbsSampler& sampler, SamplerState& state, long until_iteration, const DrawSink& sink,
                   ChainDiagnostics* diag = nullptr);

ChainOutput run_chain(const PanelData& data, const ModelDims& dims, const Hyperparams& hyper,
                      const ChainConfig& config);

}  // namespace favar
