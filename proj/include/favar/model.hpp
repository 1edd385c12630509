#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace favar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/**
 * Dimension constants of a FAVAR model.
 *
 * R regional series load on S latent factors and K observed aggregates;
 * the joint vector y_t = (F_t, M_t) of size S+K follows a VAR(Q).
 */
struct ModelDims {
    int R = 0;       // regional series
    int S = 1;       // latent factors
    int K = 0;       // observed aggregates
    int Q = 1;       // VAR lag order
    int T = 0;       // time periods
    int H_max = 72;  // impulse-response horizon in months

    [[nodiscard]] int n_vars() const noexcept { return S + K; }
    [[nodiscard]] int state_dim() const noexcept { return (S + K) * Q; }
    // Loading elements, frozen identification rows included.
    [[nodiscard]] int L() const noexcept { return R * (S + K); }
    // Loading elements actually sampled (rows S+1..R).
    [[nodiscard]] int L_free() const noexcept { return (R - S) * (S + K); }
    // VAR coefficients in A.
    [[nodiscard]] int J() const noexcept { return (S + K) * (S + K) * Q; }
    // Shrunk coefficients of the state equation; the proxy impact adds S+K.
    [[nodiscard]] int J_total(bool has_proxy) const noexcept {
        return J() + (has_proxy ? S + K : 0);
    }

    /// Throws ParameterError unless S >= 1, K >= 0, Q >= 1, R > S, T > Q, H_max >= 0.
    void validate() const;

    friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Transformed, gap-free panel: regional block H, aggregates M, optional proxy z.
struct PanelData {
    Matrix H;                     // T x R
    Matrix M;                     // T x K
    std::optional<Vector> z;      // length T
    std::vector<std::string> time_index;
    std::vector<std::string> regional_names;
    std::vector<std::string> aggregate_names;
    std::string proxy_name;
    int policy_index = -1;        // column of M holding the policy indicator

    [[nodiscard]] int T() const noexcept { return static_cast<int>(H.rows()); }
    [[nodiscard]] int R() const noexcept { return static_cast<int>(H.cols()); }
    [[nodiscard]] int K() const noexcept { return static_cast<int>(M.cols()); }
    [[nodiscard]] bool has_proxy() const noexcept { return z.has_value(); }

    /// Row counts agree and every value is finite; throws DataError otherwise.
    void validate() const;
};

/// One full parameter state of the FAVAR.
struct FavarParams {
    Matrix LambdaF;  // R x S, top S x S block is the identity
    Matrix LambdaM;  // R x K, first S rows are zero
    Vector sigma2;   // R measurement variances
    Matrix A;        // (S+K) x Q(S+K)
    Vector zeta;     // S+K proxy impact (zero when no proxy)
    Matrix SigmaU;   // (S+K) x (S+K)

    [[nodiscard]] int R() const noexcept { return static_cast<int>(LambdaF.rows()); }
    [[nodiscard]] int S() const noexcept { return static_cast<int>(LambdaF.cols()); }
    [[nodiscard]] int K() const noexcept { return static_cast<int>(LambdaM.cols()); }
    [[nodiscard]] int n_vars() const noexcept { return S() + K(); }
    [[nodiscard]] int Q() const noexcept {
        return n_vars() == 0 ? 0 : static_cast<int>(A.cols()) / n_vars();
    }

    /// Parameters with identification blocks set and everything else zero
    /// (sigma2 = 1, SigmaU = I).
    static FavarParams zeros(const ModelDims& dims);

    /// Shapes, frozen blocks, positivity and SPD checks. Throws ParameterError.
    void validate() const;
};

/// Local and global Normal-Gamma scales.
///
/// The local scales are the prior variances of the coefficients they govern:
/// a_j | tau2_a[j] ~ N(0, tau2_a[j]) with tau2_a[j] | xi_a ~ G(vartheta_a, vartheta_a xi_a / 2).
/// Written in standardized form, tau2 = 2 t / xi with t ~ G(vartheta, vartheta).
struct ShrinkageState {
    Vector tau2_a;        // J_total entries: vec(A) column-major, then zeta
    double xi_a = 1.0;
    Vector tau2_lambda;   // L entries: vec([LambdaF LambdaM]) column-major
    double xi_lambda = 1.0;

    static ShrinkageState ones(const ModelDims& dims, bool has_proxy);
    void validate() const;
};

struct Hyperparams {
    double vartheta_a = 0.1;
    double vartheta_lambda = 0.1;
    double c0 = 0.01;  // xi_lambda ~ G(c0, c1)
    double c1 = 0.01;
    double d0 = 0.01;  // xi_a ~ G(d0, d1)
    double d1 = 0.01;
    double e0 = 0.01;  // sigma2_r ~ IG(e0, e1)
    double e1 = 0.01;
    double v = 0.0;    // inverted-Wishart degrees of freedom
    Matrix Sigma_bar;  // inverted-Wishart scale

    void validate(int n_vars) const;
};

/// Defaults: vartheta = 0.1, c0 = c1 = d0 = d1 = e0 = e1 = 0.01,
/// v = S+K+1, Sigma_bar = 0.01 I.
Hyperparams default_hyperparams(const ModelDims& dims);

/// First-order representation of the VAR(Q).
struct CompanionForm {
    Matrix Phi;     // Q(S+K) x Q(S+K)
    Vector impact;  // Q(S+K), structural impact in the top block
    int n_vars = 0;
};

/// Companion matrix: A on top, identity blocks on the sub-diagonal.
CompanionForm build_companion(const Matrix& A, const ModelDims& dims);
CompanionForm build_companion(const Matrix& A, int n_vars, int Q);

/// Largest eigenvalue modulus of the companion matrix.
double spectral_radius(const Matrix& Phi);

// Index helpers for the flattened coefficient vectors.
inline Index var_coeff_index(int n_vars, int row, int col) noexcept {
    return static_cast<Index>(col) * n_vars + row;
}
inline Index loading_index(int R, int region, int col) noexcept {
    return static_cast<Index>(col) * R + region;
}

}  // namespace favar
