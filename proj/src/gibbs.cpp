#include "favar/gibbs.hpp"

#include "favar/error.hpp"
#include "favar/linalg.hpp"
#include "favar/state_space.hpp"
#include "parallel.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace favar {

namespace {

Vector draw_gaussian(const GaussianPosterior& post, Rng& rng) {
    Vector z = rng.normal_vector(post.mean.size());
    return post.mean + post.precision.matrixU().solve(z);
}

GaussianPosterior gaussian_from_precision(Matrix Omega, const Vector& b, const char* what) {
    GaussianPosterior post;
    post.precision.compute(linalg::symmetrize(Omega));
    if (post.precision.info() != Eigen::Success) {
        std::ostringstream err;
        err << what << ": posterior precision is not positive definite (condition number "
            << linalg::condition_number(Omega) << ")";
        throw NumericalError(err.str());
    }
    post.mean = post.precision.solve(b);
    if (!post.mean.allFinite()) {
        std::ostringstream err;
        err << what << ": posterior mean not finite (condition number " << linalg::condition_number(Omega) << ")";
        throw NumericalError(err.str());
    }
    return post;
}

Matrix stack_y(const Matrix& factors, const Matrix& M) {
    Matrix Y(factors.rows(), factors.cols() + M.cols());
    Y << factors, M;
    return Y;
}

double row_ssr(const PanelData& data, const Matrix& factors, const FavarParams& params, Index r) {
    Vector resid = data.H.col(r) - factors * params.LambdaF.row(r).transpose();
    if (data.K() > 0) resid.noalias() -= data.M * params.LambdaM.row(r).transpose();
    return resid.squaredNorm();
}

}  // namespace

void ChainConfig::validate() const {
    std::ostringstream err;
    if (n_draws < 1) err << "n_draws must be >= 1; ";
    if (n_burn < 0 || n_burn >= n_draws) err << "n_burn must satisfy 0 <= n_burn < n_draws; ";
    if (thin < 1) err << "thin must be >= 1; ";
    if (!err.str().empty()) throw ParameterError("chain config: " + err.str());
}

const char* step_name(GibbsStep step) {
    switch (step) {
        case GibbsStep::VarCoeffs: return "var_coeffs";
        case GibbsStep::Factors: return "factors";
        case GibbsStep::SigmaU: return "sigma_u";
        case GibbsStep::Loadings: return "loadings";
        case GibbsStep::MeasVar: return "meas_var";
        case GibbsStep::TauA: return "tau_a";
        case GibbsStep::XiA: return "xi_a";
        case GibbsStep::TauLambda: return "tau_lambda";
        case GibbsStep::XiLambda: return "xi_lambda";
    }
    return "unknown";
}

VarRegression build_var_regression(const Matrix& factors, const Matrix& M, const Matrix& presample, int Q) {
    if (factors.rows() != M.rows()) throw ShapeError("build_var_regression: factor and aggregate row counts differ");
    const Index T = factors.rows();
    const Index n = factors.cols() + M.cols();
    if (presample.rows() != Q || presample.cols() != n)
        throw ShapeError("build_var_regression: presample must be Q x (S+K)");

    VarRegression reg;
    reg.Y = stack_y(factors, M);
    reg.X.resize(T, n * Q);
    for (Index t = 0; t < T; ++t) {
        for (int q = 1; q <= Q; ++q) {
            // row t holds period t+1; lag q is period t+1-q
            const Index src = t - q;
            auto block = reg.X.block(t, (q - 1) * n, 1, n);
            if (src >= 0)
                block = reg.Y.row(src);
            else
                block = presample.row(-src - 1);
        }
    }
    return reg;
}

GaussianPosterior var_coeff_posterior(const Matrix& Y, const Matrix& X, const Matrix& SigmaU, const Vector& prior_var) {
    const Index n = Y.cols();
    const Index m = X.cols();
    if (X.rows() != Y.rows()) throw ShapeError("var_coeff_posterior: Y and X row counts differ");
    if (SigmaU.rows() != n || SigmaU.cols() != n) throw ShapeError("var_coeff_posterior: SigmaU has wrong size");
    if (prior_var.size() != n * m) throw ShapeError("var_coeff_posterior: prior variance length differs from n*m");

    Eigen::LLT<Matrix> sig(linalg::symmetrize(SigmaU));
    if (sig.info() != Eigen::Success) throw NumericalError("var_coeff_posterior: SigmaU not positive definite");
    const Matrix Sinv = sig.solve(Matrix::Identity(n, n));
    const Matrix XtX = X.transpose() * X;

    Matrix Omega(n * m, n * m);
    for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < n; ++k) Omega.block(i * m, k * m, m, m) = Sinv(i, k) * XtX;
    Omega.diagonal() += prior_var.cwiseInverse();

    const Matrix XtYS = X.transpose() * Y * Sinv;  // m x n
    const Vector b = Eigen::Map<const Vector>(XtYS.data(), n * m);
    return gaussian_from_precision(std::move(Omega), b, "var_coeff_posterior");
}

Vector var_prior_variances(const ShrinkageState& shrink, int n_vars, int Q, bool has_proxy) {
    const Index n = n_vars;
    const Index nq = n * Q;
    const Index m = nq + (has_proxy ? 1 : 0);
    const Index J = n * nq;
    if (shrink.tau2_a.size() != J + (has_proxy ? n : 0))
        throw ShapeError("var_prior_variances: tau2_a length differs from J_total");
    Vector v(n * m);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < nq; ++j) v[i * m + j] = shrink.tau2_a[var_coeff_index(n_vars, i, j)];
        if (has_proxy) v[i * m + nq] = shrink.tau2_a[J + i];
    }
    return v;
}

VarCoeffDraw draw_var_coeffs(const Matrix& y, const Matrix& x, const std::optional<Vector>& z, const Matrix& SigmaU,
                             const ShrinkageState& shrink, Rng& rng) {
    const Index n = y.cols();
    if (n == 0 || x.cols() % n != 0) throw ShapeError("draw_var_coeffs: regressor width is not a multiple of S+K");
    const int Q = static_cast<int>(x.cols() / n);
    const bool has_proxy = z.has_value();
    if (has_proxy && z->size() != y.rows()) throw ShapeError("draw_var_coeffs: proxy length differs from T");

    Matrix X = x;
    if (has_proxy) {
        X.conservativeResize(Eigen::NoChange, x.cols() + 1);
        X.col(x.cols()) = *z;
    }
    const Vector prior = var_prior_variances(shrink, static_cast<int>(n), Q, has_proxy);
    const GaussianPosterior post = var_coeff_posterior(y, X, SigmaU, prior);
    const Vector vecB = draw_gaussian(post, rng);
    const Eigen::Map<const Matrix> B(vecB.data(), X.cols(), n);

    VarCoeffDraw out;
    out.A = B.topRows(x.cols()).transpose();
    out.zeta = has_proxy ? Vector(B.row(x.cols()).transpose()) : Vector::Zero(n);
    return out;
}

FactorDraw draw_factors(const FavarParams& params, const PanelData& data, Rng& rng) {
    const FavarStateSpace fs = build_favar_system(params, data);
    const Matrix states = ffbs_draw(fs.sys, fs.observations, rng);
    const int n = params.n_vars();
    const int Q = params.Q();

    FactorDraw out;
    out.factors = factor_path(states, params.S());
    out.presample.resize(Q, n);
    for (int q = 0; q < Q; ++q) out.presample.row(q) = states.block(0, static_cast<Index>(q) * n, 1, n);
    return out;
}

Matrix draw_sigma_u(const Matrix& residuals, const Hyperparams& hyper, Rng& rng) {
    const Index n = hyper.Sigma_bar.rows();
    if (residuals.cols() != n) throw ShapeError("draw_sigma_u: residual width differs from Sigma_bar");
    const Matrix P = linalg::symmetrize(hyper.Sigma_bar + residuals.transpose() * residuals);
    if (!linalg::is_spd(P)) throw NumericalError("draw_sigma_u: posterior scale is not positive definite");
    return sample_inverse_wishart(hyper.v + static_cast<double>(residuals.rows()), P, rng);
}

GaussianPosterior loading_row_posterior(const Vector& h, const Matrix& X, double sigma2, const Vector& prior_var) {
    if (X.rows() != h.size() || prior_var.size() != X.cols()) throw ShapeError("loading_row_posterior: shape mismatch");
    if (!(sigma2 > 0.0)) throw ParameterError("loading_row_posterior: sigma2 must be positive");
    Matrix Omega = X.transpose() * X / sigma2;
    Omega.diagonal() += prior_var.cwiseInverse();
    const Vector b = X.transpose() * h / sigma2;
    return gaussian_from_precision(std::move(Omega), b, "loading_row_posterior");
}

LoadingDraw draw_loadings(const PanelData& data, const Matrix& factors, const FavarParams& params,
                          const ShrinkageState& shrink, const StreamKey& key) {
    const int R = params.R();
    const int S = params.S();
    const int K = params.K();
    const int n = S + K;
    if (data.R() != R || data.K() != K || factors.cols() != S || factors.rows() != data.T())
        throw ShapeError("draw_loadings: data, factors and parameters disagree");
    if (shrink.tau2_lambda.size() != static_cast<Index>(R) * n)
        throw ShapeError("draw_loadings: tau2_lambda length differs from L");

    const Matrix X = stack_y(factors, data.M);
    LoadingDraw out{params.LambdaF, params.LambdaM};
    detail::parallel_for(S, R, [&](Index r) {
        Vector prior(n);
        for (int c = 0; c < n; ++c) prior[c] = shrink.tau2_lambda[loading_index(R, static_cast<int>(r), c)];
        Rng rng = key.row_stream(r);
        const Vector draw = draw_gaussian(loading_row_posterior(data.H.col(r), X, params.sigma2[r], prior), rng);
        out.LambdaF.row(r) = draw.head(S).transpose();
        if (K > 0) out.LambdaM.row(r) = draw.tail(K).transpose();
    });
    return out;
}

InvGammaParams meas_var_posterior(double ssr, long T, const Hyperparams& hyper) {
    return {0.5 * static_cast<double>(T) + hyper.e0, 0.5 * ssr + hyper.e1};
}

Vector draw_meas_var(const PanelData& data, const Matrix& factors, const FavarParams& params, const Hyperparams& hyper,
                     const StreamKey& key) {
    const int R = params.R();
    if (data.R() != R || factors.rows() != data.T() || factors.cols() != params.S())
        throw ShapeError("draw_meas_var: data, factors and parameters disagree");
    Vector out(R);
    detail::parallel_for(0, R, [&](Index r) {
        const InvGammaParams ig = meas_var_posterior(row_ssr(data, factors, params, r), data.T(), hyper);
        Rng rng = key.row_stream(r);
        out[r] = sample_inverse_gamma(ig.alpha, ig.beta, rng);
    });
    return out;
}

Vector draw_local_scales(const Vector& coeffs, double xi, double vartheta, Rng& rng, long* floored) {
    Vector out(coeffs.size());
    for (Index j = 0; j < coeffs.size(); ++j) {
        double chi = coeffs[j] * coeffs[j];
        if (chi < kGigChiFloor) {
            chi = kGigChiFloor;
            if (floored) ++*floored;
        }
        out[j] = sample_gig({vartheta - 0.5, chi, vartheta * xi}, rng);
    }
    return out;
}

GammaParams xi_a_posterior(const Vector& tau2_a, const Hyperparams& hyper) {
    return {hyper.d0 + hyper.vartheta_a * static_cast<double>(tau2_a.size()),
            hyper.d1 + 0.5 * hyper.vartheta_a * tau2_a.sum()};
}

GammaParams xi_lambda_posterior(const Vector& tau2_lambda, int R, int S, const Hyperparams& hyper) {
    if (R <= 0 || tau2_lambda.size() % R != 0) throw ShapeError("xi_lambda_posterior: tau2_lambda length not a multiple of R");
    const Index n = tau2_lambda.size() / R;
    double sum = 0.0;
    Index count = 0;
    for (Index c = 0; c < n; ++c)
        for (int r = S; r < R; ++r) {
            sum += tau2_lambda[loading_index(R, r, static_cast<int>(c))];
            ++count;
        }
    return {hyper.c0 + hyper.vartheta_lambda * static_cast<double>(count), hyper.c1 + 0.5 * hyper.vartheta_lambda * sum};
}

double draw_xi_a(const Vector& tau2_a, const Hyperparams& hyper, Rng& rng) {
    const GammaParams g = xi_a_posterior(tau2_a, hyper);
    return sample_gamma(g.shape, g.rate, rng);
}

double draw_xi_lambda(const Vector& tau2_lambda, int R, int S, const Hyperparams& hyper, Rng& rng) {
    const GammaParams g = xi_lambda_posterior(tau2_lambda, R, S, hyper);
    return sample_gamma(g.shape, g.rate, rng);
}

Vector stack_var_coeffs(const FavarParams& params, bool has_proxy) {
    const Index J = params.A.size();
    Vector out(J + (has_proxy ? params.zeta.size() : 0));
    out.head(J) = Eigen::Map<const Vector>(params.A.data(), J);
    if (has_proxy) out.tail(params.zeta.size()) = params.zeta;
    return out;
}

Vector stack_loadings(const FavarParams& params) {
    const Index R = params.R();
    Vector out(R * params.n_vars());
    out.head(params.LambdaF.size()) = Eigen::Map<const Vector>(params.LambdaF.data(), params.LambdaF.size());
    if (params.K() > 0) out.tail(params.LambdaM.size()) = Eigen::Map<const Vector>(params.LambdaM.data(), params.LambdaM.size());
    return out;
}

PriorDraw draw_from_prior(const ModelDims& dims, bool has_proxy, const Hyperparams& hyper, Rng& rng) {
    const int n = dims.n_vars();
    PriorDraw out{FavarParams::zeros(dims), ShrinkageState::ones(dims, has_proxy)};
    ShrinkageState& sh = out.shrink;
    FavarParams& p = out.params;

    sh.xi_a = sample_gamma(hyper.d0, hyper.d1, rng);
    for (Index j = 0; j < sh.tau2_a.size(); ++j)
        sh.tau2_a[j] = sample_gamma(hyper.vartheta_a, 0.5 * hyper.vartheta_a * sh.xi_a, rng);
    Vector a(sh.tau2_a.size());
    for (Index j = 0; j < a.size(); ++j) a[j] = std::sqrt(sh.tau2_a[j]) * rng.normal();
    p.A = Eigen::Map<const Matrix>(a.data(), n, static_cast<Index>(n) * dims.Q);
    if (has_proxy) p.zeta = a.tail(n);

    sh.xi_lambda = sample_gamma(hyper.c0, hyper.c1, rng);
    for (Index l = 0; l < sh.tau2_lambda.size(); ++l)
        sh.tau2_lambda[l] = sample_gamma(hyper.vartheta_lambda, 0.5 * hyper.vartheta_lambda * sh.xi_lambda, rng);
    for (int c = 0; c < n; ++c)
        for (int r = dims.S; r < dims.R; ++r) {
            const double v = std::sqrt(sh.tau2_lambda[loading_index(dims.R, r, c)]) * rng.normal();
            if (c < dims.S)
                p.LambdaF(r, c) = v;
            else
                p.LambdaM(r, c - dims.S) = v;
        }

    for (int r = 0; r < dims.R; ++r) p.sigma2[r] = sample_inverse_gamma(hyper.e0, hyper.e1, rng);
    p.SigmaU = sample_inverse_wishart(hyper.v, hyper.Sigma_bar, rng);
    return out;
}

// ---------------------------------------------------------------------------

GibbsSampler::GibbsSampler(const PanelData& data, const ModelDims& dims, const Hyperparams& hyper,
                           const ChainConfig& config)
    : data_(data), dims_(dims), hyper_(hyper), config_(config) {
    dims_.validate();
    data_.validate();
    config_.validate();
    hyper_.validate(dims_.n_vars());
    if (data_.T() != dims_.T || data_.R() != dims_.R || data_.K() != dims_.K)
        throw ShapeError("GibbsSampler: panel dimensions differ from model dimensions");
}

SamplerState GibbsSampler::initial_state() const {
    const int R = dims_.R;
    const int S = dims_.S;
    const int K = dims_.K;
    const int n = S + K;
    const Index T = data_.T();

    SamplerState st;
    st.params = FavarParams::zeros(dims_);
    st.shrink = ShrinkageState::ones(dims_, data_.has_proxy());
    st.factors = data_.H.leftCols(S);
    st.presample = Matrix::Zero(dims_.Q, n);

    // Ridge OLS of each free row on the provisional factors.
    const Matrix X = stack_y(st.factors, data_.M);
    Matrix XtX = X.transpose() * X;
    XtX.diagonal().array() += 1e-6 * std::max(1.0, XtX.diagonal().maxCoeff());
    const Eigen::LLT<Matrix> llt(XtX);
    for (int r = S; r < R; ++r) {
        const Vector coef = llt.solve(X.transpose() * data_.H.col(r));
        st.params.LambdaF.row(r) = coef.head(S).transpose();
        if (K > 0) st.params.LambdaM.row(r) = coef.tail(K).transpose();
    }
    for (int r = 0; r < R; ++r) {
        const double var = data_.H.col(r).array().square().mean();
        const double resid = row_ssr(data_, st.factors, st.params, r) / static_cast<double>(T);
        st.params.sigma2[r] = std::max(resid, std::max(1e-3 * var, 1e-8));
    }

    const Matrix Y = stack_y(st.factors, data_.M);
    const Matrix centered = Y.rowwise() - Y.colwise().mean();
    st.params.SigmaU =
        linalg::symmetrize(centered.transpose() * centered / static_cast<double>(T)) + 1e-6 * Matrix::Identity(n, n);
    if (!linalg::is_spd(st.params.SigmaU)) st.params.SigmaU = Matrix::Identity(n, n);
    return st;
}

void GibbsSampler::step(SamplerState& state, ChainDiagnostics* diag) const {
    using Clock = std::chrono::steady_clock;
    const long iter = state.iteration + 1;
    const int R = dims_.R;
    const int S = dims_.S;
    const int n = dims_.n_vars();
    const bool proxy = data_.has_proxy();
    FavarParams& p = state.params;
    ShrinkageState& sh = state.shrink;

    auto run = [&](GibbsStep s, auto&& body) {
        const StreamKey key{config_.seed, static_cast<std::uint64_t>(iter), static_cast<std::uint64_t>(s)};
        const auto t0 = Clock::now();
        try {
            body(key);
        } catch (const FavarError& e) {
            std::ostringstream err;
            err << "iteration " << iter << ", step " << step_name(s) << ": " << e.what();
            switch (e.kind()) {
                case ErrorKind::Shape: throw ShapeError(err.str());
                case ErrorKind::Parameter: throw ParameterError(err.str());
                case ErrorKind::Data: throw DataError(err.str());
                case ErrorKind::Config: throw ConfigError(err.str());
                case ErrorKind::Numerical: throw NumericalError(err.str());
            }
            throw;
        }
        if (diag) diag->step_seconds[static_cast<int>(s)] += std::chrono::duration<double>(Clock::now() - t0).count();
    };

    if (config_.prior_only) {
        run(GibbsStep::VarCoeffs, [&](const StreamKey& key) {
            Rng rng = key.stream();
            Vector a(sh.tau2_a.size());
            for (Index j = 0; j < a.size(); ++j) a[j] = std::sqrt(sh.tau2_a[j]) * rng.normal();
            p.A = Eigen::Map<const Matrix>(a.data(), n, static_cast<Index>(n) * dims_.Q);
            if (proxy) p.zeta = a.tail(n);
        });
        run(GibbsStep::Factors, [&](const StreamKey& key) {
            // forward simulation of the state equation from s_0 ~ N(0, 10 I)
            Rng rng = key.stream();
            const Index m = dims_.state_dim();
            const CompanionForm comp = build_companion(p.A, n, dims_.Q);
            Vector s = std::sqrt(kInitStateVariance) * rng.normal_vector(m);
            for (int q = 0; q < dims_.Q; ++q) state.presample.row(q) = s.segment(static_cast<Index>(q) * n, n).transpose();
            const MvnFactor noise(p.SigmaU);
            for (Index t = 0; t < dims_.T; ++t) {
                Vector next = comp.Phi * s;
                Vector top = noise.draw(next.head(n), rng);
                if (proxy) top += p.zeta * (*data_.z)[t];
                next.head(n) = top;
                s = next;
                state.factors.row(t) = s.head(S).transpose();
            }
        });
        run(GibbsStep::SigmaU, [&](const StreamKey& key) {
            Rng rng = key.stream();
            p.SigmaU = sample_inverse_wishart(hyper_.v, hyper_.Sigma_bar, rng);
        });
        run(GibbsStep::Loadings, [&](const StreamKey& key) {
            detail::parallel_for(S, R, [&](Index r) {
                Rng rng = key.row_stream(r);
                for (int c = 0; c < n; ++c) {
                    const double v = std::sqrt(sh.tau2_lambda[loading_index(R, static_cast<int>(r), c)]) * rng.normal();
                    if (c < S)
                        p.LambdaF(r, c) = v;
                    else
                        p.LambdaM(r, c - S) = v;
                }
            });
        });
        run(GibbsStep::MeasVar, [&](const StreamKey& key) {
            detail::parallel_for(0, R, [&](Index r) {
                Rng rng = key.row_stream(r);
                p.sigma2[r] = sample_inverse_gamma(hyper_.e0, hyper_.e1, rng);
            });
        });
    } else {
        run(GibbsStep::VarCoeffs, [&](const StreamKey& key) {
            Rng rng = key.stream();
            const VarRegression reg = build_var_regression(state.factors, data_.M, state.presample, dims_.Q);
            VarCoeffDraw d = draw_var_coeffs(reg.Y, reg.X, data_.z, p.SigmaU, sh, rng);
            p.A = std::move(d.A);
            p.zeta = std::move(d.zeta);
        });
        run(GibbsStep::Factors, [&](const StreamKey& key) {
            Rng rng = key.stream();
            FactorDraw d = draw_factors(p, data_, rng);
            state.factors = std::move(d.factors);
            state.presample = std::move(d.presample);
        });
        run(GibbsStep::SigmaU, [&](const StreamKey& key) {
            Rng rng = key.stream();
            const VarRegression reg = build_var_regression(state.factors, data_.M, state.presample, dims_.Q);
            Matrix resid = reg.Y - reg.X * p.A.transpose();
            if (proxy) resid.noalias() -= (*data_.z) * p.zeta.transpose();
            p.SigmaU = draw_sigma_u(resid, hyper_, rng);
        });
        run(GibbsStep::Loadings, [&](const StreamKey& key) {
            LoadingDraw d = draw_loadings(data_, state.factors, p, sh, key);
            p.LambdaF = std::move(d.LambdaF);
            p.LambdaM = std::move(d.LambdaM);
        });
        run(GibbsStep::MeasVar, [&](const StreamKey& key) {
            p.sigma2 = draw_meas_var(data_, state.factors, p, hyper_, key);
        });
    }

    run(GibbsStep::TauA, [&](const StreamKey& key) {
        Rng rng = key.stream();
        sh.tau2_a = draw_local_scales(stack_var_coeffs(p, proxy), sh.xi_a, hyper_.vartheta_a, rng, &state.gig_chi_floored);
    });
    run(GibbsStep::XiA, [&](const StreamKey& key) {
        Rng rng = key.stream();
        sh.xi_a = draw_xi_a(sh.tau2_a, hyper_, rng);
    });
    run(GibbsStep::TauLambda, [&](const StreamKey& key) {
        Rng rng = key.stream();
        sh.tau2_lambda =
            draw_local_scales(stack_loadings(p), sh.xi_lambda, hyper_.vartheta_lambda, rng, &state.gig_chi_floored);
    });
    run(GibbsStep::XiLambda, [&](const StreamKey& key) {
        Rng rng = key.stream();
        sh.xi_lambda = draw_xi_lambda(sh.tau2_lambda, R, S, hyper_, rng);
    });

    state.iteration = iter;
    if (diag) {
        diag->iterations = iter;
        diag->gig_chi_floored = state.gig_chi_floored;
    }
}

void advance_chain(const GibbsSampler& sampler, SamplerState& state, long until_iteration, const DrawSink& sink,
                   ChainDiagnostics* diag) {
    const ChainConfig& cfg = sampler.config();
    while (state.iteration < until_iteration) {
        sampler.step(state, diag);
        if (sink && cfg.keeps(state.iteration)) sink(state);
    }
}

ChainOutput run_chain(const PanelData& data, const ModelDims& dims, const Hyperparams& hyper,
                      const ChainConfig& config) {
    const GibbsSampler sampler(data, dims, hyper, config);
    ChainOutput out;
    out.dims = dims;
    out.has_proxy = data.has_proxy();
    const auto kept = static_cast<std::size_t>(config.n_kept());
    out.draws.reserve(kept);
    out.shrinkage_draws.reserve(kept);
    if (config.store_factors) out.factor_paths.reserve(kept);

    SamplerState state = sampler.initial_state();
    advance_chain(
        sampler, state, config.n_draws,
        [&](const SamplerState& s) {
            out.draws.push_back(s.params);
            out.shrinkage_draws.push_back(s.shrink);
            if (config.store_factors) out.factor_paths.push_back(s.factors);
        },
        &out.diagnostics);
    return out;
}

}  // namespace favar
