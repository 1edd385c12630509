#include "favar/irf.hpp"

#include "favar/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace favar {

namespace {

// Stream tag keeping rotation draws apart from sampler streams.
constexpr std::uint64_t kRotationStream = 0x5157;

// Quantile on a scratch buffer that may be reordered.
double quantile_inplace(std::vector<double>& v, double prob) {
    const std::size_t n = v.size();
    const double h = (static_cast<double>(n) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
    const double a = v[lo];
    if (lo + 1 >= n) return a;
    const double b = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
    return a + (h - static_cast<double>(lo)) * (b - a);
}

void check_probs(const std::vector<double>& probs) {
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("quantile probabilities must lie in [0, 1]");
}

}  // namespace

Matrix propagate(const CompanionForm& companion, const Vector& impact, int H_max) {
    if (H_max < 0) throw ParameterError("propagate: horizon must be >= 0");
    const Index m = companion.Phi.rows();
    const Index n = impact.size();
    if (companion.Phi.cols() != m || n == 0 || m % n != 0) throw ShapeError("propagate: impact does not fit the companion");
    Matrix out(H_max + 1, n);
    Vector s = Vector::Zero(m);
    s.head(n) = impact;
    for (int h = 0; h <= H_max; ++h) {
        out.row(h) = s.head(n).transpose();
        if (h < H_max) s = companion.Phi * s;
    }
    return out;
}

Matrix regional_irf(const Matrix& macro, const FavarParams& params) {
    const Index S = params.S();
    const Index K = params.K();
    if (macro.cols() != S + K) throw ShapeError("regional_irf: response width differs from S+K");
    Matrix out = macro.leftCols(S) * params.LambdaF.transpose();
    if (K > 0) out.noalias() += macro.rightCols(K) * params.LambdaM.transpose();
    return out;
}

Matrix cumulate(const Matrix& responses) {
    Matrix out = responses;
    for (Index h = 1; h < out.rows(); ++h) out.row(h) += out.row(h - 1);
    return out;
}

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw ParameterError("quantile: no values");
    check_probs({prob});
    return quantile_inplace(values, prob);
}

const Matrix& Bands::median() const {
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (probs[i] == 0.5) return q[i];
    throw ParameterError("bands: no median band");
}

Bands quantile_bands(const std::vector<Matrix>& draws, const std::vector<double>& probs) {
    if (draws.size() < 2) throw ParameterError("quantile_bands: at least two draws are required");
    check_probs(probs);
    const Index rows = draws.front().rows();
    const Index cols = draws.front().cols();
    for (const auto& d : draws)
        if (d.rows() != rows || d.cols() != cols) throw ShapeError("quantile_bands: draws differ in shape");

    Bands out;
    out.probs = probs;
    out.q.assign(probs.size(), Matrix(rows, cols));
#pragma omp parallel for schedule(static)
    for (Index c = 0; c < cols; ++c) {
        std::vector<double> buf(draws.size());
        for (Index r = 0; r < rows; ++r) {
            for (std::size_t k = 0; k < probs.size(); ++k) {
                for (std::size_t d = 0; d < draws.size(); ++d) buf[d] = draws[d](r, c);
                out.q[k](r, c) = quantile_inplace(buf, probs[k]);
            }
        }
    }
    return out;
}

double morans_i(const Vector& values, const Matrix& W, bool row_standardize) {
    const Index R = values.size();
    if (W.rows() != R || W.cols() != R) throw ShapeError("morans_i: weights must be R x R");
    if (!W.diagonal().isZero(0.0)) throw ParameterError("morans_i: weight matrix must have a zero diagonal");
    Matrix w = W;
    if (row_standardize) {
        for (Index i = 0; i < R; ++i) {
            const double s = w.row(i).sum();
            if (s != 0.0) w.row(i) /= s;
        }
    }
    const double total = w.sum();
    if (total == 0.0) throw ParameterError("morans_i: weights sum to zero");
    const Vector dev = values.array() - values.mean();
    const double denom = dev.squaredNorm();
    if (!(denom > 0.0)) throw ParameterError("morans_i: undefined for constant values");
    return static_cast<double>(R) / total * dev.dot(w * dev) / denom;
}

IrfSet compute_irfs(const std::vector<FavarParams>& draws, const IrfOptions& opts) {
    if (draws.empty()) throw ParameterError("compute_irfs: no draws");
    const int S = draws.front().S();
    const int R = draws.front().R();
    const int n = draws.front().n_vars();
    if (opts.policy_index < 0 || opts.policy_index >= n) throw ParameterError("compute_irfs: policy index outside the VAR");
    if (opts.scheme == Identification::Sign) opts.sign.validate(n);
    check_probs(opts.probs);

    const auto N = static_cast<Index>(draws.size());
    std::vector<std::optional<Matrix>> macro(N);
    std::vector<int> tries(N, 0);
    detail::parallel_for(0, N, [&](Index d) {
        const FavarParams& p = draws[d];
        std::optional<StructuralImpact> impact;
        if (opts.scheme == Identification::Proxy) {
            if (p.zeta[opts.policy_index] != 0.0) impact = proxy_impact(p, opts.policy_index);
        } else {
            Rng rng = Rng::substream(opts.seed, {kRotationStream, static_cast<std::uint64_t>(d)});
            SignSearchResult res = sign_restricted_impact(p.SigmaU, opts.sign, opts.policy_index, rng);
            tries[d] = res.tries;
            impact = std::move(res.impact);
        }
        if (impact) macro[d] = propagate(build_companion(p.A, n, p.Q()), impact->impact, opts.H_max);
    });

    IrfSet out;
    out.n_draws = N;
    std::vector<Matrix> used;
    std::vector<Index> used_idx;
    for (Index d = 0; d < N; ++d) {
        out.rotations_tried += tries[d];
        if (macro[d]) {
            used.push_back(std::move(*macro[d]));
            used_idx.push_back(d);
        }
    }
    out.n_used = static_cast<long>(used.size());
    out.n_excluded = out.n_draws - out.n_used;
    if (used.size() < 2) {
        std::ostringstream err;
        err << "compute_irfs: only " << used.size() << " of " << N << " draws identified a shock";
        throw NumericalError(err.str());
    }

    out.macro = quantile_bands(used, opts.probs);
    std::vector<Matrix> fac(used.size());
    std::vector<Matrix> cum(used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
        fac[i] = used[i].leftCols(S);
        cum[i] = cumulate(used[i]);
    }
    out.factor = quantile_bands(fac, opts.probs);
    out.macro_cumulative = quantile_bands(cum, opts.probs);

    // Regions one at a time: the per-draw regional panel would not fit in memory
    // at full scale.
    const Index H1 = opts.H_max + 1;
    const std::size_t P = opts.probs.size();
    out.regional.probs = opts.probs;
    out.regional.q.assign(P, Matrix(H1, R));
    out.regional_cumulative.probs = opts.probs;
    out.regional_cumulative.q.assign(P, Matrix(H1, R));
    out.cumulative_regional.resize(static_cast<Index>(P), R);
    detail::parallel_for(0, R, [&](Index r) {
        const auto U = used.size();
        Matrix resp(H1, static_cast<Index>(U));
        for (std::size_t i = 0; i < U; ++i) {
            const FavarParams& p = draws[used_idx[i]];
            Vector v = used[i].leftCols(S) * p.LambdaF.row(r).transpose();
            if (p.K() > 0) v.noalias() += used[i].rightCols(p.K()) * p.LambdaM.row(r).transpose();
            resp.col(static_cast<Index>(i)) = v;
        }
        Matrix cresp = resp;
        for (Index h = 1; h < H1; ++h) cresp.row(h) += cresp.row(h - 1);
        std::vector<double> buf(U);
        for (Index h = 0; h < H1; ++h) {
            for (std::size_t k = 0; k < P; ++k) {
                for (std::size_t i = 0; i < U; ++i) buf[i] = resp(h, static_cast<Index>(i));
                out.regional.q[k](h, r) = quantile_inplace(buf, opts.probs[k]);
                for (std::size_t i = 0; i < U; ++i) buf[i] = cresp(h, static_cast<Index>(i));
                out.regional_cumulative.q[k](h, r) = quantile_inplace(buf, opts.probs[k]);
            }
        }
        for (std::size_t k = 0; k < P; ++k)
            out.cumulative_regional(static_cast<Index>(k), r) = out.regional_cumulative.q[k](H1 - 1, r);
    });
    return out;
}

}  // namespace favar
