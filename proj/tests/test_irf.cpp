#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "favar/data_io.hpp"
#include "favar/error.hpp"
#include "favar/irf.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace favar;

namespace {

Matrix stable_A(int n, int Q, Rng& rng) {
    Matrix A = 0.3 * rng.normal_matrix(n, n * Q);
    for (int k = 0; k < 50; ++k) {
        const double rho = spectral_radius(build_companion(A, n, Q).Phi);
        if (rho < 0.95) break;
        A *= 0.9 / rho;
    }
    return A;
}

std::vector<FavarParams> synthetic_draws(int count, std::uint64_t seed, SynthResult* truth = nullptr) {
    SynthConfig cfg;
    cfg.dims = ModelDims{15, 1, 5, 2, 100, 24};
    Rng rng(seed);
    const SynthResult s = generate_synthetic(cfg, rng);
    if (truth) *truth = s;
    std::vector<FavarParams> out;
    for (int i = 0; i < count; ++i) {
        FavarParams p = s.truth;
        p.A += 0.01 * rng.normal_matrix(p.A.rows(), p.A.cols());
        p.zeta += 0.02 * rng.normal_vector(p.zeta.size());
        p.LambdaF.bottomRows(14) += 0.05 * rng.normal_matrix(14, 1);
        out.push_back(p);
    }
    return out;
}

}  // namespace

TEST_CASE("geometric response of a scalar AR(1)") {
    Matrix A(1, 1);
    A << 0.5;
    Vector imp(1);
    imp << 1.0;
    const Matrix r = propagate(build_companion(A, 1, 1), imp, 3);
    CHECK(r(0, 0) == 1.0);
    CHECK(r(1, 0) == 0.5);
    CHECK(r(2, 0) == 0.25);
    CHECK(r(3, 0) == 0.125);
    A << 0.0;
    const Matrix z = propagate(build_companion(A, 1, 1), imp, 5);
    CHECK(z.bottomRows(5).isZero(0.0));
    CHECK_THROWS_AS(propagate(build_companion(A, 1, 1), imp, -1), ParameterError);
}

TEST_CASE("recursion equals explicit matrix powers") {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix A = stable_A(3, 2, rng);
        const CompanionForm c = build_companion(A, 3, 2);
        const Vector imp = rng.normal_vector(3);
        const Matrix r = propagate(c, imp, 40);
        Vector s0 = Vector::Zero(6);
        s0.head(3) = imp;
        Matrix P = Matrix::Identity(6, 6);
        double err = 0.0;
        for (int h = 0; h <= 40; ++h) {
            err = std::max(err, (r.row(h).transpose() - (P * s0).head(3)).cwiseAbs().maxCoeff());
            P = P * c.Phi;
        }
        CHECK(err < 1e-12);
    }
}

TEST_CASE("regional responses") {
    ModelDims d{5, 1, 2, 1, 20, 10};
    FavarParams p = FavarParams::zeros(d);
    Rng rng(2);
    p.LambdaF.bottomRows(4) = rng.normal_matrix(4, 1);
    p.LambdaM.bottomRows(3) = rng.normal_matrix(3, 2);  // row 1 stays zero
    p.LambdaF(1, 0) = 0.0;
    const Matrix macro = rng.normal_matrix(11, 3);
    const Matrix reg = regional_irf(macro, p);
    CHECK(reg.col(0) == macro.col(0));
    CHECK(reg.col(1).isZero(0.0));
    double err = 0.0;
    for (int h = 0; h <= 10; ++h)
        for (int r = 0; r < 5; ++r) {
            double v = 0.0;
            for (int k = 0; k < 1; ++k) v += p.LambdaF(r, k) * macro(h, k);
            for (int k = 0; k < 2; ++k) v += p.LambdaM(r, k) * macro(h, 1 + k);
            err = std::max(err, std::abs(v - reg(h, r)));
        }
    CHECK(err < 1e-12);
    CHECK_THROWS_AS(regional_irf(macro.leftCols(2), p), ShapeError);
}

TEST_CASE("cumulation") {
    Matrix r(3, 1);
    r << 1.0, 0.5, 0.25;
    const Matrix c = cumulate(r);
    CHECK(c(0, 0) == 1.0);
    CHECK(c(1, 0) == 1.5);
    CHECK(c(2, 0) == 1.75);
    CHECK(cumulate(Matrix::Zero(4, 2)).isZero(0.0));
    Rng rng(3);
    const Matrix x = rng.normal_matrix(73, 4);
    const Matrix cx = cumulate(x);
    Matrix diff = cx;
    for (Index h = 1; h < cx.rows(); ++h) diff.row(h) = cx.row(h) - cx.row(h - 1);
    CHECK((diff - x).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("quantiles") {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    std::shuffle(v.begin(), v.end(), std::mt19937_64(4));
    CHECK(quantile(v, 0.5) == 50.5);
    CHECK(quantile(v, 0.0) == 1.0);
    CHECK(quantile(v, 1.0) == 100.0);

    const std::vector<Matrix> same(10, Matrix::Constant(3, 2, 1.7));
    const Bands b = quantile_bands(same);
    CHECK(b.q[0] == b.q[2]);
    CHECK(b.median() == same[0]);

    Rng rng(5);
    std::vector<Matrix> draws;
    for (int i = 0; i < 257; ++i) draws.push_back(rng.normal_matrix(4, 3));
    const Bands bands = quantile_bands(draws, {0.05, 0.16, 0.5, 0.84, 0.95});
    double err = 0.0;
    for (std::size_t k = 0; k < bands.probs.size(); ++k)
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 3; ++j) {
                std::vector<double> cell;
                for (const auto& d : draws) cell.push_back(d(i, j));
                err = std::max(err, std::abs(bands.q[k](i, j) - oracle::sorted_quantile(cell, bands.probs[k])));
            }
    CHECK(err < 1e-12);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 3; ++j) {
            CHECK(bands.q[1](i, j) <= bands.q[2](i, j));
            CHECK(bands.q[2](i, j) <= bands.q[3](i, j));
        }
    CHECK_THROWS_AS(quantile_bands({draws[0]}), ParameterError);
    CHECK_THROWS_AS(quantile({}, 0.5), ParameterError);
}

TEST_CASE("Moran's I") {
    Matrix ring = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
        ring(i, (i + 1) % 4) = 1.0;
        ring(i, (i + 3) % 4) = 1.0;
    }
    Vector alt(4);
    alt << 1, -1, 1, -1;
    CHECK(morans_i(alt, ring) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(morans_i(alt, ring, true) == doctest::Approx(-1.0).epsilon(1e-14));

    Matrix cliques = Matrix::Zero(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i != j && i / 3 == j / 3) cliques(i, j) = 1.0;
    Vector block(6);
    block << 2, 2, 2, -1, -1, -1;
    CHECK(morans_i(block, cliques) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(morans_i(Vector::Constant(4, 3.0), ring), ParameterError);

    // permutation null: E[I] = -1/(R-1)
    const int R = 20;
    Matrix W = Matrix::Zero(R, R);
    for (int i = 0; i < R; ++i) {
        W(i, (i + 1) % R) = 1.0;
        W(i, (i + R - 1) % R) = 1.0;
        W(i, (i + 2) % R) = 0.5;
        W(i, (i + R - 2) % R) = 0.5;
    }
    Rng rng(6);
    const Vector base = rng.normal_vector(R);
    std::vector<int> perm(R);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 eng(7);
    std::vector<double> stats;
    for (int k = 0; k < 1000; ++k) {
        std::shuffle(perm.begin(), perm.end(), eng);
        Vector v(R);
        for (int i = 0; i < R; ++i) v[i] = base[perm[i]];
        stats.push_back(morans_i(v, W));
    }
    const auto m = oracle::sample_moments(stats);
    CHECK(m.var > 0.0);
    CHECK(std::abs(m.mean + 1.0 / (R - 1)) < 4.0 * m.se_mean);
}

TEST_CASE("proxy IRFs: normalization, bands and regional consistency") {
    const std::vector<FavarParams> draws = synthetic_draws(60, 8);
    IrfOptions opts;
    opts.policy_index = 5;
    opts.H_max = 24;
    const IrfSet set = compute_irfs(draws, opts);
    CHECK(set.n_used == 60);
    CHECK(set.n_excluded == 0);
    CHECK(set.macro.median()(0, 5) == -0.25);
    for (std::size_t k = 0; k < 3; ++k) CHECK(set.macro.q[k](0, 5) == -0.25);
    CHECK(set.factor.median() == set.macro.median().leftCols(1));
    CHECK(set.cumulative_regional.cols() == 15);

    std::vector<Matrix> reg, cum;
    for (const auto& p : draws) {
        const Matrix m = propagate(build_companion(p.A, 6, 2), proxy_impact(p, 5).impact, 24);
        reg.push_back(regional_irf(m, p));
        cum.push_back(cumulate(reg.back()));
    }
    const Bands rb = quantile_bands(reg);
    const Bands cb = quantile_bands(cum);
    double err = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        err = std::max(err, (rb.q[k] - set.regional.q[k]).cwiseAbs().maxCoeff());
        err = std::max(err, (cb.q[k] - set.regional_cumulative.q[k]).cwiseAbs().maxCoeff());
        err = std::max(err, (cb.q[k].row(24) - set.cumulative_regional.row(static_cast<Index>(k))).cwiseAbs().maxCoeff());
    }
    CHECK(err < 1e-12);
    for (Index h = 0; h <= 24; ++h)
        for (Index r = 0; r < 15; ++r) {
            CHECK(set.regional.q[0](h, r) <= set.regional.q[1](h, r));
            CHECK(set.regional.q[1](h, r) <= set.regional.q[2](h, r));
        }
}

TEST_CASE("relative responses are invariant to the scale of zeta") {
    std::vector<FavarParams> draws = synthetic_draws(30, 9);
    IrfOptions opts;
    opts.policy_index = 5;
    opts.H_max = 12;
    const IrfSet a = compute_irfs(draws, opts);
    for (auto& p : draws) p.zeta *= 2.0;
    const IrfSet b = compute_irfs(draws, opts);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK((a.macro.q[k] - b.macro.q[k]).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a.regional.q[k] - b.regional.q[k]).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a.cumulative_regional - b.cumulative_regional).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("degenerate instruments are excluded and counted") {
    std::vector<FavarParams> draws = synthetic_draws(10, 10);
    draws[3].zeta[5] = 0.0;
    draws[7].zeta[5] = 0.0;
    IrfOptions opts;
    opts.policy_index = 5;
    opts.H_max = 6;
    const IrfSet set = compute_irfs(draws, opts);
    CHECK(set.n_used == 8);
    CHECK(set.n_excluded == 2);
}

TEST_CASE("sign-identified IRFs") {
    SynthResult truth;
    const std::vector<FavarParams> draws = synthetic_draws(40, 11, &truth);
    std::vector<std::string> names{"F1"};
    for (const auto& a : truth.data.aggregate_names) names.push_back(a);
    IrfOptions opts;
    opts.scheme = Identification::Sign;
    opts.sign = resolve_sign_spec(default_sign_restrictions(), names, 2000);
    opts.policy_index = 5;
    opts.H_max = 12;
    opts.seed = 3;
    const IrfSet set = compute_irfs(draws, opts);
    CHECK(set.n_used + set.n_excluded == 40);
    CHECK(set.n_used >= 2);
    CHECK(set.rotations_tried >= set.n_used);
    CHECK(set.acceptance_rate() > 0.0);
    CHECK(set.acceptance_rate() <= 1.0);
    for (std::size_t k = 0; k < 3; ++k) CHECK(set.macro.q[k](0, 5) == -0.25);
    // restrictions hold on impact for every band
    for (const auto& r : opts.sign.restrictions)
        for (std::size_t k = 0; k < 3; ++k) CHECK(r.sign * set.macro.q[k](0, r.variable) > 0.0);
    const IrfSet again = compute_irfs(draws, opts);
    CHECK(again.macro.median() == set.macro.median());
    CHECK(again.rotations_tried == set.rotations_tried);
}

TEST_CASE("responses decay for a stable system") {
    SynthConfig cfg;
    cfg.dims = ModelDims{30, 1, 2, 2, 300, 200};
    Rng rng(12);
    const SynthResult s = generate_synthetic(cfg, rng);
    const CompanionForm c = build_companion(s.truth.A, 3, 2);
    CHECK(spectral_radius(c.Phi) < 1.0);
    const Vector imp = proxy_impact(s.truth, s.data.policy_index + 1).impact;
    const Matrix r = propagate(c, imp, 200);
    CHECK(r.row(200).cwiseAbs().maxCoeff() < 1e-3 * imp.norm());
}
