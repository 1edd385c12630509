#include "favar/model.hpp"

#include "favar/error.hpp"
#include "favar/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace favar {

void ModelDims::validate() const {
    std::ostringstream err;
    if (S < 1) err << "S must be >= 1 (got " << S << "); ";
    if (K < 0) err << "K must be >= 0 (got " << K << "); ";
    if (Q < 1) err << "Q must be >= 1 (got " << Q << "); ";
    if (R <= S) err << "R must exceed S (R=" << R << ", S=" << S << "); ";
    if (T <= Q) err << "T must exceed Q (T=" << T << ", Q=" << Q << "); ";
    if (H_max < 0) err << "H_max must be >= 0; ";
    if (!err.str().empty()) throw ParameterError("invalid model dimensions: " + err.str());
}

void PanelData::validate() const {
    const Index t = H.rows();
    if (M.rows() != t) throw DataError("panel: M has " + std::to_string(M.rows()) + " rows, H has " + std::to_string(t));
    if (z && z->size() != t) throw DataError("panel: proxy length differs from T");
    if (static_cast<Index>(time_index.size()) != t) throw DataError("panel: time index length differs from T");
    if (!H.allFinite() || !M.allFinite() || (z && !z->allFinite())) throw DataError("panel contains non-finite values");
    if (!regional_names.empty() && static_cast<Index>(regional_names.size()) != H.cols())
        throw DataError("panel: regional name count differs from R");
    if (!aggregate_names.empty() && static_cast<Index>(aggregate_names.size()) != M.cols())
        throw DataError("panel: aggregate name count differs from K");
    if (policy_index >= M.cols()) throw DataError("panel: policy index out of range");
}

FavarParams FavarParams::zeros(const ModelDims& dims) {
    const int n = dims.n_vars();
    FavarParams p;
    p.LambdaF = Matrix::Zero(dims.R, dims.S);
    p.LambdaF.topRows(std::min(dims.S, dims.R)).setIdentity();
    p.LambdaM = Matrix::Zero(dims.R, dims.K);
    p.sigma2 = Vector::Ones(dims.R);
    p.A = Matrix::Zero(n, n * dims.Q);
    p.zeta = Vector::Zero(n);
    p.SigmaU = Matrix::Identity(n, n);
    return p;
}

void FavarParams::validate() const {
    const Index r = LambdaF.rows();
    const Index s = LambdaF.cols();
    const Index k = LambdaM.cols();
    const Index n = s + k;
    if (LambdaM.rows() != r || sigma2.size() != r)
        throw ParameterError("params: loading/variance row counts disagree");
    if (A.rows() != n || n == 0 || A.cols() % n != 0 || A.cols() == 0)
        throw ParameterError("params: A must be (S+K) x Q(S+K)");
    if (zeta.size() != n) throw ParameterError("params: zeta must have S+K entries");
    if (SigmaU.rows() != n || SigmaU.cols() != n) throw ParameterError("params: SigmaU must be (S+K) x (S+K)");
    if (r < s) throw ParameterError("params: fewer regions than factors");
    if (LambdaF.topRows(s) != Matrix::Identity(s, s))
        throw ParameterError("params: top S x S block of LambdaF must be the identity");
    if (k > 0 && !LambdaM.topRows(s).isZero(0.0))
        throw ParameterError("params: first S rows of LambdaM must be zero");
    if (!(sigma2.array() > 0.0).all()) throw ParameterError("params: sigma2 must be positive");
    if (!linalg::is_spd(SigmaU)) throw ParameterError("params: SigmaU must be symmetric positive definite");
    if (!LambdaF.allFinite() || !LambdaM.allFinite() || !A.allFinite() || !zeta.allFinite())
        throw ParameterError("params: non-finite coefficients");
}

ShrinkageState ShrinkageState::ones(const ModelDims& dims, bool has_proxy) {
    ShrinkageState s;
    s.tau2_a = Vector::Ones(dims.J_total(has_proxy));
    s.tau2_lambda = Vector::Ones(dims.L());
    return s;
}

void ShrinkageState::validate() const {
    if (!(tau2_a.array() > 0.0).all() || !(tau2_lambda.array() > 0.0).all())
        throw ParameterError("shrinkage: local scales must be positive");
    if (!(xi_a > 0.0) || !(xi_lambda > 0.0)) throw ParameterError("shrinkage: global scales must be positive");
}

void Hyperparams::validate(int n_vars) const {
    for (double x : {vartheta_a, vartheta_lambda, c0, c1, d0, d1, e0, e1, v}) {
        if (!(x > 0.0)) throw ParameterError("hyperparameters must be strictly positive");
    }
    if (Sigma_bar.rows() != n_vars || Sigma_bar.cols() != n_vars || !linalg::is_spd(Sigma_bar))
        throw ParameterError("Sigma_bar must be a symmetric positive definite (S+K) x (S+K) matrix");
}

Hyperparams default_hyperparams(const ModelDims& dims) {
    Hyperparams h;
    h.v = dims.S + dims.K + 1;
    h.Sigma_bar = 1e-2 * Matrix::Identity(dims.n_vars(), dims.n_vars());
    return h;
}

CompanionForm build_companion(const Matrix& A, int n_vars, int Q) {
    if (n_vars < 1 || Q < 1 || A.rows() != n_vars || A.cols() != static_cast<Index>(n_vars) * Q) {
        std::ostringstream err;
        err << "build_companion: A is " << A.rows() << "x" << A.cols() << ", expected " << n_vars << "x"
            << n_vars * Q;
        throw ShapeError(err.str());
    }
    const Index m = static_cast<Index>(n_vars) * Q;
    CompanionForm c;
    c.n_vars = n_vars;
    c.Phi = Matrix::Zero(m, m);
    c.Phi.topRows(n_vars) = A;
    if (Q > 1) c.Phi.bottomLeftCorner(m - n_vars, m - n_vars).setIdentity();
    c.impact = Vector::Zero(m);
    return c;
}

CompanionForm build_companion(const Matrix& A, const ModelDims& dims) {
    return build_companion(A, dims.n_vars(), dims.Q);
}

double spectral_radius(const Matrix& Phi) {
    Eigen::EigenSolver<Matrix> es(Phi, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace favar
