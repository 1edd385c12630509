#include "favar/identification.hpp"

#include "favar/error.hpp"
#include "favar/linalg.hpp"

#include <Eigen/QR>

#include <cmath>
#include <sstream>

namespace favar {

void SignRestrictionSpec::validate(int n_vars) const {
    if (restrictions.empty()) throw ConfigError("sign restrictions: at least one restriction is required");
    if (max_tries < 1) throw ConfigError("sign restrictions: max_tries must be >= 1");
    for (const auto& r : restrictions) {
        if (r.variable < 0 || r.variable >= n_vars) {
            std::ostringstream err;
            err << "sign restrictions: variable index " << r.variable << " outside 0.." << n_vars - 1;
            throw ConfigError(err.str());
        }
        if (r.sign != 1 && r.sign != -1) throw ConfigError("sign restrictions: sign must be +1 or -1");
    }
}

std::vector<std::pair<std::string, int>> default_sign_restrictions() {
    return {{"INDPRO", 1}, {"HOUST", 1}, {"CPIAUCSL", 1}, {"T10YFF", 1}, {"GS1", -1}};
}

SignRestrictionSpec resolve_sign_spec(const std::vector<std::pair<std::string, int>>& named,
                                      const std::vector<std::string>& var_names, int max_tries) {
    SignRestrictionSpec spec;
    spec.max_tries = max_tries;
    for (const auto& [name, sign] : named) {
        int idx = -1;
        for (std::size_t i = 0; i < var_names.size(); ++i)
            if (var_names[i] == name) idx = static_cast<int>(i);
        if (idx < 0) throw ConfigError("sign restrictions: unknown variable '" + name + "'");
        spec.restrictions.push_back({idx, sign});
    }
    spec.validate(static_cast<int>(var_names.size()));
    return spec;
}

StructuralImpact proxy_impact(const FavarParams& params, int policy_index) {
    if (policy_index < 0 || policy_index >= params.zeta.size())
        throw ParameterError("proxy_impact: policy index outside the VAR");
    const double pivot = params.zeta[policy_index];
    if (pivot == 0.0 || !std::isfinite(pivot))
        throw NumericalError("proxy_impact: degenerate instrument, zeta[policy] = 0");
    StructuralImpact out;
    out.source = ShockSource::Proxy;
    out.normalization_scale = kPolicyImpact / pivot;
    out.unscaled = params.zeta;
    out.impact = params.zeta * out.normalization_scale;
    out.impact[policy_index] = kPolicyImpact;
    return out;
}

Matrix draw_rotation(int dim, Rng& rng) {
    if (dim < 1) throw ParameterError("draw_rotation: dimension must be >= 1");
    const Matrix G = rng.normal_matrix(dim, dim);
    const Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j)
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Q;
}

bool satisfies_restrictions(const Vector& c, const SignRestrictionSpec& spec) {
    for (const auto& r : spec.restrictions)
        if (!(r.sign * c[r.variable] > 0.0)) return false;
    return true;
}

bool is_admissible(const Vector& c, const SignRestrictionSpec& spec, int policy_index) {
    return c[policy_index] < 0.0 && satisfies_restrictions(c, spec);
}

SignSearchResult sign_restricted_impact(const Matrix& SigmaU, const SignRestrictionSpec& spec, int policy_index,
                                        Rng& rng) {
    const int n = static_cast<int>(SigmaU.rows());
    spec.validate(n);
    if (policy_index < 0 || policy_index >= n) throw ParameterError("sign_restricted_impact: policy index outside the VAR");
    const Eigen::LLT<Matrix> llt(linalg::symmetrize(SigmaU));
    if (llt.info() != Eigen::Success) throw NumericalError("sign_restricted_impact: Cholesky of SigmaU failed");
    const Matrix P = llt.matrixL();

    SignSearchResult res;
    for (int t = 0; t < spec.max_tries; ++t) {
        ++res.tries;
        const Matrix Qt = draw_rotation(n, rng);
        const Matrix C = P * Qt;
        for (int j = 0; j < n; ++j) {
            for (const double sgn : {1.0, -1.0}) {
                const Vector c = sgn * C.col(j);
                if (!is_admissible(c, spec, policy_index)) continue;
                StructuralImpact out;
                out.source = ShockSource::Sign;
                out.unscaled = c;
                out.rotation = sgn * Qt.col(j);
                out.normalization_scale = kPolicyImpact / c[policy_index];
                out.impact = c * out.normalization_scale;
                out.impact[policy_index] = kPolicyImpact;
                res.impact = std::move(out);
                return res;
            }
        }
    }
    return res;
}

}  // namespace favar
