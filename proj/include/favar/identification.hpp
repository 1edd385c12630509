#pragma once

#include "favar/model.hpp"
#include "favar/random.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace favar {

struct SignRestriction {
    int variable = 0;  // position in y_t = (F_t, M_t)
    int sign = 1;      // +1 or -1, imposed on impact
};

struct SignRestrictionSpec {
    std::vector<SignRestriction> restrictions;
    int max_tries = 1000;  // rotations tried per posterior draw

    void validate(int n_vars) const;
};

/// Named restrictions of the default monetary-policy scheme: industrial
/// production, housing starts, CPI and the term spread rise on impact while
/// the one-year rate falls.
std::vector<std::pair<std::string, int>> default_sign_restrictions();

/// Resolves named restrictions against the VAR variable names (factors first).
SignRestrictionSpec resolve_sign_spec(const std::vector<std::pair<std::string, int>>& named,
                                      const std::vector<std::string>& var_names, int max_tries = 1000);

enum class ShockSource { Proxy, Sign };

/// Policy entry of the normalized impact.
inline constexpr double kPolicyImpact = -0.25;

struct StructuralImpact {
    Vector impact;                   // normalized: impact[policy] = -0.25
    ShockSource source = ShockSource::Proxy;
    double normalization_scale = 1.0;
    Vector unscaled;                 // impact before normalization
    Vector rotation;                 // sign restrictions: unit q with unscaled = chol(SigmaU) q
};

/// impact = zeta * (-0.25 / zeta[policy]). Throws NumericalError when zeta[policy] = 0.
StructuralImpact proxy_impact(const FavarParams& params, int policy_index);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix, diag(R) > 0).
Matrix draw_rotation(int dim, Rng& rng);

/// Every restriction holds strictly for candidate c.
bool satisfies_restrictions(const Vector& c, const SignRestrictionSpec& spec);

/// Restrictions hold and the policy entry is negative, so the positive
/// rescaling to -0.25 keeps every sign.
bool is_admissible(const Vector& c, const SignRestrictionSpec& spec, int policy_index);

struct SignSearchResult {
    std::optional<StructuralImpact> impact;  // empty when every try was rejected
    int tries = 0;
};

/// Draws rotations until some column of chol(SigmaU) Q (or its negation,
/// lowest column first) is admissible, or max_tries is exhausted.
SignSearchResult sign_restricted_impact(const Matrix& SigmaU, const SignRestrictionSpec& spec, int policy_index,
                                        Rng& rng);

}  // namespace favar
