#pragma once

#include "favar/model.hpp"
#include "favar/random.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace favar {

enum class SeriesKind { Regional, Aggregate, Proxy };
enum class Transform { None, LogDiffX100, Diff };

struct SeriesSpec {
    std::string name;
    SeriesKind kind = SeriesKind::Regional;
    Transform transform = Transform::None;
    bool policy_indicator = false;
};

SeriesKind parse_series_kind(const std::string& s);
Transform parse_transform(const std::string& s);
std::string to_string(SeriesKind k);
std::string to_string(Transform t);

/// Exactly one proxy, exactly one policy indicator (an aggregate), unique
/// names, and at least S regional series. Throws ConfigError.
void validate_series_specs(const std::vector<SeriesSpec>& specs, int S);

/// Reads a comma-separated panel: header row, period label (YYYY-MM) first,
/// one column per series; lines starting with '#' are comments. Columns are
/// picked by name; regional series keep spec order, then aggregates. When any
/// series is differenced the first period is dropped for all of them.
PanelData load_panel(const std::string& path, const std::vector<SeriesSpec>& specs);

/// Writes regional, aggregate and proxy columns untransformed (%.17g).
/// `comments` are emitted as leading '#' lines.
void write_panel(const std::string& path, const PanelData& data, const std::vector<std::string>& comments = {});

/// Specs reproducing the column layout written by write_panel, transforms none.
std::vector<SeriesSpec> specs_for_panel(const PanelData& data);

nlohmann::json specs_to_json(const std::vector<SeriesSpec>& specs);
std::vector<SeriesSpec> specs_from_json(const nlohmann::json& j);

/// SHA-256 over the panel's labels and the exact bytes of its values.
std::string data_checksum(const PanelData& data);

nlohmann::json params_to_json(const FavarParams& p);
FavarParams params_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Synthetic panels

struct SynthConfig {
    ModelDims dims;                 // S <= R is allowed here
    double loading_scale = 1.0;     // sd of the free loadings on F
    double aggregate_loading_scale = 0.5;
    double meas_sd_min = 0.3;       // measurement sd drawn uniformly in [min, max]
    double meas_sd_max = 0.7;
    double noise_scale = 1.0;       // multiplies every measurement sd; 0 gives exact data
    double relevance = 0.6;         // corr(z_t, structural shock)
    double target_radius = 0.9;     // companion spectral radius after rescaling
    double own_lag = 0.5;           // first-lag diagonal before rescaling
    double cross_sd = 0.1;          // sd of other VAR coefficients before rescaling
    int burn_in = 200;              // simulated periods discarded before t = 1
    std::vector<std::string> aggregate_names;  // default names when empty
    int policy_aggregate = -1;      // default: GS1 if present, else the last aggregate

    void validate() const;
};

struct SynthResult {
    PanelData data;
    FavarParams truth;        // SigmaU is the innovation covariance given z_t
    Matrix factors;           // T x S
    Matrix presample;         // Q x (S+K), row q = y_{-q}
    Vector shocks;            // structural shock eps_t
    Matrix innovations;       // y_t - A x_t - zeta z_t
    Vector impact;            // structural impact column b: u_t = b eps_t + e_t
    Vector relative_impact;   // b scaled so the policy entry is -0.25
};

SynthResult generate_synthetic(const SynthConfig& cfg, Rng& rng);

/// Default aggregate names for K aggregates.
std::vector<std::string> default_aggregate_names(int K);

struct StatePath {
    Matrix y;          // T x (S+K)
    Matrix presample;  // Q x (S+K), row q = y_{-q}
};

/// Simulates the state equation forward from the companion state s0 = (y_0, ..., y_{1-Q}).
StatePath simulate_state_path(const FavarParams& params, Index T, const Vector& s0, const std::optional<Vector>& z,
                              Rng& rng);

/// H_t = LambdaF F_t + LambdaM M_t + eps_t for a path y_t = (F_t, M_t).
Matrix simulate_regional(const FavarParams& params, const Matrix& y, Rng& rng);

}  // namespace favar
