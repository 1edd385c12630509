#pragma once

#include "favar/data_io.hpp"
#include "favar/gibbs.hpp"
#include "favar/irf.hpp"
#include "favar/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace favar {

/// Optional overrides; unset fields take the model defaults once dims are known.
struct HyperOverrides {
    std::optional<double> vartheta_a, vartheta_lambda, c0, c1, d0, d1, e0, e1, v;
    std::optional<double> sigma_bar_scale;  // Sigma_bar = scale * I
};

/**
 * One run configuration (JSON object). Top-level sections:
 *   seed, output_dir, data, model, hyper, chain, identification, irf, dic, simulate.
 * Every key is checked; unknown keys are rejected. Relative paths resolve
 * against the directory of the configuration file.
 */
struct RunConfig {
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    // data
    std::string panel_path;
    std::vector<SeriesSpec> series;
    std::string weights_path;        // optional spatial weights (R x R CSV)
    bool row_standardize = true;

    // model
    int S = 1;
    int Q = 2;
    int H_max = 72;

    HyperOverrides hyper;
    ChainConfig chain;
    long checkpoint_every = 1000;

    // identification
    Identification scheme = Identification::Proxy;
    std::vector<std::pair<std::string, int>> restrictions = default_sign_restrictions();
    int max_tries = 1000;

    std::string irf_chain;                // default: <output_dir>/chain.bin
    std::vector<std::string> dic_chains;

    SynthConfig synth;

    nlohmann::json resolved;  // canonical form with defaults filled in
    std::string hash;         // SHA-256 of resolved.dump()
};

RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Applies scalar command-line overrides and recomputes the hash.
void override_seed(RunConfig& cfg, std::uint64_t seed);
void override_output_dir(RunConfig& cfg, const std::string& dir);

Hyperparams resolve_hyperparams(const HyperOverrides& o, const ModelDims& dims);
nlohmann::json hyperparams_json(const Hyperparams& h);

}  // namespace favar
