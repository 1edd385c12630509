#pragma once

#include "favar/config.hpp"

#include <optional>
#include <string>

namespace favar {

struct EstimateOptions {
    std::optional<long> max_iterations;  // stop early (checkpoint kept) after this many sweeps
    bool resume = false;                 // continue from <output_dir>/checkpoint.bin
};

/// Writes panel.csv, truth.json and series.json into the output directory.
void cmd_simulate(const RunConfig& cfg);

/// Runs the sampler; writes chain.bin, checkpoint.bin and summary.json.
void cmd_estimate(const RunConfig& cfg, const EstimateOptions& opts = {});

/// Writes irf_macro.csv, irf_factor.csv, irf_regional.csv,
/// irf_cumulative_regional.csv and irf_summary.json.
void cmd_irf(const RunConfig& cfg);

/// Writes dic_table.csv (ascending) and dic_summary.json.
void cmd_dic(const RunConfig& cfg);

/// Exit code of an exception: 2 config, 3 data, 4 numerical.
int exit_code_for(const std::exception& e);

}  // namespace favar
