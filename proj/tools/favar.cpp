#include "favar/cli.hpp"
#include "favar/error.hpp"

#include <CLI11.hpp>

#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
    CLI::App app{"Bayesian FAVAR estimation with Normal-Gamma shrinkage"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    std::optional<std::uint64_t> seed;
    std::string output_dir;
    app.add_option("-c,--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--threads", threads, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "override the configured seed");
    app.add_option("--output-dir", output_dir, "override the configured output directory");

    auto* simulate = app.add_subcommand("simulate", "write a synthetic panel and its ground truth");
    auto* estimate = app.add_subcommand("estimate", "run the Gibbs sampler");
    long max_iterations = -1;
    bool resume = false;
    estimate->add_option("--max-iterations", max_iterations, "stop after this many sweeps (checkpoint kept)");
    estimate->add_flag("--resume", resume, "continue from the checkpoint in the output directory");
    auto* irf = app.add_subcommand("irf", "impulse responses from a stored chain");
    auto* dic = app.add_subcommand("dic", "deviance information criterion for stored chains");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        favar::RunConfig cfg = favar::load_config(config_path);
        if (seed) favar::override_seed(cfg, *seed);
        if (!output_dir.empty()) favar::override_output_dir(cfg, output_dir);

        if (*simulate) {
            favar::cmd_simulate(cfg);
        } else if (*estimate) {
            favar::EstimateOptions opts;
            if (max_iterations >= 0) opts.max_iterations = max_iterations;
            opts.resume = resume;
            favar::cmd_estimate(cfg, opts);
        } else if (*irf) {
            favar::cmd_irf(cfg);
        } else if (*dic) {
            favar::cmd_dic(cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return favar::exit_code_for(e);
    }
    return 0;
}
