#include "favar/cli.hpp"

#include "favar/chain_io.hpp"
#include "favar/dic.hpp"
#include "favar/error.hpp"
#include "favar/identification.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace favar {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::uint64_t kSimulateStream = 0x51AA;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::string& dir, const char* file) { return (fs::path(dir) / file).string(); }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<std::string> provenance(const RunConfig& cfg) {
    return {"config_hash=" + cfg.hash, "seed=" + std::to_string(cfg.seed)};
}

PanelData load_data(const RunConfig& cfg) {
    if (cfg.panel_path.empty()) throw ConfigError("data.panel is required");
    if (cfg.series.empty()) throw ConfigError("data.series or data.series_file is required");
    validate_series_specs(cfg.series, cfg.S);
    return load_panel(cfg.panel_path, cfg.series);
}

ModelDims dims_for(const RunConfig& cfg, const PanelData& data) {
    ModelDims d;
    d.R = data.R();
    d.S = cfg.S;
    d.K = data.K();
    d.Q = cfg.Q;
    d.T = data.T();
    d.H_max = cfg.H_max;
    try {
        d.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    return d;
}

json dims_json(const ModelDims& d) {
    return {{"R", d.R}, {"S", d.S}, {"K", d.K}, {"Q", d.Q}, {"T", d.T}, {"H_max", d.H_max},
            {"L", d.L()}, {"J", d.J()}};
}

std::vector<std::string> var_names(const PanelData& data, int S) {
    std::vector<std::string> out;
    for (int s = 0; s < S; ++s) out.push_back("F" + std::to_string(s + 1));
    for (const auto& n : data.aggregate_names) out.push_back(n);
    return out;
}

json matrix_json(const Matrix& m) {
    json j = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Matrix load_weights(const std::string& path, Index R) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open weights file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (rows.empty()) continue;  // header
            throw DataError(path + ": non-numeric weight");
        }
        rows.push_back(std::move(row));
    }
    if (static_cast<Index>(rows.size()) != R) throw DataError(path + ": weights must be R x R");
    Matrix W(R, R);
    for (Index i = 0; i < R; ++i) {
        if (static_cast<Index>(rows[i].size()) != R) throw DataError(path + ": weights must be R x R");
        for (Index j = 0; j < R; ++j) W(i, j) = rows[i][j];
    }
    return W;
}

void write_band_table(const std::string& path, const RunConfig& cfg, const std::vector<std::string>& names,
                      const Bands& bands, const Bands& cumulative) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    for (const auto& c : provenance(cfg)) out << "# " << c << '\n';
    out << "series,horizon,q16,q50,q84,cumulative\n";
    const Matrix& med_cum = cumulative.median();
    for (Index s = 0; s < bands.q[0].cols(); ++s)
        for (Index h = 0; h < bands.q[0].rows(); ++h)
            out << names[static_cast<std::size_t>(s)] << ',' << h << ',' << fmt17(bands.q[0](h, s)) << ','
                << fmt17(bands.q[1](h, s)) << ',' << fmt17(bands.q[2](h, s)) << ',' << fmt17(med_cum(h, s)) << '\n';
    if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (const auto* fe = dynamic_cast<const FavarError*>(&e)) {
        switch (fe->kind()) {
            case ErrorKind::Config:
            case ErrorKind::Parameter: return 2;
            case ErrorKind::Data: return 3;
            case ErrorKind::Numerical:
            case ErrorKind::Shape: return 4;
        }
    }
    if (dynamic_cast<const json::exception*>(&e)) return 2;
    if (dynamic_cast<const fs::filesystem_error*>(&e)) return 3;
    return 1;
}

void cmd_simulate(const RunConfig& cfg) {
    cfg.synth.validate();
    ensure_dir(cfg.output_dir);
    Rng rng = Rng::substream(cfg.seed, {kSimulateStream});
    const SynthResult sim = generate_synthetic(cfg.synth, rng);

    write_panel(join(cfg.output_dir, "panel.csv"), sim.data, provenance(cfg));
    write_json(join(cfg.output_dir, "series.json"), specs_to_json(specs_for_panel(sim.data)));
    json truth{{"config_hash", cfg.hash},
               {"seed", cfg.seed},
               {"synthetic", true},
               {"dims", dims_json(cfg.synth.dims)},
               {"params", params_to_json(sim.truth)},
               {"factors", matrix_json(sim.factors)},
               {"presample", matrix_json(sim.presample)},
               {"impact", vector_json(sim.impact)},
               {"relative_impact", vector_json(sim.relative_impact)},
               {"policy_index", sim.data.policy_index},
               {"relevance", cfg.synth.relevance}};
    write_json(join(cfg.output_dir, "truth.json"), truth);
}

void cmd_estimate(const RunConfig& cfg, const EstimateOptions& opts) {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();

    // Everything is validated before the first file is touched.
    const PanelData data = load_data(cfg);
    const ModelDims dims = dims_for(cfg, data);
    const Hyperparams hyper = resolve_hyperparams(cfg.hyper, dims);
    ChainConfig chain_cfg = cfg.chain;
    chain_cfg.seed = cfg.seed;
    const GibbsSampler sampler(data, dims, hyper, chain_cfg);
    if (opts.max_iterations && *opts.max_iterations < 0) throw ConfigError("--max-iterations must be >= 0");

    const std::string chain_path = join(cfg.output_dir, "chain.bin");
    const std::string ckp_path = join(cfg.output_dir, "checkpoint.bin");
    ChainHeader header;
    header.layout = {dims, data.has_proxy(), chain_cfg.store_factors};
    header.seed = cfg.seed;
    header.config_hash = cfg.hash;
    header.data_checksum = data_checksum(data);
    header.n_draws = chain_cfg.n_draws;
    header.n_burn = chain_cfg.n_burn;
    header.thin = chain_cfg.thin;

    SamplerState state;
    long resume_records = -1;
    if (opts.resume) {
        Checkpoint ckp = read_checkpoint(ckp_path);
        if (ckp.header.config_hash != cfg.hash) throw ConfigError("resume: checkpoint was written under a different configuration");
        if (ckp.header.data_checksum != header.data_checksum) throw DataError("resume: checkpoint was written for different data");
        state = std::move(ckp.state);
        resume_records = ckp.records_written;
    } else {
        state = sampler.initial_state();
    }
    ensure_dir(cfg.output_dir);
    ChainWriter writer(chain_path, header, resume_records);

    const long until = std::min(chain_cfg.n_draws, opts.max_iterations.value_or(chain_cfg.n_draws));
    ChainDiagnostics diag;
    const auto sink = [&](const SamplerState& s) { writer.append(s); };
    while (state.iteration < until) {
        const long next = std::min(until, (state.iteration / cfg.checkpoint_every + 1) * cfg.checkpoint_every);
        advance_chain(sampler, state, next, sink, &diag);
        writer.sync();
        write_checkpoint(ckp_path, {header, state, writer.records()});
    }
    if (!fs::exists(ckp_path)) write_checkpoint(ckp_path, {header, state, writer.records()});
    writer.sync();

    const bool complete = state.iteration >= chain_cfg.n_draws;
    json steps = json::object();
    for (int s = 0; s < kGibbsSteps; ++s) steps[step_name(static_cast<GibbsStep>(s))] = diag.step_seconds[s];
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    json summary{{"config_hash", cfg.hash},
                 {"seed", cfg.seed},
                 {"data_checksum", header.data_checksum},
                 {"status", complete ? "complete" : "interrupted"},
                 {"iterations", state.iteration},
                 {"records", writer.records()},
                 {"dims", dims_json(dims)},
                 {"has_proxy", data.has_proxy()},
                 {"hyperparams", hyperparams_json(hyper)},
                 {"chain",
                  {{"n_draws", chain_cfg.n_draws},
                   {"n_burn", chain_cfg.n_burn},
                   {"thin", chain_cfg.thin},
                   {"n_kept", chain_cfg.n_kept()},
                   {"store_factors", chain_cfg.store_factors},
                   {"checkpoint_every", cfg.checkpoint_every}}},
                 {"identification", cfg.resolved["identification"]},
                 {"H_max", dims.H_max},
                 {"diagnostics",
                  {{"gig_chi_floored", state.gig_chi_floored},
                   {"step_seconds", steps},
                   {"wall_seconds", std::chrono::duration<double>(Clock::now() - t0).count()},
                   {"threads", threads},
                   {"resumed", opts.resume}}},
                 {"config", cfg.resolved}};
    write_json(join(cfg.output_dir, "summary.json"), summary);
}

void cmd_irf(const RunConfig& cfg) {
    const PanelData data = load_data(cfg);
    const std::string chain_path = cfg.irf_chain.empty() ? join(cfg.output_dir, "chain.bin") : cfg.irf_chain;
    const ChainFile cf = read_chain(chain_path, false, false);
    if (cf.header.data_checksum != data_checksum(data))
        throw DataError("irf: chain '" + chain_path + "' was estimated on different data");
    const ModelDims& dims = cf.header.layout.dims;
    if (data.policy_index < 0) throw ConfigError("irf: no policy indicator among the aggregates");

    IrfOptions opts;
    opts.policy_index = dims.S + data.policy_index;
    opts.H_max = cfg.H_max;
    opts.seed = cfg.seed;
    const std::vector<std::string> names = var_names(data, dims.S);
    if (cfg.scheme == Identification::Sign) {
        opts.scheme = Identification::Sign;
        opts.sign = resolve_sign_spec(cfg.restrictions, names, cfg.max_tries);
    } else if (!cf.header.layout.has_proxy) {
        throw ConfigError("irf: proxy identification needs a chain estimated with a proxy series");
    }
    const IrfSet irf = compute_irfs(cf.chain.draws, opts);

    std::optional<double> moran;
    if (!cfg.weights_path.empty()) {
        const Matrix W = load_weights(cfg.weights_path, dims.R);
        const Vector cum = irf.cumulative_regional.row(1).transpose();
        moran = morans_i(cum, W, cfg.row_standardize);
    }

    ensure_dir(cfg.output_dir);
    write_band_table(join(cfg.output_dir, "irf_macro.csv"), cfg, names, irf.macro, irf.macro_cumulative);
    Bands factor_cum;
    factor_cum.probs = irf.macro_cumulative.probs;
    for (const auto& q : irf.macro_cumulative.q) factor_cum.q.push_back(q.leftCols(dims.S));
    write_band_table(join(cfg.output_dir, "irf_factor.csv"), cfg, names, irf.factor, factor_cum);
    write_band_table(join(cfg.output_dir, "irf_regional.csv"), cfg, data.regional_names, irf.regional,
                     irf.regional_cumulative);
    {
        const std::string path = join(cfg.output_dir, "irf_cumulative_regional.csv");
        std::ofstream out(path);
        if (!out) throw DataError("cannot write '" + path + "'");
        for (const auto& c : provenance(cfg)) out << "# " << c << '\n';
        out << "# responses cumulated over horizons 0.." << cfg.H_max << '\n';
        out << "region,q16,q50,q84\n";
        for (Index r = 0; r < dims.R; ++r)
            out << data.regional_names[static_cast<std::size_t>(r)] << ',' << fmt17(irf.cumulative_regional(0, r)) << ','
                << fmt17(irf.cumulative_regional(1, r)) << ',' << fmt17(irf.cumulative_regional(2, r)) << '\n';
    }

    const Vector med = irf.cumulative_regional.row(1).transpose();
    const double mean = med.mean();
    const double sd = dims.R > 1 ? std::sqrt((med.array() - mean).square().sum() / (dims.R - 1)) : 0.0;
    json summary{{"config_hash", cfg.hash},
                 {"seed", cfg.seed},
                 {"chain", chain_path},
                 {"chain_config_hash", cf.header.config_hash},
                 {"scheme", cfg.scheme == Identification::Proxy ? "proxy" : "sign"},
                 {"H_max", cfg.H_max},
                 {"policy_variable", names[static_cast<std::size_t>(opts.policy_index)]},
                 {"policy_impact_median", irf.macro.median()(0, opts.policy_index)},
                 {"n_draws", irf.n_draws},
                 {"n_used", irf.n_used},
                 {"n_excluded", irf.n_excluded},
                 {"cumulative_regional_mean", mean},
                 {"cumulative_regional_sd", sd}};
    if (cfg.scheme == Identification::Sign) {
        summary["rotations_tried"] = irf.rotations_tried;
        summary["acceptance_rate"] = irf.acceptance_rate();
        summary["max_tries"] = cfg.max_tries;
    }
    summary["morans_i"] = moran ? json(*moran) : json(nullptr);
    write_json(join(cfg.output_dir, "irf_summary.json"), summary);
}

void cmd_dic(const RunConfig& cfg) {
    if (cfg.dic_chains.empty()) throw ConfigError("dic.chains must list at least one chain");
    const PanelData data = load_data(cfg);
    const std::string checksum = data_checksum(data);
    for (const auto& path : cfg.dic_chains) {
        if (read_chain_header(path).data_checksum != checksum)
            throw DataError("dic: chain '" + path + "' was estimated on different data");
    }

    struct Row {
        std::string path;
        ModelDims dims;
        DicResult dic;
    };
    std::vector<Row> rows;
    for (const auto& path : cfg.dic_chains) {
        const ChainFile cf = read_chain(path, false, false);
        rows.push_back({path, cf.header.layout.dims, compute_dic(cf.chain, data)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.dic.dic < b.dic.dic; });

    ensure_dir(cfg.output_dir);
    const std::string path = join(cfg.output_dir, "dic_table.csv");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    for (const auto& c : provenance(cfg)) out << "# " << c << '\n';
    out << "chain,S,Q,n_draws,d_bar,d_hat,p_d,dic\n";
    json table = json::array();
    for (const auto& r : rows) {
        out << r.path << ',' << r.dims.S << ',' << r.dims.Q << ',' << r.dic.n_draws_used << ',' << fmt17(r.dic.d_bar) << ','
            << fmt17(r.dic.d_hat) << ',' << fmt17(r.dic.p_d) << ',' << fmt17(r.dic.dic) << '\n';
        table.push_back({{"chain", r.path}, {"S", r.dims.S}, {"Q", r.dims.Q}, {"n_draws", r.dic.n_draws_used},
                         {"d_bar", r.dic.d_bar}, {"d_hat", r.dic.d_hat}, {"p_d", r.dic.p_d}, {"dic", r.dic.dic}});
    }
    write_json(join(cfg.output_dir, "dic_summary.json"),
               {{"config_hash", cfg.hash}, {"seed", cfg.seed}, {"data_checksum", checksum}, {"ranking", table},
                {"selected_S", rows.front().dims.S}});
}

}  // namespace favar
