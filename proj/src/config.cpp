#include "favar/config.hpp"

#include "favar/error.hpp"
#include "favar/hash.hpp"

#include <filesystem>
#include <fstream>
#include <set>

namespace favar {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
T read(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

std::optional<double> read_opt(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    if (!obj.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return obj.at(key).get<double>();
}

std::string resolve_path(const std::string& base, const std::string& p) {
    if (p.empty()) return p;
    const std::filesystem::path path(p);
    if (path.is_absolute()) return p;
    return (std::filesystem::path(base) / path).lexically_normal().string();
}

const char* scheme_name(Identification s) { return s == Identification::Proxy ? "proxy" : "sign"; }

void rehash(RunConfig& cfg) {
    cfg.resolved["seed"] = cfg.seed;
    cfg.resolved["output_dir"] = cfg.output_dir;
    cfg.hash = sha256_hex(cfg.resolved.dump());
}

}  // namespace

RunConfig parse_config(const json& j, const std::string& base_dir) {
    check_keys(j, {"seed", "output_dir", "data", "model", "hyper", "chain", "identification", "irf", "dic", "simulate"},
               "config");
    RunConfig c;
    c.seed = read<std::uint64_t>(j, "seed", c.seed, "config");
    c.output_dir = resolve_path(base_dir, read<std::string>(j, "output_dir", c.output_dir, "config"));

    json data = j.value("data", json::object());
    check_keys(data, {"panel", "series", "series_file", "weights", "row_standardize"}, "data");
    c.panel_path = resolve_path(base_dir, read<std::string>(data, "panel", "", "data"));
    if (data.contains("series") && data.contains("series_file"))
        throw ConfigError("data: give either 'series' or 'series_file', not both");
    if (data.contains("series")) {
        c.series = specs_from_json(data["series"]);
    } else if (data.contains("series_file")) {
        const std::string sf = resolve_path(base_dir, read<std::string>(data, "series_file", "", "data"));
        std::ifstream in(sf);
        if (!in) throw ConfigError("data.series_file: cannot open '" + sf + "'");
        try {
            c.series = specs_from_json(json::parse(in));
        } catch (const json::parse_error& e) {
            throw ConfigError("data.series_file: " + std::string(e.what()));
        }
    }
    c.weights_path = resolve_path(base_dir, read<std::string>(data, "weights", "", "data"));
    c.row_standardize = read<bool>(data, "row_standardize", c.row_standardize, "data");

    json model = j.value("model", json::object());
    check_keys(model, {"S", "Q", "H_max"}, "model");
    c.S = read<int>(model, "S", c.S, "model");
    c.Q = read<int>(model, "Q", c.Q, "model");
    c.H_max = read<int>(model, "H_max", c.H_max, "model");
    if (c.S < 1 || c.Q < 1 || c.H_max < 0) throw ConfigError("model: need S >= 1, Q >= 1, H_max >= 0");

    json hyper = j.value("hyper", json::object());
    check_keys(hyper, {"vartheta_a", "vartheta_lambda", "c0", "c1", "d0", "d1", "e0", "e1", "v", "sigma_bar_scale"}, "hyper");
    HyperOverrides& h = c.hyper;
    h.vartheta_a = read_opt(hyper, "vartheta_a", "hyper");
    h.vartheta_lambda = read_opt(hyper, "vartheta_lambda", "hyper");
    h.c0 = read_opt(hyper, "c0", "hyper");
    h.c1 = read_opt(hyper, "c1", "hyper");
    h.d0 = read_opt(hyper, "d0", "hyper");
    h.d1 = read_opt(hyper, "d1", "hyper");
    h.e0 = read_opt(hyper, "e0", "hyper");
    h.e1 = read_opt(hyper, "e1", "hyper");
    h.v = read_opt(hyper, "v", "hyper");
    h.sigma_bar_scale = read_opt(hyper, "sigma_bar_scale", "hyper");
    for (const auto& [key, val] : hyper.items())
        if (!(val.get<double>() > 0.0)) throw ConfigError("hyper." + key + ": must be strictly positive");

    json chain = j.value("chain", json::object());
    check_keys(chain, {"n_draws", "n_burn", "thin", "store_factors", "checkpoint_every"}, "chain");
    c.chain.n_draws = read<long>(chain, "n_draws", c.chain.n_draws, "chain");
    c.chain.n_burn = read<long>(chain, "n_burn", c.chain.n_burn, "chain");
    c.chain.thin = read<long>(chain, "thin", c.chain.thin, "chain");
    c.chain.store_factors = read<bool>(chain, "store_factors", c.chain.store_factors, "chain");
    c.checkpoint_every = read<long>(chain, "checkpoint_every", c.checkpoint_every, "chain");
    try {
        c.chain.validate();
    } catch (const FavarError& e) {
        throw ConfigError(e.what());
    }
    if (c.checkpoint_every < 1) throw ConfigError("chain.checkpoint_every must be >= 1");

    json ident = j.value("identification", json::object());
    check_keys(ident, {"scheme", "restrictions", "max_tries"}, "identification");
    const std::string scheme = read<std::string>(ident, "scheme", "proxy", "identification");
    if (scheme == "proxy")
        c.scheme = Identification::Proxy;
    else if (scheme == "sign")
        c.scheme = Identification::Sign;
    else
        throw ConfigError("identification.scheme: expected 'proxy' or 'sign'");
    c.max_tries = read<int>(ident, "max_tries", c.max_tries, "identification");
    if (c.max_tries < 1) throw ConfigError("identification.max_tries must be >= 1");
    if (ident.contains("restrictions")) {
        c.restrictions.clear();
        if (!ident["restrictions"].is_array() || ident["restrictions"].empty())
            throw ConfigError("identification.restrictions: expected a non-empty array");
        for (const auto& r : ident["restrictions"]) {
            check_keys(r, {"name", "sign"}, "identification.restrictions");
            const std::string name = read<std::string>(r, "name", "", "identification.restrictions");
            const std::string sign = read<std::string>(r, "sign", "", "identification.restrictions");
            if (name.empty() || (sign != "+" && sign != "-"))
                throw ConfigError("identification.restrictions: need a name and sign '+' or '-'");
            c.restrictions.emplace_back(name, sign == "+" ? 1 : -1);
        }
    }

    json irf = j.value("irf", json::object());
    check_keys(irf, {"chain"}, "irf");
    c.irf_chain = resolve_path(base_dir, read<std::string>(irf, "chain", "", "irf"));

    json dic = j.value("dic", json::object());
    check_keys(dic, {"chains"}, "dic");
    for (const auto& p : read<std::vector<std::string>>(dic, "chains", {}, "dic")) c.dic_chains.push_back(resolve_path(base_dir, p));

    json sim = j.value("simulate", json::object());
    check_keys(sim, {"R", "S", "K", "Q", "T", "relevance", "noise_scale", "loading_scale", "aggregate_loading_scale",
                     "target_radius", "burn_in", "aggregate_names"},
               "simulate");
    SynthConfig& s = c.synth;
    s.dims.R = read<int>(sim, "R", 30, "simulate");
    s.dims.S = read<int>(sim, "S", 1, "simulate");
    s.dims.K = read<int>(sim, "K", 2, "simulate");
    s.dims.Q = read<int>(sim, "Q", c.Q, "simulate");
    s.dims.T = read<int>(sim, "T", 300, "simulate");
    s.relevance = read<double>(sim, "relevance", s.relevance, "simulate");
    s.noise_scale = read<double>(sim, "noise_scale", s.noise_scale, "simulate");
    s.loading_scale = read<double>(sim, "loading_scale", s.loading_scale, "simulate");
    s.aggregate_loading_scale = read<double>(sim, "aggregate_loading_scale", s.aggregate_loading_scale, "simulate");
    s.target_radius = read<double>(sim, "target_radius", s.target_radius, "simulate");
    s.burn_in = read<int>(sim, "burn_in", s.burn_in, "simulate");
    s.aggregate_names = read<std::vector<std::string>>(sim, "aggregate_names", {}, "simulate");
    if (!sim.empty()) s.validate();

    // canonical resolved form
    json r;
    r["data"] = {{"panel", c.panel_path},
                 {"series", specs_to_json(c.series)},
                 {"weights", c.weights_path},
                 {"row_standardize", c.row_standardize}};
    r["model"] = {{"S", c.S}, {"Q", c.Q}, {"H_max", c.H_max}};
    json hj = json::object();
    const auto put_opt = [&](const char* k, const std::optional<double>& v) {
        hj[k] = v ? json(*v) : json("default");
    };
    put_opt("vartheta_a", h.vartheta_a);
    put_opt("vartheta_lambda", h.vartheta_lambda);
    put_opt("c0", h.c0);
    put_opt("c1", h.c1);
    put_opt("d0", h.d0);
    put_opt("d1", h.d1);
    put_opt("e0", h.e0);
    put_opt("e1", h.e1);
    put_opt("v", h.v);
    put_opt("sigma_bar_scale", h.sigma_bar_scale);
    r["hyper"] = hj;
    r["chain"] = {{"n_draws", c.chain.n_draws},
                  {"n_burn", c.chain.n_burn},
                  {"thin", c.chain.thin},
                  {"store_factors", c.chain.store_factors},
                  {"checkpoint_every", c.checkpoint_every}};
    json rj = json::array();
    for (const auto& [n, sg] : c.restrictions) rj.push_back({{"name", n}, {"sign", sg > 0 ? "+" : "-"}});
    r["identification"] = {{"scheme", scheme_name(c.scheme)}, {"restrictions", rj}, {"max_tries", c.max_tries}};
    r["irf"] = {{"chain", c.irf_chain}};
    r["dic"] = {{"chains", c.dic_chains}};
    r["simulate"] = {{"R", s.dims.R},
                     {"S", s.dims.S},
                     {"K", s.dims.K},
                     {"Q", s.dims.Q},
                     {"T", s.dims.T},
                     {"relevance", s.relevance},
                     {"noise_scale", s.noise_scale},
                     {"loading_scale", s.loading_scale},
                     {"aggregate_loading_scale", s.aggregate_loading_scale},
                     {"target_radius", s.target_radius},
                     {"burn_in", s.burn_in},
                     {"aggregate_names", s.aggregate_names}};
    c.resolved = r;
    rehash(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    return parse_config(j, base.empty() ? "." : base.string());
}

void override_seed(RunConfig& cfg, std::uint64_t seed) {
    cfg.seed = seed;
    rehash(cfg);
}

void override_output_dir(RunConfig& cfg, const std::string& dir) {
    cfg.output_dir = dir;
    rehash(cfg);
}

Hyperparams resolve_hyperparams(const HyperOverrides& o, const ModelDims& dims) {
    Hyperparams h = default_hyperparams(dims);
    if (o.vartheta_a) h.vartheta_a = *o.vartheta_a;
    if (o.vartheta_lambda) h.vartheta_lambda = *o.vartheta_lambda;
    if (o.c0) h.c0 = *o.c0;
    if (o.c1) h.c1 = *o.c1;
    if (o.d0) h.d0 = *o.d0;
    if (o.d1) h.d1 = *o.d1;
    if (o.e0) h.e0 = *o.e0;
    if (o.e1) h.e1 = *o.e1;
    if (o.v) h.v = *o.v;
    if (o.sigma_bar_scale) h.Sigma_bar = *o.sigma_bar_scale * Matrix::Identity(dims.n_vars(), dims.n_vars());
    h.validate(dims.n_vars());
    return h;
}

nlohmann::json hyperparams_json(const Hyperparams& h) {
    json sb = json::array();
    for (Index r = 0; r < h.Sigma_bar.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < h.Sigma_bar.cols(); ++c) row.push_back(h.Sigma_bar(r, c));
        sb.push_back(row);
    }
    return {{"vartheta_a", h.vartheta_a}, {"vartheta_lambda", h.vartheta_lambda},
            {"c0", h.c0}, {"c1", h.c1}, {"d0", h.d0}, {"d1", h.d1}, {"e0", h.e0}, {"e1", h.e1},
            {"v", h.v}, {"Sigma_bar", sb}};
}

}  // namespace favar
