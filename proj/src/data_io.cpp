#include "favar/data_io.hpp"

#include "favar/error.hpp"
#include "favar/hash.hpp"
#include "favar/identification.hpp"
#include "favar/linalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace favar {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim spaces and a trailing carriage return
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string month_label(int start_year, int start_month, Index offset) {
    const Index m = start_month - 1 + offset;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", static_cast<int>(start_year + m / 12), static_cast<int>(m % 12 + 1));
    return buf;
}

Matrix json_matrix(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string("expected a matrix for ") + what);
    const Index rows = static_cast<Index>(j.size());
    const Index cols = rows == 0 ? 0 : static_cast<Index>(j[0].size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        if (!j[r].is_array() || static_cast<Index>(j[r].size()) != cols)
            throw ConfigError(std::string("ragged matrix for ") + what);
        for (Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

Vector json_vector(const nlohmann::json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string("expected a vector for ") + what);
    Vector v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json j = nlohmann::json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

nlohmann::json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

SeriesKind parse_series_kind(const std::string& s) {
    if (s == "regional") return SeriesKind::Regional;
    if (s == "aggregate") return SeriesKind::Aggregate;
    if (s == "proxy") return SeriesKind::Proxy;
    throw ConfigError("unknown series kind '" + s + "'");
}

Transform parse_transform(const std::string& s) {
    if (s == "none") return Transform::None;
    if (s == "log_diff_x100") return Transform::LogDiffX100;
    if (s == "diff") return Transform::Diff;
    throw ConfigError("unknown transform '" + s + "'");
}

std::string to_string(SeriesKind k) {
    switch (k) {
        case SeriesKind::Regional: return "regional";
        case SeriesKind::Aggregate: return "aggregate";
        case SeriesKind::Proxy: return "proxy";
    }
    return "?";
}

std::string to_string(Transform t) {
    switch (t) {
        case Transform::None: return "none";
        case Transform::LogDiffX100: return "log_diff_x100";
        case Transform::Diff: return "diff";
    }
    return "?";
}

void validate_series_specs(const std::vector<SeriesSpec>& specs, int S) {
    int proxies = 0;
    int policy = 0;
    int regional = 0;
    std::set<std::string> names;
    for (const auto& s : specs) {
        if (s.name.empty()) throw ConfigError("series spec: empty name");
        if (!names.insert(s.name).second) throw ConfigError("series spec: duplicate name '" + s.name + "'");
        proxies += s.kind == SeriesKind::Proxy;
        regional += s.kind == SeriesKind::Regional;
        if (s.policy_indicator) {
            ++policy;
            if (s.kind != SeriesKind::Aggregate)
                throw ConfigError("series spec: policy indicator '" + s.name + "' must be an aggregate");
        }
    }
    if (proxies != 1) throw ConfigError("series spec: exactly one proxy series is required");
    if (policy != 1) throw ConfigError("series spec: exactly one policy indicator is required");
    if (regional < S) throw ConfigError("series spec: fewer regional series than factors");
}

PanelData load_panel(const std::string& path, const std::vector<SeriesSpec>& specs) {
    validate_series_specs(specs, 0);
    std::ifstream in(path);
    if (!in) throw DataError("cannot open panel file '" + path + "'");

    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        header = split_csv(line);
        break;
    }
    if (header.size() < 2) throw DataError(path + ": missing header row");

    std::map<std::string, std::size_t> column;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (!column.emplace(header[c], c).second) throw DataError(path + ": duplicate column '" + header[c] + "'");
    }
    for (const auto& s : specs)
        if (!column.count(s.name)) throw DataError(path + ": column '" + s.name + "' not found");

    static const std::regex period_re(R"(\d{4}-(0[1-9]|1[0-2]))");
    std::vector<std::string> periods;
    std::vector<std::vector<double>> raw(specs.size());
    std::vector<std::string> missing;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            std::ostringstream err;
            err << path << ": data line " << line_no << " has " << cells.size() << " cells, header has " << header.size();
            throw DataError(err.str());
        }
        if (!std::regex_match(cells[0], period_re)) throw DataError(path + ": bad period label '" + cells[0] + "'");
        if (!periods.empty() && cells[0] <= periods.back())
            throw DataError(path + ": periods duplicated or unsorted at '" + cells[0] + "'");
        periods.push_back(cells[0]);
        for (std::size_t k = 0; k < specs.size(); ++k) {
            double v = 0.0;
            if (!parse_double(cells[column[specs[k].name]], v)) {
                missing.push_back(cells[0] + "/" + specs[k].name);
                v = std::nan("");
            }
            raw[k].push_back(v);
        }
    }
    if (!missing.empty()) {
        std::ostringstream err;
        err << path << ": " << missing.size() << " missing or invalid cells:";
        for (std::size_t i = 0; i < missing.size() && i < 50; ++i) err << ' ' << missing[i];
        if (missing.size() > 50) err << " ...";
        throw DataError(err.str());
    }

    const bool differenced = std::any_of(specs.begin(), specs.end(), [](const SeriesSpec& s) { return s.transform != Transform::None; });
    const std::size_t drop = differenced ? 1 : 0;
    if (periods.size() <= drop + 1) throw DataError(path + ": too few periods");
    const Index T = static_cast<Index>(periods.size() - drop);

    std::vector<Vector> series(specs.size());
    for (std::size_t k = 0; k < specs.size(); ++k) {
        const auto& x = raw[k];
        Vector v(T);
        for (Index t = 0; t < T; ++t) {
            const std::size_t i = static_cast<std::size_t>(t) + drop;
            switch (specs[k].transform) {
                case Transform::None: v[t] = x[i]; break;
                case Transform::Diff: v[t] = x[i] - x[i - 1]; break;
                case Transform::LogDiffX100:
                    if (!(x[i] > 0.0) || !(x[i - 1] > 0.0))
                        throw DataError(path + ": log transform of non-positive value in '" + specs[k].name + "' at " + periods[i]);
                    v[t] = 100.0 * (std::log(x[i]) - std::log(x[i - 1]));
                    break;
            }
        }
        if (v.maxCoeff() == v.minCoeff()) throw DataError(path + ": series '" + specs[k].name + "' is constant");
        series[k] = std::move(v);
    }

    PanelData d;
    d.time_index.assign(periods.begin() + static_cast<std::ptrdiff_t>(drop), periods.end());
    std::vector<Index> reg;
    std::vector<Index> agg;
    for (std::size_t k = 0; k < specs.size(); ++k) {
        switch (specs[k].kind) {
            case SeriesKind::Regional:
                reg.push_back(static_cast<Index>(k));
                d.regional_names.push_back(specs[k].name);
                break;
            case SeriesKind::Aggregate:
                if (specs[k].policy_indicator) d.policy_index = static_cast<int>(agg.size());
                agg.push_back(static_cast<Index>(k));
                d.aggregate_names.push_back(specs[k].name);
                break;
            case SeriesKind::Proxy:
                d.z = series[k];
                d.proxy_name = specs[k].name;
                break;
        }
    }
    d.H.resize(T, static_cast<Index>(reg.size()));
    for (std::size_t i = 0; i < reg.size(); ++i) d.H.col(static_cast<Index>(i)) = series[reg[i]];
    d.M.resize(T, static_cast<Index>(agg.size()));
    for (std::size_t i = 0; i < agg.size(); ++i) d.M.col(static_cast<Index>(i)) = series[agg[i]];
    d.validate();
    return d;
}

void write_panel(const std::string& path, const PanelData& data, const std::vector<std::string>& comments) {
    data.validate();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write panel file '" + path + "'");
    for (const auto& c : comments) out << "# " << c << '\n';
    const auto name = [](const std::vector<std::string>& v, Index i, const char* prefix) {
        return i < static_cast<Index>(v.size()) ? v[i] : prefix + std::to_string(i + 1);
    };
    out << "period";
    for (Index r = 0; r < data.H.cols(); ++r) out << ',' << name(data.regional_names, r, "region_");
    for (Index k = 0; k < data.M.cols(); ++k) out << ',' << name(data.aggregate_names, k, "aggregate_");
    if (data.z) out << ',' << (data.proxy_name.empty() ? "proxy" : data.proxy_name);
    out << '\n';
    for (Index t = 0; t < data.H.rows(); ++t) {
        out << data.time_index[t];
        for (Index r = 0; r < data.H.cols(); ++r) out << ',' << fmt17(data.H(t, r));
        for (Index k = 0; k < data.M.cols(); ++k) out << ',' << fmt17(data.M(t, k));
        if (data.z) out << ',' << fmt17((*data.z)[t]);
        out << '\n';
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<SeriesSpec> specs_for_panel(const PanelData& data) {
    std::vector<SeriesSpec> specs;
    for (Index r = 0; r < data.H.cols(); ++r)
        specs.push_back({r < static_cast<Index>(data.regional_names.size()) ? data.regional_names[r] : "region_" + std::to_string(r + 1),
                         SeriesKind::Regional, Transform::None, false});
    for (Index k = 0; k < data.M.cols(); ++k)
        specs.push_back({k < static_cast<Index>(data.aggregate_names.size()) ? data.aggregate_names[k] : "aggregate_" + std::to_string(k + 1),
                         SeriesKind::Aggregate, Transform::None, k == data.policy_index});
    if (data.z) specs.push_back({data.proxy_name.empty() ? "proxy" : data.proxy_name, SeriesKind::Proxy, Transform::None, false});
    return specs;
}

nlohmann::json specs_to_json(const std::vector<SeriesSpec>& specs) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : specs) {
        nlohmann::json e{{"name", s.name}, {"kind", to_string(s.kind)}, {"transform", to_string(s.transform)}};
        if (s.policy_indicator) e["policy_indicator"] = true;
        j.push_back(e);
    }
    return j;
}

std::vector<SeriesSpec> specs_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("series: expected an array of series specs");
    std::vector<SeriesSpec> out;
    for (const auto& e : j) {
        if (!e.is_object()) throw ConfigError("series: each entry must be an object");
        for (const auto& [key, _] : e.items())
            if (key != "name" && key != "kind" && key != "transform" && key != "policy_indicator")
                throw ConfigError("series: unknown key '" + key + "'");
        if (!e.contains("name") || !e["name"].is_string()) throw ConfigError("series: entry without a name");
        SeriesSpec s;
        s.name = e["name"].get<std::string>();
        s.kind = parse_series_kind(e.value("kind", std::string("regional")));
        s.transform = parse_transform(e.value("transform", std::string("none")));
        s.policy_indicator = e.value("policy_indicator", false);
        out.push_back(std::move(s));
    }
    return out;
}

std::string data_checksum(const PanelData& data) {
    std::string bytes;
    const auto add = [&](const std::string& s) {
        bytes += s;
        bytes.push_back('\0');
    };
    const auto add_values = [&](const double* p, Index n) {
        bytes.append(reinterpret_cast<const char*>(p), static_cast<std::size_t>(n) * sizeof(double));
    };
    add(std::to_string(data.T()) + "x" + std::to_string(data.R()) + "x" + std::to_string(data.K()));
    for (const auto& s : data.time_index) add(s);
    for (const auto& s : data.regional_names) add(s);
    for (const auto& s : data.aggregate_names) add(s);
    add(data.proxy_name);
    add(std::to_string(data.policy_index));
    add_values(data.H.data(), data.H.size());
    add_values(data.M.data(), data.M.size());
    if (data.z) add_values(data.z->data(), data.z->size());
    return sha256_hex(bytes);
}

nlohmann::json params_to_json(const FavarParams& p) {
    return {{"LambdaF", matrix_json(p.LambdaF)}, {"LambdaM", matrix_json(p.LambdaM)}, {"sigma2", vector_json(p.sigma2)},
            {"A", matrix_json(p.A)},             {"zeta", vector_json(p.zeta)},       {"SigmaU", matrix_json(p.SigmaU)}};
}

FavarParams params_from_json(const nlohmann::json& j) {
    for (const char* key : {"LambdaF", "LambdaM", "sigma2", "A", "zeta", "SigmaU"})
        if (!j.contains(key)) throw ConfigError(std::string("parameters: missing '") + key + "'");
    FavarParams p;
    p.LambdaF = json_matrix(j["LambdaF"], "LambdaF");
    p.LambdaM = json_matrix(j["LambdaM"], "LambdaM");
    if (p.LambdaM.rows() == 0) p.LambdaM.resize(p.LambdaF.rows(), 0);
    p.sigma2 = json_vector(j["sigma2"], "sigma2");
    p.A = json_matrix(j["A"], "A");
    p.zeta = json_vector(j["zeta"], "zeta");
    p.SigmaU = json_matrix(j["SigmaU"], "SigmaU");
    return p;
}

// ---------------------------------------------------------------------------

void SynthConfig::validate() const {
    std::ostringstream err;
    if (dims.S < 1) err << "S must be >= 1; ";
    if (dims.K < 1) err << "K must be >= 1 (the policy indicator is an aggregate); ";
    if (dims.Q < 1) err << "Q must be >= 1; ";
    if (dims.R < dims.S) err << "R must be >= S; ";
    if (dims.T < 1) err << "T must be >= 1; ";
    if (burn_in < dims.Q) err << "burn_in must be >= Q; ";
    if (!(std::abs(relevance) <= 1.0)) err << "relevance must lie in [-1, 1]; ";
    if (!(target_radius > 0.0 && target_radius < 1.0)) err << "target_radius must lie in (0, 1); ";
    if (!(meas_sd_min > 0.0 && meas_sd_max >= meas_sd_min)) err << "need 0 < meas_sd_min <= meas_sd_max; ";
    if (!(noise_scale >= 0.0)) err << "noise_scale must be >= 0; ";
    if (!aggregate_names.empty() && static_cast<int>(aggregate_names.size()) != dims.K)
        err << "aggregate_names must have K entries; ";
    if (policy_aggregate >= dims.K) err << "policy_aggregate out of range; ";
    if (!err.str().empty()) throw ConfigError("synthetic config: " + err.str());
}

std::vector<std::string> default_aggregate_names(int K) {
    std::vector<std::string> out;
    if (K >= 5) {
        // the restriction variables and the policy rate first, then extras
        std::vector<std::string> core = {"INDPRO", "CPIAUCSL", "HOUST", "T10YFF"};
        std::vector<std::string> extra = {"MORTGAGE30US", "PERMIT"};
        out = core;
        for (int k = 0; k < K - 5; ++k)
            out.push_back(k < static_cast<int>(extra.size()) ? extra[k] : "agg_" + std::to_string(k + 1));
        out.push_back("GS1");
        return out;
    }
    for (int k = 0; k + 1 < K; ++k) out.push_back("agg_" + std::to_string(k + 1));
    out.push_back("policy_rate");
    return out;
}

StatePath simulate_state_path(const FavarParams& params, Index T, const Vector& s0, const std::optional<Vector>& z,
                              Rng& rng) {
    const int n = params.n_vars();
    const int Q = params.Q();
    const Index m = static_cast<Index>(n) * Q;
    if (s0.size() != m) throw ShapeError("simulate_state_path: initial state must have Q(S+K) entries");
    if (z && z->size() != T) throw ShapeError("simulate_state_path: proxy length differs from T");
    const CompanionForm comp = build_companion(params.A, n, Q);
    const MvnFactor noise(params.SigmaU);

    StatePath out;
    out.presample.resize(Q, n);
    for (int q = 0; q < Q; ++q) out.presample.row(q) = s0.segment(static_cast<Index>(q) * n, n).transpose();
    out.y.resize(T, n);
    Vector s = s0;
    for (Index t = 0; t < T; ++t) {
        Vector mean = comp.Phi.topRows(n) * s;
        if (z) mean += params.zeta * (*z)[t];
        const Vector y = noise.draw(mean, rng);
        if (Q > 1) s.tail(m - n) = s.head(m - n).eval();
        s.head(n) = y;
        out.y.row(t) = y.transpose();
    }
    return out;
}

Matrix simulate_regional(const FavarParams& params, const Matrix& y, Rng& rng) {
    const int S = params.S();
    const int K = params.K();
    if (y.cols() != S + K) throw ShapeError("simulate_regional: path width differs from S+K");
    Matrix H = y.leftCols(S) * params.LambdaF.transpose();
    if (K > 0) H.noalias() += y.rightCols(K) * params.LambdaM.transpose();
    for (Index r = 0; r < H.cols(); ++r) {
        const double sd = std::sqrt(params.sigma2[r]);
        for (Index t = 0; t < H.rows(); ++t) H(t, r) += sd * rng.normal();
    }
    return H;
}

SynthResult generate_synthetic(const SynthConfig& cfg, Rng& rng) {
    cfg.validate();
    const ModelDims& d = cfg.dims;
    const int S = d.S;
    const int K = d.K;
    const int n = S + K;
    const int R = d.R;
    const int Q = d.Q;
    const Index T = d.T;

    std::vector<std::string> agg_names = cfg.aggregate_names.empty() ? default_aggregate_names(K) : cfg.aggregate_names;
    int policy = cfg.policy_aggregate;
    if (policy < 0) {
        const auto it = std::find(agg_names.begin(), agg_names.end(), "GS1");
        policy = it != agg_names.end() ? static_cast<int>(it - agg_names.begin()) : K - 1;
    }
    const int policy_var = S + policy;

    FavarParams p;
    p.A.resize(n, static_cast<Index>(n) * Q);
    for (int q = 0; q < Q; ++q)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                p.A(i, static_cast<Index>(q) * n + j) = cfg.cross_sd * rng.normal() + (q == 0 && i == j ? cfg.own_lag : 0.0);
    // Scaling lag block q by c^q scales every companion eigenvalue by c.
    bool stable = false;
    for (int attempt = 0; attempt < 50; ++attempt) {
        const double rho = spectral_radius(build_companion(p.A, n, Q).Phi);
        if (rho <= cfg.target_radius) {
            stable = true;
            break;
        }
        const double c = cfg.target_radius / rho * (1.0 - 1e-9);
        double ck = 1.0;
        for (int q = 0; q < Q; ++q) {
            ck *= c;
            p.A.middleCols(static_cast<Index>(q) * n, n) *= ck;
        }
    }
    if (!stable) throw ConfigError("synthetic config: could not rescale the VAR to a stable system");

    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.3 + 0.5 * rng.uniform());
    for (int k = 0; k < K; ++k) {
        const std::string& nm = agg_names[static_cast<std::size_t>(k)];
        if (nm == "INDPRO" || nm == "HOUST" || nm == "CPIAUCSL" || nm == "T10YFF") b[S + k] = std::abs(b[S + k]);
    }
    b[policy_var] = -std::abs(b[policy_var]);

    Vector sd_e(n);
    for (int i = 0; i < n; ++i) sd_e[i] = 0.2 + 0.3 * rng.uniform();
    const double rel = cfg.relevance;
    p.zeta = rel * b;
    p.SigmaU = (1.0 - rel * rel) * b * b.transpose();
    p.SigmaU.diagonal() += sd_e.array().square().matrix();

    p.LambdaF = Matrix::Zero(R, S);
    p.LambdaF.topRows(S).setIdentity();
    p.LambdaM = Matrix::Zero(R, K);
    for (int r = S; r < R; ++r) {
        for (int s = 0; s < S; ++s) p.LambdaF(r, s) = cfg.loading_scale * rng.normal();
        for (int k = 0; k < K; ++k) p.LambdaM(r, k) = cfg.aggregate_loading_scale * rng.normal();
    }
    p.sigma2.resize(R);
    for (int r = 0; r < R; ++r) {
        const double sd = cfg.noise_scale * (cfg.meas_sd_min + (cfg.meas_sd_max - cfg.meas_sd_min) * rng.uniform());
        p.sigma2[r] = sd * sd;
    }

    // Structural simulation: u_t = b eps_t + e_t, z_t = rel eps_t + sqrt(1 - rel^2) eta_t.
    const Index total = cfg.burn_in + T;
    const Index m = static_cast<Index>(n) * Q;
    const double zn = std::sqrt(std::max(0.0, 1.0 - rel * rel));
    Matrix Y(total, n);
    Vector eps(total);
    Vector zfull(total);
    Matrix innov(total, n);
    Vector s = Vector::Zero(m);
    for (Index t = 0; t < total; ++t) {
        eps[t] = rng.normal();
        zfull[t] = rel * eps[t] + zn * rng.normal();
        Vector u = b * eps[t];
        for (int i = 0; i < n; ++i) u[i] += sd_e[i] * rng.normal();
        innov.row(t) = (u - p.zeta * zfull[t]).transpose();
        const Vector y = p.A * s + u;
        if (Q > 1) s.tail(m - n) = s.head(m - n).eval();
        s.head(n) = y;
        Y.row(t) = y.transpose();
    }

    SynthResult out;
    const Index b0 = cfg.burn_in;
    const Matrix y = Y.bottomRows(T);
    out.presample.resize(Q, n);
    for (int q = 0; q < Q; ++q) out.presample.row(q) = Y.row(b0 - 1 - q);
    out.factors = y.leftCols(S);
    out.shocks = eps.tail(T);
    out.innovations = innov.bottomRows(T);
    out.impact = b;
    out.relative_impact = b * (kPolicyImpact / b[policy_var]);
    out.relative_impact[policy_var] = kPolicyImpact;

    PanelData& data = out.data;
    data.H = simulate_regional(p, y, rng);
    data.M = y.rightCols(K);
    data.z = Vector(zfull.tail(T));
    for (Index t = 0; t < T; ++t) data.time_index.push_back(month_label(2000, 1, t));
    for (int r = 0; r < R; ++r) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "region_%03d", r + 1);
        data.regional_names.emplace_back(buf);
    }
    data.aggregate_names = agg_names;
    data.proxy_name = "proxy";
    data.policy_index = policy;
    out.truth = std::move(p);
    return out;
}

}  // namespace favar
