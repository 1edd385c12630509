#include "favar/chain_io.hpp"

#include "favar/error.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>

namespace favar {

static_assert(std::endian::native == std::endian::little, "chain containers are written in native little-endian order");

namespace {

template <class T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in, const std::string& what) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("truncated file while reading " + what);
    return v;
}

void append_block(std::vector<double>& out, const double* p, Index n) { out.insert(out.end(), p, p + n); }

void read_block(const double*& src, double* dst, Index n) {
    std::memcpy(dst, src, static_cast<std::size_t>(n) * sizeof(double));
    src += n;
}

nlohmann::json dims_json(const ModelDims& d) {
    return {{"R", d.R}, {"S", d.S}, {"K", d.K}, {"Q", d.Q}, {"T", d.T}, {"H_max", d.H_max}};
}

ModelDims dims_from(const nlohmann::json& j) {
    ModelDims d;
    d.R = j.at("R").get<int>();
    d.S = j.at("S").get<int>();
    d.K = j.at("K").get<int>();
    d.Q = j.at("Q").get<int>();
    d.T = j.at("T").get<int>();
    d.H_max = j.at("H_max").get<int>();
    return d;
}

std::string read_magic_header(std::istream& in, const char (&magic)[8], const std::string& path, std::uint64_t* end) {
    char buf[8];
    in.read(buf, 8);
    if (!in || std::memcmp(buf, magic, 8) != 0) throw DataError(path + ": not a recognised container");
    const auto version = get<std::uint32_t>(in, "version");
    if (version != kChainVersion) throw DataError(path + ": unsupported container version " + std::to_string(version));
    const auto len = get<std::uint64_t>(in, "header length");
    std::string header(len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(len));
    if (!in) throw DataError(path + ": truncated header");
    if (end) *end = 8 + 4 + 8 + len;
    return header;
}

}  // namespace

Index ChainLayout::param_doubles() const {
    const Index n = dims.n_vars();
    return static_cast<Index>(dims.R) * n + dims.R + n * n * dims.Q + n + n * n;
}

Index ChainLayout::shrinkage_doubles() const { return dims.J_total(has_proxy) + 1 + dims.L() + 1; }

Index ChainLayout::factor_doubles() const { return store_factors ? static_cast<Index>(dims.T) * dims.S : 0; }

std::vector<double> pack_record(const SamplerState& st, const ChainLayout& layout) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(layout.record_doubles()));
    const FavarParams& p = st.params;
    append_block(out, p.LambdaF.data(), p.LambdaF.size());
    append_block(out, p.LambdaM.data(), p.LambdaM.size());
    append_block(out, p.sigma2.data(), p.sigma2.size());
    append_block(out, p.A.data(), p.A.size());
    append_block(out, p.zeta.data(), p.zeta.size());
    append_block(out, p.SigmaU.data(), p.SigmaU.size());
    append_block(out, st.shrink.tau2_a.data(), st.shrink.tau2_a.size());
    out.push_back(st.shrink.xi_a);
    append_block(out, st.shrink.tau2_lambda.data(), st.shrink.tau2_lambda.size());
    out.push_back(st.shrink.xi_lambda);
    if (layout.store_factors) append_block(out, st.factors.data(), st.factors.size());
    if (static_cast<Index>(out.size()) != layout.record_doubles())
        throw ShapeError("pack_record: sampler state does not match the chain layout");
    return out;
}

void unpack_record(const double* rec, const ChainLayout& layout, FavarParams& p, ShrinkageState& sh, Matrix* factors) {
    const ModelDims& d = layout.dims;
    const int n = d.n_vars();
    p.LambdaF.resize(d.R, d.S);
    p.LambdaM.resize(d.R, d.K);
    p.sigma2.resize(d.R);
    p.A.resize(n, static_cast<Index>(n) * d.Q);
    p.zeta.resize(n);
    p.SigmaU.resize(n, n);
    read_block(rec, p.LambdaF.data(), p.LambdaF.size());
    read_block(rec, p.LambdaM.data(), p.LambdaM.size());
    read_block(rec, p.sigma2.data(), p.sigma2.size());
    read_block(rec, p.A.data(), p.A.size());
    read_block(rec, p.zeta.data(), p.zeta.size());
    read_block(rec, p.SigmaU.data(), p.SigmaU.size());
    sh.tau2_a.resize(d.J_total(layout.has_proxy));
    sh.tau2_lambda.resize(d.L());
    read_block(rec, sh.tau2_a.data(), sh.tau2_a.size());
    sh.xi_a = *rec++;
    read_block(rec, sh.tau2_lambda.data(), sh.tau2_lambda.size());
    sh.xi_lambda = *rec++;
    if (layout.store_factors && factors) {
        factors->resize(d.T, d.S);
        read_block(rec, factors->data(), factors->size());
    }
}

nlohmann::json ChainHeader::to_json() const {
    return {{"format", "favar-chain"},
            {"dims", dims_json(layout.dims)},
            {"has_proxy", layout.has_proxy},
            {"store_factors", layout.store_factors},
            {"seed", seed},
            {"config_hash", config_hash},
            {"data_checksum", data_checksum},
            {"n_draws", n_draws},
            {"n_burn", n_burn},
            {"thin", thin},
            {"layout",
             {{"record_doubles", layout.record_doubles()},
              {"params", layout.param_doubles()},
              {"shrinkage", layout.shrinkage_doubles()},
              {"factors", layout.factor_doubles()},
              {"order",
               {"LambdaF", "LambdaM", "sigma2", "A", "zeta", "SigmaU", "tau2_a", "xi_a", "tau2_lambda", "xi_lambda",
                "factors"}}}}};
}

ChainHeader ChainHeader::from_json(const nlohmann::json& j) {
    try {
        ChainHeader h;
        h.layout.dims = dims_from(j.at("dims"));
        h.layout.has_proxy = j.at("has_proxy").get<bool>();
        h.layout.store_factors = j.at("store_factors").get<bool>();
        h.seed = j.at("seed").get<std::uint64_t>();
        h.config_hash = j.at("config_hash").get<std::string>();
        h.data_checksum = j.at("data_checksum").get<std::string>();
        h.n_draws = j.at("n_draws").get<long>();
        h.n_burn = j.at("n_burn").get<long>();
        h.thin = j.at("thin").get<long>();
        if (j.at("layout").at("record_doubles").get<Index>() != h.layout.record_doubles())
            throw DataError("chain header: record size disagrees with dimensions");
        return h;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("chain header: ") + e.what());
    }
}

ChainWriter::ChainWriter(const std::string& path, const ChainHeader& header, long resume_records)
    : path_(path), header_(header) {
    const std::string hdr = header.to_json().dump();
    count_offset_ = 8 + 4 + 8 + hdr.size();
    if (resume_records < 0) {
        std::ofstream create(path, std::ios::binary | std::ios::trunc);
        if (!create) throw DataError("cannot create chain file '" + path + "'");
        create.write(kChainMagic, 8);
        put(create, kChainVersion);
        put(create, static_cast<std::uint64_t>(hdr.size()));
        create.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
        put(create, std::uint64_t{0});
        if (!create) throw DataError("write failed for '" + path + "'");
    } else {
        const ChainHeader existing = read_chain_header(path);
        if (existing.to_json() != header.to_json())
            throw DataError(path + ": existing chain header does not match the run being resumed");
        const auto rec_bytes = static_cast<std::uintmax_t>(8 + 8 * header.layout.record_doubles());
        const std::uintmax_t keep = count_offset_ + 8 + rec_bytes * static_cast<std::uintmax_t>(resume_records);
        if (std::filesystem::file_size(path) < keep) throw DataError(path + ": shorter than the checkpoint records");
        std::filesystem::resize_file(path, keep);
        records_ = resume_records;
    }
    file_.open(path, std::ios::binary | std::ios::in | std::ios::out);
    if (!file_) throw DataError("cannot open chain file '" + path + "'");
    file_.seekp(0, std::ios::end);
    if (resume_records >= 0) sync();
}

ChainWriter::~ChainWriter() {
    try {
        if (file_.is_open()) sync();
    } catch (...) {
    }
}

void ChainWriter::append(const SamplerState& state) {
    const std::vector<double> rec = pack_record(state, header_.layout);
    put(file_, static_cast<std::uint64_t>(state.iteration));
    file_.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size() * sizeof(double)));
    if (!file_) throw DataError("write failed for '" + path_ + "'");
    ++records_;
}

void ChainWriter::sync() {
    const auto pos = file_.tellp();
    file_.seekp(static_cast<std::streamoff>(count_offset_));
    put(file_, static_cast<std::uint64_t>(records_));
    file_.seekp(pos);
    file_.flush();
    if (!file_) throw DataError("write failed for '" + path_ + "'");
}

ChainHeader read_chain_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open chain file '" + path + "'");
    const std::string hdr = read_magic_header(in, kChainMagic, path, nullptr);
    try {
        return ChainHeader::from_json(nlohmann::json::parse(hdr));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path + ": malformed header: " + e.what());
    }
}

ChainFile read_chain(const std::string& path, bool load_factors, bool load_shrinkage) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open chain file '" + path + "'");
    ChainFile out;
    const std::string hdr = read_magic_header(in, kChainMagic, path, nullptr);
    out.header = ChainHeader::from_json(nlohmann::json::parse(hdr));
    const auto count = get<std::uint64_t>(in, "record count");
    const ChainLayout& L = out.header.layout;
    out.chain.dims = L.dims;
    out.chain.has_proxy = L.has_proxy;
    out.chain.draws.reserve(count);

    std::vector<double> rec(static_cast<std::size_t>(L.record_doubles()));
    for (std::uint64_t i = 0; i < count; ++i) {
        out.iterations.push_back(static_cast<long>(get<std::uint64_t>(in, "record")));
        in.read(reinterpret_cast<char*>(rec.data()), static_cast<std::streamsize>(rec.size() * sizeof(double)));
        if (!in) throw DataError(path + ": truncated at record " + std::to_string(i));
        FavarParams p;
        ShrinkageState sh;
        Matrix f;
        unpack_record(rec.data(), L, p, sh, load_factors ? &f : nullptr);
        out.chain.draws.push_back(std::move(p));
        if (load_shrinkage) out.chain.shrinkage_draws.push_back(std::move(sh));
        if (load_factors && L.store_factors) out.chain.factor_paths.push_back(std::move(f));
    }
    return out;
}

void write_checkpoint(const std::string& path, const Checkpoint& ckp) {
    const ChainLayout full{ckp.header.layout.dims, ckp.header.layout.has_proxy, true};
    nlohmann::json j = ckp.header.to_json();
    j["iteration"] = ckp.state.iteration;
    j["records_written"] = ckp.records_written;
    j["gig_chi_floored"] = ckp.state.gig_chi_floored;
    const std::string hdr = j.dump();

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write checkpoint '" + tmp + "'");
        out.write(kCheckpointMagic, 8);
        put(out, kChainVersion);
        put(out, static_cast<std::uint64_t>(hdr.size()));
        out.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
        const std::vector<double> rec = pack_record(ckp.state, full);
        out.write(reinterpret_cast<const char*>(rec.data()), static_cast<std::streamsize>(rec.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(ckp.state.presample.data()),
                  static_cast<std::streamsize>(ckp.state.presample.size() * sizeof(double)));
        out.flush();
        if (!out) throw DataError("write failed for checkpoint '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint '" + path + "'");
    const nlohmann::json j = nlohmann::json::parse(read_magic_header(in, kCheckpointMagic, path, nullptr));
    Checkpoint ckp;
    ckp.header = ChainHeader::from_json(j);
    ckp.state.iteration = j.at("iteration").get<long>();
    ckp.records_written = j.at("records_written").get<long>();
    ckp.state.gig_chi_floored = j.at("gig_chi_floored").get<long>();

    const ChainLayout full{ckp.header.layout.dims, ckp.header.layout.has_proxy, true};
    std::vector<double> rec(static_cast<std::size_t>(full.record_doubles()));
    in.read(reinterpret_cast<char*>(rec.data()), static_cast<std::streamsize>(rec.size() * sizeof(double)));
    if (!in) throw DataError(path + ": truncated checkpoint state");
    unpack_record(rec.data(), full, ckp.state.params, ckp.state.shrink, &ckp.state.factors);
    const ModelDims& d = full.dims;
    ckp.state.presample.resize(d.Q, d.n_vars());
    in.read(reinterpret_cast<char*>(ckp.state.presample.data()),
            static_cast<std::streamsize>(ckp.state.presample.size() * sizeof(double)));
    if (!in) throw DataError(path + ": truncated checkpoint presample");
    return ckp;
}

}  // namespace favar
