#pragma once

#include "favar/gibbs.hpp"
#include "favar/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace favar {

/**
 * Chain container, version 1 (all integers and doubles little-endian):
 *
 *   "FAVARCHN"  8 bytes
 *   version     u32
 *   header_len  u64, then header_len bytes of JSON (dims, seed, hashes, layout)
 *   n_records   u64
 *   records     n_records x (u64 iteration, record_doubles x f64)
 *
 * A record holds, column-major: LambdaF, LambdaM, sigma2, A, zeta, SigmaU,
 * then tau2_a, xi_a, tau2_lambda, xi_lambda, then the T x S factor path when
 * factors are stored.
 */
inline constexpr char kChainMagic[8] = {'F', 'A', 'V', 'A', 'R', 'C', 'H', 'N'};
inline constexpr char kCheckpointMagic[8] = {'F', 'A', 'V', 'A', 'R', 'C', 'K', 'P'};
inline constexpr std::uint32_t kChainVersion = 1;

struct ChainLayout {
    ModelDims dims;
    bool has_proxy = false;
    bool store_factors = true;

    [[nodiscard]] Index param_doubles() const;
    [[nodiscard]] Index shrinkage_doubles() const;
    [[nodiscard]] Index factor_doubles() const;
    [[nodiscard]] Index record_doubles() const { return param_doubles() + shrinkage_doubles() + factor_doubles(); }
};

std::vector<double> pack_record(const SamplerState& state, const ChainLayout& layout);
void unpack_record(const double* rec, const ChainLayout& layout, FavarParams& params, ShrinkageState& shrink,
                   Matrix* factors);

struct ChainHeader {
    ChainLayout layout;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string data_checksum;
    long n_draws = 0;
    long n_burn = 0;
    long thin = 1;

    [[nodiscard]] nlohmann::json to_json() const;
    static ChainHeader from_json(const nlohmann::json& j);
};

class ChainWriter {
public:
    /// Creates a new container, or with `resume_records` >= 0 reopens an
    /// existing one whose header must match and truncates it to that many records.
    ChainWriter(const std::string& path, const ChainHeader& header, long resume_records = -1);
    ~ChainWriter();
    ChainWriter(const ChainWriter&) = delete;
    ChainWriter& operator=(const ChainWriter&) = delete;

    void append(const SamplerState& state);
    /// Writes the record count and flushes to disk.
    void sync();
    [[nodiscard]] long records() const noexcept { return records_; }

private:
    std::string path_;
    ChainHeader header_;
    std::fstream file_;
    std::uint64_t count_offset_ = 0;
    long records_ = 0;
};

struct ChainFile {
    ChainHeader header;
    ChainOutput chain;
    std::vector<long> iterations;
};

ChainFile read_chain(const std::string& path, bool load_factors = true, bool load_shrinkage = true);
ChainHeader read_chain_header(const std::string& path);

struct Checkpoint {
    ChainHeader header;
    SamplerState state;
    long records_written = 0;
};

/// Atomic replace: written to `path`.tmp, then renamed.
void write_checkpoint(const std::string& path, const Checkpoint& ckp);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace favar
