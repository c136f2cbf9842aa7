#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polar/crc.hpp"
#include "polar/decoder.hpp"
#include "polar/polar_code.hpp"

namespace polar {

struct SimConfig {
    std::size_t block_length = 1024;
    std::size_t info_length = 528;  // incl. CRC bits
    ConstructionMethod construction = ConstructionMethod::GaussianApprox;
    double design_param = 2.0;
    std::string reliability_file;   // used when construction == Imported
    double good_fraction = 0.0;
    CrcSpec crc = default_crc16();
    DecoderConfig decoder;
    std::vector<double> ebn0_db;
    std::size_t max_frames = 100000;
    std::size_t target_frame_errors = 100;
    std::uint64_t seed = 1;
    std::size_t workers = 1;

    void validate() const;
};

struct SnrResult {
    double ebn0_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t bit_errors = 0;
    double fer = 0.0;
    double fer_lo = 0.0;   // 95% Wilson interval
    double fer_hi = 0.0;
    double ber = 0.0;
    double mean_list = 0.0;        // final attempt list size, averaged
    double mean_candidates = 0.0;  // candidates sorted per group, averaged
};

struct SimResult {
    SimConfig config;
    std::vector<SnrResult> per_snr;
};

// 95% Wilson score interval for errors/frames.
std::pair<double, double> confidence_interval(std::uint64_t errors, std::uint64_t frames);

// Monte-Carlo FER/BER sweep. Per SNR point: random payloads, CRC attach,
// encode, AWGN, decode, compare; stops at target_frame_errors or max_frames.
// Frame i always uses the generator derived from (seed, i), so results do
// not depend on the worker count.
SimResult run_sweep(const SimConfig& config, std::ostream* progress = nullptr);

std::string results_csv(const SimResult& result);
void write_results_csv(const std::filesystem::path& path, const SimResult& result);
void write_results_json(const std::filesystem::path& path, const SimResult& result);

SimConfig sim_config_from_json_file(const std::filesystem::path& path);
std::string sim_config_to_json(const SimConfig& config);

}  // namespace polar
