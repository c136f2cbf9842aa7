#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "polar/bits.hpp"

namespace polar {

// Static definition of one polar code: block size, frozen set and the
// good/bad partition of the information set.
struct PolarCodeSpec {
    unsigned n = 0;                               // block length exponent
    std::size_t block_length = 0;                 // N = 2^n
    std::size_t info_length = 0;                  // K, information bits incl. CRC
    BitVec frozen_mask;                           // length N, 1 = frozen
    BitVec good_mask;                             // length N, 1 = good information bit
    std::vector<std::uint32_t> reliability_order; // most reliable first

    bool is_frozen(std::size_t i) const { return frozen_mask[i] != 0; }
    bool is_good(std::size_t i) const { return good_mask[i] != 0; }

    // Information indices in ascending order.
    std::vector<std::uint32_t> info_indices() const;
    std::size_t good_count() const;

    // Throws std::invalid_argument if any structural invariant is broken.
    void validate() const;
};

enum class ConstructionMethod { GaussianApprox, Bhattacharyya, Imported };

struct ReliabilityProfile {
    std::vector<double> scores;  // larger = more reliable
    ConstructionMethod method = ConstructionMethod::GaussianApprox;
    double design_param = 0.0;   // design Eb/N0 in dB, or erasure probability
};

std::vector<std::uint32_t> bit_reversal_permutation(unsigned exponent);

// In-place u * F^{xn} over GF(2), natural order (no bit-reversal).
void kernel_transform(std::span<std::uint8_t> u);

// x = u * B_N * F^{xn}. Throws if the length is not a power of two.
BitVec polar_transform(const BitVec& u);

// Places payload at the information indices (ascending), zeros elsewhere,
// then applies polar_transform.
BitVec encode(const BitVec& payload, const PolarCodeSpec& code);

// Deterministic reliability scores for the N synthesized channels.
//   Bhattacharyya: design_param = erasure probability, score = -Z
//   GaussianApprox: design_param = design Eb/N0 in dB at rate 1/2, score = mean LLR
ReliabilityProfile construct_reliability(ConstructionMethod method, std::size_t block_length,
                                         double design_param);

// Reads a reliability order file: one channel index per line, most reliable
// first, N lines total; lines starting with '#' are ignored.
ReliabilityProfile load_reliability_file(const std::filesystem::path& path,
                                         std::size_t block_length);

void save_reliability_order(const std::filesystem::path& path,
                            const std::vector<std::uint32_t>& order);

// Freezes the N-K least reliable channels and marks the ceil(good_fraction*K)
// most reliable information channels as good. Ties break by ascending index.
PolarCodeSpec plan_code(const ReliabilityProfile& profile, std::size_t block_length,
                        std::size_t info_length, double good_fraction);

std::string construction_name(ConstructionMethod method);
ConstructionMethod construction_from_name(const std::string& name);

}  // namespace polar
