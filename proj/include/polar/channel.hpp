#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "polar/bits.hpp"

namespace polar {

struct ChannelParams {
    double ebn0_db = 0.0;
    double code_rate = 0.5;
    std::uint64_t seed = 0;
};

// sigma^2 = 1 / (2 * R * 10^(EbN0/10)) for unit-energy BPSK.
double noise_variance(const ChannelParams& params);

// bit b -> symbol 1-2b, AWGN of variance sigma^2, LLR_i = 2*y_i/sigma^2.
// Positive LLR favors bit 0. Identical (seed, codeword, params) give
// identical output.
std::vector<double> transmit(const BitVec& codeword, const ChannelParams& params);

// splitmix64 step; the de-facto standard 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t& state);

// Stream seed for item `index` under a master seed, used to give every
// simulation frame its own generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Box-Muller over mt19937_64: deterministic across standard libraries.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}
    double operator()();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace polar
