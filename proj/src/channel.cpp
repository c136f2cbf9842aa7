#include "polar/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace polar {

double noise_variance(const ChannelParams& params) {
    if (params.code_rate <= 0.0 || params.code_rate > 1.0)
        throw std::invalid_argument("code rate must lie in (0,1]");
    return 1.0 / (2.0 * params.code_rate * std::pow(10.0, params.ebn0_db / 10.0));
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ull * (index + 1));
    std::uint64_t mixed = splitmix64(state);
    return splitmix64(state) ^ mixed;
}

double GaussianSampler::operator()() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller: u1 in (0,1], u2 in [0,1)
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    constexpr double k2p64 = 18446744073709551616.0;
    double u1 = (static_cast<double>(engine_()) + 1.0) / k2p64;
    double u2 = static_cast<double>(engine_()) / k2p64;
    double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return radius * std::cos(kTwoPi * u2);
}

std::vector<double> transmit(const BitVec& codeword, const ChannelParams& params) {
    if (codeword.empty()) throw std::invalid_argument("codeword is empty");
    const double sigma_sq = noise_variance(params);
    const double sigma = std::sqrt(sigma_sq);
    GaussianSampler noise(params.seed);
    std::vector<double> llrs(codeword.size());
    for (std::size_t i = 0; i < codeword.size(); ++i) {
        double symbol = 1.0 - 2.0 * static_cast<double>(codeword[i]);
        double received = symbol + sigma * noise();
        llrs[i] = 2.0 * received / sigma_sq;
    }
    return llrs;
}

}  // namespace polar
