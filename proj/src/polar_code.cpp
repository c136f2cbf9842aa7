#include "polar/polar_code.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace polar {

std::string format_bits(const BitVec& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

BitVec parse_bits(std::string_view text) {
    BitVec bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            throw std::invalid_argument("unexpected character in bit string");
        }
    }
    return bits;
}

std::vector<std::uint32_t> PolarCodeSpec::info_indices() const {
    std::vector<std::uint32_t> idx;
    idx.reserve(info_length);
    for (std::uint32_t i = 0; i < block_length; ++i)
        if (!frozen_mask[i]) idx.push_back(i);
    return idx;
}

std::size_t PolarCodeSpec::good_count() const {
    return static_cast<std::size_t>(std::count(good_mask.begin(), good_mask.end(), 1));
}

void PolarCodeSpec::validate() const {
    if (block_length != (std::size_t{1} << n))
        throw std::invalid_argument("block length is not 2^n");
    if (frozen_mask.size() != block_length || good_mask.size() != block_length)
        throw std::invalid_argument("mask length mismatch");
    std::size_t unfrozen =
        block_length - static_cast<std::size_t>(
                           std::count(frozen_mask.begin(), frozen_mask.end(), 1));
    if (unfrozen != info_length)
        throw std::invalid_argument("frozen mask does not leave K information bits");
    if (reliability_order.size() != block_length)
        throw std::invalid_argument("reliability order length mismatch");
    BitVec seen(block_length, 0);
    for (auto i : reliability_order) {
        if (i >= block_length || seen[i]) throw std::invalid_argument("reliability order is not a permutation");
        seen[i] = 1;
    }
    for (std::size_t i = 0; i < info_length; ++i)
        if (frozen_mask[reliability_order[i]])
            throw std::invalid_argument("information set is not the K most reliable channels");
    for (std::size_t i = 0; i < block_length; ++i)
        if (good_mask[i] && frozen_mask[i])
            throw std::invalid_argument("good bit marked on a frozen channel");
}

std::vector<std::uint32_t> bit_reversal_permutation(unsigned exponent) {
    std::size_t size = std::size_t{1} << exponent;
    std::vector<std::uint32_t> perm(size);
    for (std::size_t i = 0; i < size; ++i) {
        std::uint32_t r = 0;
        for (unsigned b = 0; b < exponent; ++b)
            r |= ((i >> b) & 1u) << (exponent - 1 - b);
        perm[i] = r;
    }
    return perm;
}

void kernel_transform(std::span<std::uint8_t> u) {
    const std::size_t size = u.size();
    if (!is_power_of_two(size)) throw std::invalid_argument("length is not a power of two");
    for (std::size_t half = 1; half < size; half <<= 1)
        for (std::size_t block = 0; block < size; block += 2 * half)
            for (std::size_t j = 0; j < half; ++j)
                u[block + j] ^= u[block + half + j];
}

BitVec polar_transform(const BitVec& u) {
    if (!is_power_of_two(u.size())) throw std::invalid_argument("length is not a power of two");
    BitVec buf = u;
    kernel_transform(buf);
    const auto rev = bit_reversal_permutation(log2_exact(u.size()));
    BitVec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = buf[rev[i]];
    return out;
}

BitVec encode(const BitVec& payload, const PolarCodeSpec& code) {
    if (payload.size() != code.info_length)
        throw std::invalid_argument("payload length does not match K");
    BitVec u(code.block_length, 0);
    std::size_t next = 0;
    for (std::size_t i = 0; i < code.block_length; ++i)
        if (!code.frozen_mask[i]) u[i] = payload[next++];
    return polar_transform(u);
}

namespace {

// Bhattacharyya parameter recursion: the upper branch degrades (2Z - Z^2),
// the lower improves (Z^2); MSB of the channel index decides first.
void bhattacharyya_rec(double z, std::size_t index, std::size_t half, std::vector<double>& out) {
    if (half == 0) {
        out[index] = z;
        return;
    }
    bhattacharyya_rec(2.0 * z - z * z, index, half / 2, out);
    bhattacharyya_rec(z * z, index + half, half / 2, out);
}

// log phi(x) for the mean-LLR density evolution, phi(0)=1 decreasing to 0.
// Piecewise approximation standard for this construction.
double log_phi(double x) {
    if (x <= 0) return 0.0;
    if (x < 10.0) return 0.0218 - 0.4527 * std::pow(x, 0.86);
    return 0.5 * (std::log(M_PI) - std::log(x)) - 0.25 * x + std::log1p(-10.0 / (7.0 * x));
}

// Inverse of log_phi by bisection; log_phi is strictly decreasing.
double log_phi_inv(double target) {
    double lo = 1e-12, hi = 1e9;
    if (target >= log_phi(lo)) return lo;
    if (target <= log_phi(hi)) return hi;
    for (int it = 0; it < 200; ++it) {
        double mid = std::sqrt(lo * hi);  // bisect in log scale
        if (log_phi(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(lo * hi);
}

// Mean-LLR recursion: check branch phi^-1(1-(1-phi(m))^2), variable branch 2m.
void gaussian_rec(double mean, std::size_t index, std::size_t half, std::vector<double>& out) {
    if (half == 0) {
        out[index] = mean;
        return;
    }
    double lp = log_phi(mean);
    // log(1 - (1-phi)^2) = log(phi) + log(2 - phi), stable for tiny phi
    double phi = std::exp(lp);
    double worse = log_phi_inv(lp + std::log(2.0 - phi));
    gaussian_rec(worse, index, half / 2, out);
    gaussian_rec(2.0 * mean, index + half, half / 2, out);
}

}  // namespace

ReliabilityProfile construct_reliability(ConstructionMethod method, std::size_t block_length,
                                         double design_param) {
    if (!is_power_of_two(block_length))
        throw std::invalid_argument("block length is not a power of two");
    ReliabilityProfile profile;
    profile.method = method;
    profile.design_param = design_param;
    profile.scores.resize(block_length);
    switch (method) {
        case ConstructionMethod::Bhattacharyya: {
            std::vector<double> z(block_length);
            bhattacharyya_rec(design_param, 0, block_length / 2, z);
            for (std::size_t i = 0; i < block_length; ++i) profile.scores[i] = -z[i];
            break;
        }
        case ConstructionMethod::GaussianApprox: {
            // design Eb/N0 in dB at the nominal rate 1/2
            double sigma_sq = 1.0 / (2.0 * 0.5 * std::pow(10.0, design_param / 10.0));
            gaussian_rec(2.0 / sigma_sq, 0, block_length / 2, profile.scores);
            break;
        }
        case ConstructionMethod::Imported:
            throw std::invalid_argument("imported construction needs a reliability file");
    }
    return profile;
}

ReliabilityProfile load_reliability_file(const std::filesystem::path& path,
                                         std::size_t block_length) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reliability file: " + path.string());
    ReliabilityProfile profile;
    profile.method = ConstructionMethod::Imported;
    profile.scores.assign(block_length, 0.0);
    BitVec seen(block_length, 0);
    std::string line;
    std::size_t rank = 0;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::size_t idx = 0;
        try {
            idx = std::stoull(line.substr(first));
        } catch (const std::exception&) {
            throw std::runtime_error("malformed reliability file line: " + line);
        }
        if (idx >= block_length) throw std::runtime_error("reliability index out of range");
        if (seen[idx]) throw std::runtime_error("duplicate reliability index");
        if (rank >= block_length) throw std::runtime_error("too many reliability entries");
        seen[idx] = 1;
        profile.scores[idx] = static_cast<double>(block_length - rank);
        ++rank;
    }
    if (rank != block_length) throw std::runtime_error("reliability file is missing entries");
    return profile;
}

void save_reliability_order(const std::filesystem::path& path,
                            const std::vector<std::uint32_t>& order) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "# reliability order, most reliable first\n";
    for (auto i : order) out << i << "\n";
}

PolarCodeSpec plan_code(const ReliabilityProfile& profile, std::size_t block_length,
                        std::size_t info_length, double good_fraction) {
    if (profile.scores.size() != block_length)
        throw std::invalid_argument("profile size does not match block length");
    if (info_length > block_length) throw std::invalid_argument("K out of range");
    if (good_fraction < 0.0 || good_fraction > 1.0)
        throw std::invalid_argument("good fraction must lie in [0,1]");

    PolarCodeSpec code;
    code.n = log2_exact(block_length);
    code.block_length = block_length;
    code.info_length = info_length;
    code.reliability_order.resize(block_length);
    std::iota(code.reliability_order.begin(), code.reliability_order.end(), 0u);
    std::stable_sort(code.reliability_order.begin(), code.reliability_order.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                         if (profile.scores[a] != profile.scores[b])
                             return profile.scores[a] > profile.scores[b];
                         return a < b;
                     });

    code.frozen_mask.assign(block_length, 1);
    code.good_mask.assign(block_length, 0);
    for (std::size_t i = 0; i < info_length; ++i)
        code.frozen_mask[code.reliability_order[i]] = 0;
    // ceil(good_fraction * K), robust against binary rounding of the fraction
    double target = good_fraction * static_cast<double>(info_length);
    double nearest = std::round(target);
    std::size_t good = std::abs(target - nearest) < 1e-9
                           ? static_cast<std::size_t>(nearest)
                           : static_cast<std::size_t>(std::ceil(target));
    for (std::size_t i = 0; i < good; ++i) code.good_mask[code.reliability_order[i]] = 1;
    return code;
}

std::string construction_name(ConstructionMethod method) {
    switch (method) {
        case ConstructionMethod::GaussianApprox: return "ga";
        case ConstructionMethod::Bhattacharyya: return "bhatta";
        case ConstructionMethod::Imported: return "file";
    }
    return "?";
}

ConstructionMethod construction_from_name(const std::string& name) {
    if (name == "ga") return ConstructionMethod::GaussianApprox;
    if (name == "bhatta") return ConstructionMethod::Bhattacharyya;
    if (name == "file") return ConstructionMethod::Imported;
    throw std::invalid_argument("unknown construction: " + name);
}

}  // namespace polar
