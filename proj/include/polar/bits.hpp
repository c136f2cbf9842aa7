#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace polar {

// Bit vectors are plain byte vectors holding 0/1 values.
using BitVec = std::vector<std::uint8_t>;

inline bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

inline unsigned log2_exact(std::size_t x) {
    unsigned n = 0;
    while ((std::size_t{1} << n) < x) ++n;
    return n;
}

std::string format_bits(const BitVec& bits);
BitVec parse_bits(std::string_view text);

}  // namespace polar
