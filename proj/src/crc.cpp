#include "polar/crc.hpp"

#include <sstream>
#include <stdexcept>

namespace polar {

namespace {

std::uint32_t width_mask(unsigned width) {
    return width == 32 ? 0xFFFFFFFFu : ((1u << width) - 1u);
}

std::uint32_t reflect_value(std::uint32_t value, unsigned width) {
    std::uint32_t out = 0;
    for (unsigned i = 0; i < width; ++i)
        out |= ((value >> i) & 1u) << (width - 1 - i);
    return out;
}

}  // namespace

void CrcSpec::validate() const {
    if (width != 8 && width != 16 && width != 24 && width != 32)
        throw std::invalid_argument("CRC width must be 8, 16, 24 or 32");
    if (width < 32 && polynomial > width_mask(width))
        throw std::invalid_argument("CRC polynomial does not fit the width");
}

std::uint32_t crc_checksum(const BitVec& message, const CrcSpec& spec) {
    spec.validate();
    if (spec.reflect_in && message.size() % 8 != 0)
        throw std::invalid_argument("input reflection needs a byte-aligned message");

    const std::uint32_t mask = width_mask(spec.width);
    std::uint32_t reg = spec.initial & mask;
    auto feed = [&](std::uint8_t bit) {
        std::uint32_t top = (reg >> (spec.width - 1)) & 1u;
        reg = (reg << 1) & mask;
        if (top ^ bit) reg ^= spec.polynomial;
    };
    if (spec.reflect_in) {
        for (std::size_t byte = 0; byte < message.size(); byte += 8)
            for (std::size_t j = 0; j < 8; ++j) feed(message[byte + 7 - j]);
    } else {
        for (auto bit : message) feed(bit);
    }
    if (spec.reflect_out) reg = reflect_value(reg, spec.width);
    return (reg ^ spec.final_xor) & mask;
}

BitVec crc_attach(const BitVec& message, const CrcSpec& spec) {
    if (message.empty()) throw std::invalid_argument("message is empty");
    std::uint32_t sum = crc_checksum(message, spec);
    BitVec out = message;
    for (unsigned i = 0; i < spec.width; ++i)
        out.push_back(static_cast<std::uint8_t>((sum >> (spec.width - 1 - i)) & 1u));
    return out;
}

bool crc_check(const BitVec& bits, const CrcSpec& spec) {
    if (bits.size() <= spec.width)
        throw std::invalid_argument("bit sequence is shorter than the CRC");
    BitVec message(bits.begin(), bits.end() - spec.width);
    std::uint32_t sum = crc_checksum(message, spec);
    for (unsigned i = 0; i < spec.width; ++i) {
        std::uint8_t expected = (sum >> (spec.width - 1 - i)) & 1u;
        if (bits[message.size() + i] != expected) return false;
    }
    return true;
}

CrcSpec parse_crc_arg(const std::string& arg) {
    CrcSpec spec;
    std::istringstream in(arg);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw std::invalid_argument("expected width:poly:init");
    try {
        spec.width = static_cast<unsigned>(std::stoul(parts[0], nullptr, 0));
        spec.polynomial = static_cast<std::uint32_t>(std::stoul(parts[1], nullptr, 0));
        spec.initial = static_cast<std::uint32_t>(std::stoul(parts[2], nullptr, 0));
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed CRC argument: " + arg);
    }
    spec.validate();
    return spec;
}

std::string crc_arg_string(const CrcSpec& spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%u:0x%X:0x%X", spec.width, spec.polynomial, spec.initial);
    return buf;
}

}  // namespace polar
