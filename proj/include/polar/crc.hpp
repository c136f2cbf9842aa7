#pragma once

#include <cstdint>
#include <string>

#include "polar/bits.hpp"

namespace polar {

struct CrcSpec {
    unsigned width = 16;              // one of 8, 16, 24, 32
    std::uint32_t polynomial = 0x1021;// without the leading 1
    std::uint32_t initial = 0xFFFF;
    std::uint32_t final_xor = 0;
    bool reflect_in = false;          // per-byte input bit reversal
    bool reflect_out = false;

    void validate() const;
};

// CRC-16/CCITT-FALSE; check value over ASCII "123456789" is 0x29B1.
inline CrcSpec default_crc16() { return CrcSpec{}; }

// Checksum of a 0/1 bit sequence, bit-at-a-time MSB-first division.
std::uint32_t crc_checksum(const BitVec& message, const CrcSpec& spec);

// message ++ checksum bits (checksum MSB first).
BitVec crc_attach(const BitVec& message, const CrcSpec& spec);

// True iff the trailing width bits equal the checksum of the prefix.
// Throws if bits.size() <= spec.width.
bool crc_check(const BitVec& bits, const CrcSpec& spec);

// Parses "width:poly:init", e.g. "16:0x1021:0xFFFF".
CrcSpec parse_crc_arg(const std::string& arg);
std::string crc_arg_string(const CrcSpec& spec);

}  // namespace polar
