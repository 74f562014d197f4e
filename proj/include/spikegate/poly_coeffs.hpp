#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace spikegate {

// Frozen FP32 bit patterns; data/poly_coeffs.txt carries the same values
// with a CRC-32 (tools/derive_poly_coeffs.py regenerates both).
// e^r = 1 + r + r^2 * q(r), q = sum exp_q[i] r^i
inline constexpr std::array<std::uint32_t, 5> kExpQ = {0x3F000000, 0x3E2AAA6A, 0x3D2AAA56, 0x3C090AC4, 0x3AB6C1B5};
// sin r = r + r^3 * s(r^2)
inline constexpr std::array<std::uint32_t, 4> kSinS = {0xBE2AAAAB, 0x3C088887, 0xB9500992, 0x3636C9F1};
// cos r = 1 - r^2/2 + r^4 * c(r^2)
inline constexpr std::array<std::uint32_t, 4> kCosC = {0x3D2AAAAB, 0xBAB60B60, 0x37D00AB6, 0xB4928411};

inline constexpr std::uint32_t kInvLn2 = 0x3FB8AA3B;
inline constexpr std::uint32_t kLn2Hi = 0x3F317200;
inline constexpr std::uint32_t kLn2Lo = 0x35BFBE8E;
inline constexpr std::uint32_t kRoundMagic = 0x4B400000;  // 1.5 * 2^23
inline constexpr std::uint32_t kExpLow = 0xC2DC0000;      // -110
inline constexpr std::uint32_t kExpHigh = 0x42C80000;     // 100
inline constexpr std::uint32_t kTwoOverPi = 0x3F22F983;
// pi/2 split into 8-bit chunks: k * chunk is exact for |k| < 2^16.
inline constexpr std::array<std::uint32_t, 7> kHalfPiChunks = {0x3FC90000, 0x39FD0000, 0x35AA0000, 0x30880000,
                                                                0x2C340000, 0x27C20000, 0x22D30000};
inline constexpr std::uint32_t kGeluScale = 0x3FD9DB23;  // 1.702f

// Parses a coefficient file ("name index 0xHEX" lines then "crc32 0xHEX")
// and verifies the checksum over the body. Throws on any mismatch.
std::map<std::string, std::vector<std::uint32_t>> load_poly_coeffs(const std::string& path);

}  // namespace spikegate
