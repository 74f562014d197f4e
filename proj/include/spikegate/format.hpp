#pragma once

#include <cstdint>
#include <string>

namespace spikegate {

enum class Precision { FP8_E4M3, FP16, FP32, FP64 };

// Generic binary floating-point layout: 1 sign, E exponent, M mantissa bits,
// IEEE conventions (bias 2^(E-1)-1, all-ones exponent for Inf/NaN).
struct FpFormat {
    unsigned exp_bits;
    unsigned man_bits;

    unsigned width() const { return 1 + exp_bits + man_bits; }
    int bias() const { return (1 << (exp_bits - 1)) - 1; }
    std::uint64_t exp_mask() const { return (1ULL << exp_bits) - 1; }
    std::uint64_t man_mask() const { return (1ULL << man_bits) - 1; }
    std::uint64_t sign_bit() const { return 1ULL << (exp_bits + man_bits); }
    std::uint64_t quiet_nan() const {
        return (exp_mask() << man_bits) | (1ULL << (man_bits - 1));
    }
    std::uint64_t infinity() const { return exp_mask() << man_bits; }

    bool is_nan(std::uint64_t bits) const;
    bool is_inf(std::uint64_t bits) const;
    bool operator==(const FpFormat&) const = default;
};

FpFormat format_of(Precision p);
unsigned bit_width(Precision p);
std::string precision_name(Precision p);
Precision parse_precision(const std::string& name);

}  // namespace spikegate
