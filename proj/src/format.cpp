#include "spikegate/format.hpp"

#include <stdexcept>

namespace spikegate {

bool FpFormat::is_nan(std::uint64_t bits) const {
    return ((bits >> man_bits) & exp_mask()) == exp_mask() && (bits & man_mask()) != 0;
}

bool FpFormat::is_inf(std::uint64_t bits) const {
    return ((bits >> man_bits) & exp_mask()) == exp_mask() && (bits & man_mask()) == 0;
}

FpFormat format_of(Precision p) {
    switch (p) {
        case Precision::FP8_E4M3: return {4, 3};
        case Precision::FP16: return {5, 10};
        case Precision::FP32: return {8, 23};
        case Precision::FP64: return {11, 52};
    }
    throw std::invalid_argument("unknown precision");
}

unsigned bit_width(Precision p) { return format_of(p).width(); }

std::string precision_name(Precision p) {
    switch (p) {
        case Precision::FP8_E4M3: return "fp8";
        case Precision::FP16: return "fp16";
        case Precision::FP32: return "fp32";
        case Precision::FP64: return "fp64";
    }
    return "?";
}

Precision parse_precision(const std::string& name) {
    for (Precision p : {Precision::FP8_E4M3, Precision::FP16, Precision::FP32, Precision::FP64})
        if (precision_name(p) == name) return p;
    if (name == "fp8_e4m3" || name == "e4m3") return Precision::FP8_E4M3;
    throw std::invalid_argument("unknown format: " + name);
}

}  // namespace spikegate
