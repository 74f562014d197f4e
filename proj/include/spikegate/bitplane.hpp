#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spikegate/format.hpp"

namespace spikegate {

// Spatially encoded tensor: plane p holds bit (width-1-p) of every element,
// so plane 0 is the sign. Each plane is packed 64 elements per word.
class BitPlaneTensor {
public:
    BitPlaneTensor() = default;
    BitPlaneTensor(Precision format, std::size_t elements);

    Precision format() const { return format_; }
    unsigned width() const { return width_; }
    std::size_t size() const { return elements_; }
    std::size_t words_per_plane() const { return words_; }

    std::uint64_t* plane(unsigned p) { return data_.data() + p * words_; }
    const std::uint64_t* plane(unsigned p) const { return data_.data() + p * words_; }
    // Plane carrying bit significance b (b=0 is the LSB).
    std::uint64_t* bit(unsigned b) { return plane(width_ - 1 - b); }
    const std::uint64_t* bit(unsigned b) const { return plane(width_ - 1 - b); }

    bool spike(unsigned p, std::size_t element) const {
        return (plane(p)[element / 64] >> (element % 64)) & 1;
    }

    bool operator==(const BitPlaneTensor& o) const {
        return format_ == o.format_ && elements_ == o.elements_ && data_ == o.data_;
    }

private:
    Precision format_ = Precision::FP32;
    unsigned width_ = 32;
    std::size_t elements_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
};

// Bit reinterpretation in both directions; no rounding happens here.
BitPlaneTensor encode(std::span<const std::uint64_t> patterns, Precision format);
BitPlaneTensor encode(std::span<const float> values);
BitPlaneTensor encode(std::span<const double> values);
std::vector<std::uint64_t> decode(const BitPlaneTensor& t);
std::vector<float> decode_f32(const BitPlaneTensor& t);
std::vector<double> decode_f64(const BitPlaneTensor& t);

std::vector<std::uint64_t> to_patterns(std::span<const float> values);
std::vector<float> to_floats(std::span<const std::uint64_t> patterns);

}  // namespace spikegate
