#include "spikegate/bitplane.hpp"

#include <bit>
#include <stdexcept>

namespace spikegate {

BitPlaneTensor::BitPlaneTensor(Precision format, std::size_t elements)
    : format_(format),
      width_(bit_width(format)),
      elements_(elements),
      words_((elements + 63) / 64),
      data_(static_cast<std::size_t>(width_) * words_, 0) {}

BitPlaneTensor encode(std::span<const std::uint64_t> patterns, Precision format) {
    BitPlaneTensor t(format, patterns.size());
    const unsigned width = t.width();
    const std::uint64_t limit = width == 64 ? ~0ULL : (1ULL << width) - 1;
    for (std::size_t j = 0; j < patterns.size(); ++j) {
        std::uint64_t x = patterns[j];
        if (x & ~limit) throw std::invalid_argument("pattern wider than format");
        const std::uint64_t bit = 1ULL << (j % 64);
        const std::size_t w = j / 64;
        while (x) {
            unsigned b = static_cast<unsigned>(std::countr_zero(x));
            t.bit(b)[w] |= bit;
            x &= x - 1;
        }
    }
    return t;
}

BitPlaneTensor encode(std::span<const float> values) {
    return encode(to_patterns(values), Precision::FP32);
}

BitPlaneTensor encode(std::span<const double> values) {
    std::vector<std::uint64_t> p(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) p[i] = std::bit_cast<std::uint64_t>(values[i]);
    return encode(p, Precision::FP64);
}

std::vector<std::uint64_t> decode(const BitPlaneTensor& t) {
    std::vector<std::uint64_t> out(t.size(), 0);
    for (unsigned b = 0; b < t.width(); ++b) {
        const std::uint64_t* plane = t.bit(b);
        for (std::size_t w = 0; w < t.words_per_plane(); ++w) {
            std::uint64_t bits = plane[w];
            while (bits) {
                unsigned lane = static_cast<unsigned>(std::countr_zero(bits));
                out[w * 64 + lane] |= 1ULL << b;
                bits &= bits - 1;
            }
        }
    }
    return out;
}

std::vector<float> decode_f32(const BitPlaneTensor& t) {
    if (t.format() != Precision::FP32) throw std::invalid_argument("not an fp32 tensor");
    return to_floats(decode(t));
}

std::vector<double> decode_f64(const BitPlaneTensor& t) {
    if (t.format() != Precision::FP64) throw std::invalid_argument("not an fp64 tensor");
    std::vector<double> out;
    for (std::uint64_t p : decode(t)) out.push_back(std::bit_cast<double>(p));
    return out;
}

std::vector<std::uint64_t> to_patterns(std::span<const float> values) {
    std::vector<std::uint64_t> p(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) p[i] = std::bit_cast<std::uint32_t>(values[i]);
    return p;
}

std::vector<float> to_floats(std::span<const std::uint64_t> patterns) {
    std::vector<float> f(patterns.size());
    for (std::size_t i = 0; i < patterns.size(); ++i)
        f[i] = std::bit_cast<float>(static_cast<std::uint32_t>(patterns[i]));
    return f;
}

}  // namespace spikegate
