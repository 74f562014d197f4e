#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "spikegate/bitplane.hpp"
#include "spikegate/coding.hpp"
#include "spikegate/tensor_io.hpp"

using namespace spikegate;

TEST(Format, Widths) {
    EXPECT_EQ(bit_width(Precision::FP8_E4M3), 8u);
    EXPECT_EQ(bit_width(Precision::FP16), 16u);
    EXPECT_EQ(bit_width(Precision::FP32), 32u);
    EXPECT_EQ(bit_width(Precision::FP64), 64u);
    EXPECT_EQ(format_of(Precision::FP8_E4M3).bias(), 7);
    EXPECT_EQ(format_of(Precision::FP32).quiet_nan(), 0x7FC00000u);
    EXPECT_EQ(parse_precision("fp16"), Precision::FP16);
    EXPECT_THROW(parse_precision("fp7"), std::invalid_argument);
}

TEST(BitPlane, ZeroAndOne) {
    float v[] = {0.0f, 1.0f};
    BitPlaneTensor t = encode(std::span<const float>(v));
    EXPECT_EQ(t.width(), 32u);
    for (unsigned p = 0; p < 32; ++p) {
        EXPECT_FALSE(t.spike(p, 0));
        EXPECT_EQ(t.spike(p, 1), ((0x3F800000u >> (31 - p)) & 1) != 0) << p;
    }
}

TEST(BitPlane, SignIsPlaneZero) {
    for (Precision f : {Precision::FP8_E4M3, Precision::FP16, Precision::FP32, Precision::FP64}) {
        unsigned w = bit_width(f);
        std::uint64_t neg = 1ull << (w - 1);
        std::vector<std::uint64_t> pats{neg | 1, 1};
        BitPlaneTensor t = encode(pats, f);
        EXPECT_TRUE(t.spike(0, 0));
        EXPECT_FALSE(t.spike(0, 1));
        EXPECT_TRUE(t.spike(w - 1, 1));
    }
}

TEST(BitPlane, SpecialValuesRoundTrip) {
    float nan_payload;
    std::uint32_t bits = 0x7FA12345u;
    std::memcpy(&nan_payload, &bits, 4);
    float v[] = {nan_payload, std::numeric_limits<float>::infinity(), -std::numeric_limits<float>::infinity(),
                 -0.0f, std::numeric_limits<float>::denorm_min(), -1e-40f};
    auto back = decode_f32(encode(std::span<const float>(v)));
    for (std::size_t i = 0; i < std::size(v); ++i)
        EXPECT_EQ(std::bit_cast<std::uint32_t>(back[i]), std::bit_cast<std::uint32_t>(v[i]));
}

TEST(BitPlane, DecodeExamples) {
    std::vector<std::uint64_t> pats{0xFFFFFFFFu, 0xC0000000u};
    auto f = decode_f32(encode(pats, Precision::FP32));
    EXPECT_TRUE(std::isnan(f[0]));
    EXPECT_EQ(std::bit_cast<std::uint32_t>(f[0]), 0xFFFFFFFFu);
    EXPECT_EQ(f[1], -2.0f);
}

TEST(BitPlane, ExhaustiveFp8Fp16) {
    for (Precision f : {Precision::FP8_E4M3, Precision::FP16}) {
        std::vector<std::uint64_t> all(1ull << bit_width(f));
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        BitPlaneTensor t = encode(all, f);
        EXPECT_EQ(decode(t), all);
    }
}

TEST(BitPlane, RandomFp32Fp64) {
    std::mt19937_64 rng(1);
    std::vector<std::uint64_t> p32(1000000), p64(1000000);
    for (auto& p : p32) p = rng() & 0xFFFFFFFFu;
    for (auto& p : p64) p = rng();
    EXPECT_EQ(decode(encode(p32, Precision::FP32)), p32);
    EXPECT_EQ(decode(encode(p64, Precision::FP64)), p64);
}

TEST(BitPlane, RejectsOversizedPattern) {
    std::vector<std::uint64_t> p{0x100};
    EXPECT_THROW(encode(p, Precision::FP8_E4M3), std::invalid_argument);
}

TEST(BitPlane, ZeroMse) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0, 100);
    std::vector<double> v(10000);
    for (auto& x : v) x = n(rng);
    auto back = decode_f64(encode(std::span<const double>(v)));
    double mse = 0;
    for (std::size_t i = 0; i < v.size(); ++i) mse += (back[i] - v[i]) * (back[i] - v[i]);
    EXPECT_EQ(mse, 0.0);
}

TEST(TensorIo, ParseAndFormat) {
    auto p = parse_patterns("0x3F800000, 0x40000000\n0xFF800000", Precision::FP32);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[2], 0xFF800000u);
    EXPECT_EQ(format_pattern(0x3F800000u, Precision::FP32), "0x3F800000");
    EXPECT_EQ(format_pattern(0x3C, Precision::FP8_E4M3), "0x3C");
    EXPECT_THROW(parse_patterns("1.5", Precision::FP32), std::invalid_argument);
    EXPECT_THROW(parse_patterns("0xZZ", Precision::FP32), std::invalid_argument);
    EXPECT_THROW(parse_patterns("0x1FF", Precision::FP8_E4M3), std::invalid_argument);
    EXPECT_EQ(parse_patterns("1.5", Precision::FP32, true)[0], 0x3FC00000u);
}

TEST(TensorIo, JsonRoundTrip) {
    std::vector<std::uint64_t> pats;
    for (int i = 0; i < 130; ++i) pats.push_back(static_cast<std::uint64_t>(i * 977) & 0xFFFF);
    BitPlaneTensor t = encode(pats, Precision::FP16);
    EXPECT_EQ(bitplane_from_json(bitplane_to_json(t)), t);
    EXPECT_THROW(bitplane_from_json("{}"), std::exception);
}

TEST(RateCoding, Basics) {
    EXPECT_EQ(rate_decode(rate_encode(0.0, 32, 100.0, 1ull)), 0.0);
    for (std::uint64_t s = 0; s < 50; ++s) {
        double d = rate_decode(rate_encode(-37.0, 1, 100.0, s));
        EXPECT_TRUE(d == 0.0 || d == -100.0);
    }
    EXPECT_THROW(rate_encode(1.0, 0, 1.0, 1ull), std::invalid_argument);
    EXPECT_EQ(rate_decode(rate_encode(500.0, 16, 100.0, 3ull)), 100.0);
}

TEST(RateCoding, UnbiasedOnAverage) {
    std::mt19937_64 rng(4);
    double sum = 0;
    for (int i = 0; i < 2000; ++i) sum += rate_decode(rate_encode(30.0, 64, 100.0, rng));
    EXPECT_NEAR(sum / 2000, 30.0, 1.0);
}

TEST(Ttfs, Basics) {
    TtfsTrain t = ttfs_encode(-1.0, 16, -1.0, 1.0);
    EXPECT_EQ(t.spikes[0], 1);
    for (double v : {-0.9, 0.0, 0.33, 0.999, 5.0}) {
        TtfsTrain u = ttfs_encode(v, 64, -1.0, 1.0);
        int n = 0;
        for (auto s : u.spikes) n += s;
        EXPECT_EQ(n, 1);
    }
    EXPECT_NEAR(ttfs_decode(ttfs_encode(0.3, 1024, -1.0, 1.0)), 0.3, 2.0 / 1024);
    EXPECT_THROW(ttfs_encode(0.0, 0, 0.0, 1.0), std::invalid_argument);
}
