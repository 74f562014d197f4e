#include <bit>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "spikegate/fidelity.hpp"
#include "spikegate/fp_circuits.hpp"
#include "spikegate/fp_ops.hpp"
#include "spikegate/host_fp.hpp"

using namespace spikegate;

namespace {

const Precision kFormats[] = {Precision::FP8_E4M3, Precision::FP16, Precision::FP32};
const FpOp kBinary[] = {FpOp::Add, FpOp::Sub, FpOp::Mul, FpOp::Div, FpOp::Max, FpOp::Min};
const FpOp kUnary[] = {FpOp::Sqrt, FpOp::Recip, FpOp::Neg};

struct Pairs {
    std::vector<std::uint64_t> a, b;
};

Pairs directed_pairs(Precision p) {
    auto v = directed_values(p);
    Pairs out;
    for (auto x : v)
        for (auto y : v) {
            out.a.push_back(x);
            out.b.push_back(y);
        }
    return out;
}

Pairs random_pairs(Precision p, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Pairs out;
    for (std::size_t i = 0; i < n; ++i) {
        out.a.push_back(random_finite(p, rng));
        out.b.push_back(random_finite(p, rng));
    }
    return out;
}

// Counts lanes differing from the host oracle; `max_ulp` tolerates finite
// differences up to that many ULP.
std::size_t mismatches(FpOp op, Precision p, const Pairs& in, FpOptions opt = {}, std::uint64_t max_ulp = 0) {
    auto got = fp_apply(op, p, in.a, in.b, opt);
    const FpFormat f = format_of(p);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        std::uint64_t want = fp_arity(op) == 1 ? host_fp(op, p, in.a[i]) : host_fp(op, p, in.a[i], in.b[i]);
        if (same_value(got[i], want, p)) continue;
        bool finite = !f.is_nan(got[i]) && !f.is_nan(want);
        if (finite && ulp_distance(got[i], want, p) <= max_ulp) continue;
        if (++bad <= 3)
            ADD_FAILURE() << fp_op_name(op) << " " << precision_name(p) << " a=" << std::hex << in.a[i]
                          << " b=" << in.b[i] << " got=" << got[i] << " want=" << want;
    }
    return bad;
}

}  // namespace

TEST(FpArith, DirectedEdgeCasesAllOps) {
    for (Precision p : kFormats) {
        Pairs d = directed_pairs(p);
        for (FpOp op : kBinary) EXPECT_EQ(mismatches(op, p, d), 0u) << fp_op_name(op) << precision_name(p);
        for (FpOp op : kUnary) EXPECT_EQ(mismatches(op, p, d), 0u) << fp_op_name(op) << precision_name(p);
    }
}

TEST(FpArith, Fp8ExhaustivePairs) {
    Pairs all;
    for (std::uint64_t a = 0; a < 256; ++a)
        for (std::uint64_t b = 0; b < 256; ++b) {
            all.a.push_back(a);
            all.b.push_back(b);
        }
    for (FpOp op : kBinary) EXPECT_EQ(mismatches(op, Precision::FP8_E4M3, all), 0u) << fp_op_name(op);
    for (FpOp op : kUnary) EXPECT_EQ(mismatches(op, Precision::FP8_E4M3, all), 0u) << fp_op_name(op);
}

TEST(FpArith, RandomPairsMatchHost) {
    for (Precision p : {Precision::FP16, Precision::FP32}) {
        Pairs r = random_pairs(p, 5000, 11);
        for (FpOp op : kBinary) EXPECT_EQ(mismatches(op, p, r), 0u) << fp_op_name(op);
        for (FpOp op : kUnary) EXPECT_EQ(mismatches(op, p, r), 0u) << fp_op_name(op);
    }
}

TEST(FpArith, CancellationAndNearbyOperands) {
    // Operands within a few ULP of each other exercise massive cancellation.
    std::mt19937_64 rng(12);
    Pairs r;
    for (int i = 0; i < 4000; ++i) {
        std::uint64_t a = random_finite(Precision::FP32, rng);
        r.a.push_back(a);
        r.b.push_back((a ^ 0x80000000u) + (rng() % 7) - 3);
    }
    EXPECT_EQ(mismatches(FpOp::Add, Precision::FP32, r), 0u);
    for (auto& b : r.b) b ^= 0x80000000u;
    EXPECT_EQ(mismatches(FpOp::Sub, Precision::FP32, r), 0u);
}

TEST(FpArith, WithoutCorrectionWithinOneUlp) {
    FpOptions off{false};
    for (Precision p : kFormats) {
        Pairs r = random_pairs(p, 3000, 13);
        Pairs d = directed_pairs(p);
        for (FpOp op : {FpOp::Div, FpOp::Sqrt, FpOp::Recip}) {
            EXPECT_EQ(mismatches(op, p, r, off, 1), 0u) << fp_op_name(op) << precision_name(p);
            EXPECT_EQ(mismatches(op, p, d, off, 1), 0u) << fp_op_name(op) << precision_name(p);
        }
    }
}

TEST(FpArith, Commutativity) {
    Pairs r = random_pairs(Precision::FP32, 3000, 14);
    for (FpOp op : {FpOp::Add, FpOp::Mul, FpOp::Max, FpOp::Min})
        EXPECT_EQ(fp_apply(op, Precision::FP32, r.a, r.b), fp_apply(op, Precision::FP32, r.b, r.a)) << fp_op_name(op);
}

TEST(FpArith, NewtonRaphsonConverges) {
    const FpFormat f = format_of(Precision::FP32);
    const FpFormat ext = extended_format(f);
    std::mt19937_64 rng(15);
    Lanes x;
    for (int i = 0; i < 2000; ++i)
        x.push_back((static_cast<std::uint64_t>(ext.bias()) << ext.man_bits) | (rng() & ext.man_mask()));
    double prev = 1.0;
    for (unsigned it = 0; it <= kNewtonIterations; ++it) {
        Netlist nl;
        Circuit c(nl);
        Word in = c.input_word(ext.width());
        c.output(build_recip_nr(c, f, in, it));
        Unit u(std::move(nl), {ext.width()}, {ext.width()});
        auto y = u.run({x})[0];
        double worst = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double b = to_double(x[i], ext);
            worst = std::max(worst, std::fabs(to_double(y[i], ext) * b - 1.0));
        }
        if (it > 0) EXPECT_LT(worst, prev * prev * 4 + 1e-8) << it;  // quadratic
        prev = worst;
    }
    EXPECT_LT(prev, std::ldexp(1.0, -24));
}

TEST(FpArith, SeedTables) {
    const FpFormat f = format_of(Precision::FP32);
    auto t = recip_seed_table(f);
    ASSERT_EQ(t.size(), 256u);
    EXPECT_EQ(t[0], std::bit_cast<std::uint32_t>(static_cast<float>(1.0 / (1.0 + 0.5 / 256))) & 0x7FFFFF);
    EXPECT_EQ(sqrt_seed_table(f).size(), 512u);
    EXPECT_EQ(seed_index_bits(format_of(Precision::FP8_E4M3)), 3u);
}

TEST(FpArith, SpikingEvaluatorAgreesWithoutNoise) {
    Pairs r = random_pairs(Precision::FP8_E4M3, 500, 16);
    for (FpOp op : {FpOp::Add, FpOp::Mul, FpOp::Div})
        EXPECT_EQ(fp_apply_spiking(op, Precision::FP8_E4M3, r.a, r.b, Physics{}, 1),
                  fp_apply(op, Precision::FP8_E4M3, r.a, r.b));
}

TEST(FpArith, PlaneInterface) {
    std::vector<float> a{1.5f, -2.0f, 0.1f}, b{0.25f, 3.0f, -0.1f};
    auto ta = encode(std::span<const float>(a)), tb = encode(std::span<const float>(b));
    auto sum = decode_f32(fp_add(ta, tb));
    auto quot = decode_f32(fp_div(ta, tb));
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(sum[i], a[i] + b[i]);
        EXPECT_EQ(quot[i], a[i] / b[i]);
    }
    EXPECT_EQ(decode_f32(fp_sqrt(encode(std::span<const float>(b))))[0], 0.5f);
    auto t8 = encode(std::vector<std::uint64_t>{0x38}, Precision::FP8_E4M3);
    EXPECT_THROW(fp_add(ta, t8), std::invalid_argument);
    EXPECT_THROW(fp_unit(FpOp::Add, Precision::FP64), std::invalid_argument);
}

TEST(FpArith, CircuitSizesAreOrdered) {
    auto n = [](FpOp op) { return fp_unit(op, Precision::FP32).netlist().neuron_count(); };
    EXPECT_LT(n(FpOp::Neg), n(FpOp::Max));
    EXPECT_LT(n(FpOp::Max), n(FpOp::Add));
    EXPECT_LT(n(FpOp::Add), n(FpOp::Mul));
    EXPECT_LT(n(FpOp::Mul), n(FpOp::Div));
    EXPECT_LT(fp_unit(FpOp::Div, Precision::FP32, {false}).netlist().neuron_count(), n(FpOp::Div));
}

TEST(FpArith, OpNames) {
    for (FpOp op : kBinary) EXPECT_EQ(parse_fp_op(fp_op_name(op)), op);
    EXPECT_THROW(parse_fp_op("pow"), std::invalid_argument);
}
