#include "spikegate/nonlinear.hpp"

#include <stdexcept>

#include "spikegate/fp_ops.hpp"
#include "spikegate/int_arith.hpp"
#include "spikegate/poly_coeffs.hpp"

namespace spikegate {

namespace {

constexpr std::uint32_t kOne = 0x3F800000;
constexpr std::uint32_t kTwo = 0x40000000;

Lanes op(FpOp o, const Lanes& a, const Lanes& b = {}) { return fp_apply(o, Precision::FP32, a, b); }
Lanes splat(const Lanes& like, std::uint32_t bits) { return Lanes(like.size(), bits); }

// t (round-magic sum) -> 2^k1, 2^k2 with k = low 9 bits of t.
const Unit& exp_scale_unit() {
    static const Unit unit = [] {
        Netlist nl;
        Circuit c(nl);
        Word t = c.input_word(32);
        Word k = slice(t, 0, 9);
        Word k1 = sign_extend(slice(k, 1, 8), 9);
        Word k2 = sub_words(c, k, k1);
        for (const Word& ki : {k1, k2}) {
            Word field = slice(add_const(c, ki, 127), 0, 8);
            c.output(concat(concat(Word(23, kLow), field), {kLow}));
        }
        nl.prune();
        return Unit(std::move(nl), {32}, {32, 32});
    }();
    return unit;
}

// (t, s, c) -> (sin, cos) for quadrant t mod 4.
const Unit& quadrant_unit() {
    static const Unit unit = [] {
        Netlist nl;
        Circuit c(nl);
        Word t = c.input_word(32);
        Word s = c.input_word(32);
        Word co = c.input_word(32);
        Wire q0 = t[0], q1 = t[1];
        Word sn = c.mux(q0, co, s);
        sn[31] = c.xor_(sn[31], q1);
        Word cs = c.mux(q0, s, co);
        cs[31] = c.xor_(cs[31], c.xor_(q0, q1));
        c.output(sn);
        c.output(cs);
        nl.prune();
        return Unit(std::move(nl), {32, 32, 32}, {32, 32});
    }();
    return unit;
}

void require_fp32(const BitPlaneTensor& x) {
    if (x.format() != Precision::FP32) throw std::invalid_argument("activations are FP32 only");
}

template <class Fn>
BitPlaneTensor on_planes(const BitPlaneTensor& x, Fn fn) {
    require_fp32(x);
    return encode(fn(decode(x)), Precision::FP32);
}

}  // namespace

Lanes exp_lanes(const Lanes& x) {
    Lanes xc = op(FpOp::Min, op(FpOp::Max, x, splat(x, kExpLow)), splat(x, kExpHigh));
    Lanes magic = splat(x, kRoundMagic);
    Lanes t = op(FpOp::Add, op(FpOp::Mul, xc, splat(x, kInvLn2)), magic);
    Lanes kf = op(FpOp::Sub, t, magic);
    Lanes r = op(FpOp::Sub, xc, op(FpOp::Mul, kf, splat(x, kLn2Hi)));
    r = op(FpOp::Sub, r, op(FpOp::Mul, kf, splat(x, kLn2Lo)));
    Lanes q = splat(x, kExpQ[4]);
    for (int i = 3; i >= 0; --i) q = op(FpOp::Add, op(FpOp::Mul, q, r), splat(x, kExpQ[i]));
    Lanes p = op(FpOp::Mul, op(FpOp::Mul, r, r), q);
    p = op(FpOp::Add, op(FpOp::Add, p, r), splat(x, kOne));
    auto s = exp_scale_unit().run({t});
    return op(FpOp::Mul, op(FpOp::Mul, p, s[0]), s[1]);
}

Lanes sigmoid_lanes(const Lanes& x) {
    Lanes one = splat(x, kOne);
    return op(FpOp::Div, one, op(FpOp::Add, one, exp_lanes(op(FpOp::Neg, x))));
}

Lanes tanh_lanes(const Lanes& x) {
    Lanes two = splat(x, kTwo);
    Lanes s = sigmoid_lanes(op(FpOp::Mul, x, two));
    return op(FpOp::Sub, op(FpOp::Mul, two, s), splat(x, kOne));
}

Lanes silu_lanes(const Lanes& x) { return op(FpOp::Mul, x, sigmoid_lanes(x)); }

Lanes gelu_lanes(const Lanes& x) {
    return op(FpOp::Mul, x, sigmoid_lanes(op(FpOp::Mul, splat(x, kGeluScale), x)));
}

std::pair<Lanes, Lanes> sincos_lanes(const Lanes& x) {
    Lanes magic = splat(x, kRoundMagic);
    Lanes t = op(FpOp::Add, op(FpOp::Mul, x, splat(x, kTwoOverPi)), magic);
    Lanes kf = op(FpOp::Sub, t, magic);
    Lanes r = x;
    for (std::uint32_t chunk : kHalfPiChunks) r = op(FpOp::Sub, r, op(FpOp::Mul, kf, splat(x, chunk)));
    Lanes z = op(FpOp::Mul, r, r);

    Lanes s = splat(x, kSinS[3]);
    for (int i = 2; i >= 0; --i) s = op(FpOp::Add, op(FpOp::Mul, s, z), splat(x, kSinS[i]));
    s = op(FpOp::Add, op(FpOp::Mul, op(FpOp::Mul, s, z), r), r);

    Lanes co = splat(x, kCosC[3]);
    for (int i = 2; i >= 0; --i) co = op(FpOp::Add, op(FpOp::Mul, co, z), splat(x, kCosC[i]));
    co = op(FpOp::Mul, op(FpOp::Mul, co, z), z);
    Lanes h = op(FpOp::Mul, z, splat(x, 0x3F000000));
    co = op(FpOp::Add, op(FpOp::Sub, co, h), splat(x, kOne));

    auto out = quadrant_unit().run({t, s, co});
    return {out[0], out[1]};
}

Lanes softmax_lanes(const Lanes& x, std::size_t row_len) {
    if (row_len == 0 || x.size() % row_len != 0) throw std::invalid_argument("softmax rows must be non-empty");
    const std::size_t rows = x.size() / row_len;
    auto column = [&](const Lanes& v, std::size_t j) {
        Lanes col(rows);
        for (std::size_t r = 0; r < rows; ++r) col[r] = v[r * row_len + j];
        return col;
    };
    auto spread = [&](const Lanes& per_row) {
        Lanes out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = per_row[i / row_len];
        return out;
    };
    Lanes m = column(x, 0);
    for (std::size_t j = 1; j < row_len; ++j) m = op(FpOp::Max, m, column(x, j));
    Lanes e = exp_lanes(op(FpOp::Sub, x, spread(m)));
    Lanes s = column(e, 0);
    for (std::size_t j = 1; j < row_len; ++j) s = op(FpOp::Add, s, column(e, j));
    return op(FpOp::Div, e, spread(s));
}

BitPlaneTensor fp_exp(const BitPlaneTensor& x) { return on_planes(x, exp_lanes); }
BitPlaneTensor fp_sigmoid(const BitPlaneTensor& x) { return on_planes(x, sigmoid_lanes); }
BitPlaneTensor fp_tanh(const BitPlaneTensor& x) { return on_planes(x, tanh_lanes); }
BitPlaneTensor fp_silu(const BitPlaneTensor& x) { return on_planes(x, silu_lanes); }
BitPlaneTensor fp_gelu(const BitPlaneTensor& x) { return on_planes(x, gelu_lanes); }

std::pair<BitPlaneTensor, BitPlaneTensor> fp_sincos(const BitPlaneTensor& x) {
    require_fp32(x);
    auto [s, c] = sincos_lanes(decode(x));
    return {encode(s, Precision::FP32), encode(c, Precision::FP32)};
}

BitPlaneTensor fp_softmax(const BitPlaneTensor& x, std::size_t row_len) {
    require_fp32(x);
    return encode(softmax_lanes(decode(x), row_len), Precision::FP32);
}

}  // namespace spikegate
