#pragma once

#include <cstddef>
#include <utility>

#include "spikegate/bitplane.hpp"
#include "spikegate/unit.hpp"

namespace spikegate {

// FP32 activations composed from fp-arith circuits; lanes carry FP32 bit
// patterns. Every intermediate is a separately rounded circuit result.
//
// exp: x clamped to [-110, 100], k = rint(x/ln2) by the 1.5*2^23 trick,
// r = x - k*ln2_hi - k*ln2_lo, e^r = ((r*r)*q(r) + r) + 1, then two
// exponent-field factors 2^k1 * 2^k2 (k1 = k>>1) built by integer adds.
Lanes exp_lanes(const Lanes& x);
Lanes sigmoid_lanes(const Lanes& x);  // 1 / (1 + exp(-x))
Lanes tanh_lanes(const Lanes& x);     // 2*sigmoid(2x) - 1
Lanes silu_lanes(const Lanes& x);     // x * sigmoid(x)
Lanes gelu_lanes(const Lanes& x);     // x * sigmoid(1.702x)
// k = rint(x*2/pi), r by a 7-chunk split of pi/2, quadrant from k mod 4.
std::pair<Lanes, Lanes> sincos_lanes(const Lanes& x);
// Rows of `row_len` consecutive elements: left-fold max, subtract, exp,
// left-fold sum from the first element, divide.
Lanes softmax_lanes(const Lanes& x, std::size_t row_len);

BitPlaneTensor fp_exp(const BitPlaneTensor& x);
BitPlaneTensor fp_sigmoid(const BitPlaneTensor& x);
BitPlaneTensor fp_tanh(const BitPlaneTensor& x);
BitPlaneTensor fp_silu(const BitPlaneTensor& x);
BitPlaneTensor fp_gelu(const BitPlaneTensor& x);
std::pair<BitPlaneTensor, BitPlaneTensor> fp_sincos(const BitPlaneTensor& x);
BitPlaneTensor fp_softmax(const BitPlaneTensor& x, std::size_t row_len);

}  // namespace spikegate
