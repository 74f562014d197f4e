#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "spikegate/model.hpp"

namespace spikegate::ref {

// Host FP32 oracles. The "composed" functions perform exactly the operation
// sequence of the circuits, one rounding per step; the "fused" ones are the
// conventional FP32 formulas with libm transcendentals (expf, tanhf, sinf,
// cosf) and a plain left-to-right sum. Reductions follow the requested order.

float max_total(float a, float b);  // -0 < +0, NaN in gives NaN
float min_total(float a, float b);
float reduce_sum(const std::vector<float>& terms, Reduction order);

float exp_c(float x);
float sigmoid_c(float x);
float tanh_c(float x);
float silu_c(float x);
float gelu_c(float x);
std::pair<float, float> sincos_c(float x);
std::vector<float> softmax_c(const std::vector<float>& row, Reduction order = Reduction::Forward);

float exp_f(float x);
float sigmoid_f(float x);
float tanh_f(float x);
float silu_f(float x);
float gelu_f(float x);
std::pair<float, float> sincos_f(float x);
std::vector<float> softmax_f(const std::vector<float>& row);

// Row-major activations: x has rows * in elements.
std::vector<float> linear(const std::vector<float>& x, const LinearWeights& w, Reduction order = Reduction::Forward);
// Rows of gamma.size() elements: square, sum, / d, + eps, 1 / sqrt, (x * r) * gamma.
std::vector<float> rmsnorm(const std::vector<float>& x, const std::vector<float>& gamma, float eps,
                           Reduction order = Reduction::Forward);
// Same statistics, final scale x * r * gamma in double rounded once.
std::vector<float> rmsnorm_fused(const std::vector<float>& x, const std::vector<float>& gamma, float eps);
// Rows of head_dim elements at the given positions; pairs (2i, 2i+1).
std::vector<float> rope(const std::vector<float>& x, const std::vector<std::size_t>& positions, std::size_t head_dim,
                        double base);
// q, k, v: batch * seq_len rows of d_model; heads are contiguous column blocks.
std::vector<float> attention(const std::vector<float>& q, const std::vector<float>& k, const std::vector<float>& v,
                             const BlockConfig& cfg, bool causal, Reduction order = Reduction::Forward);
std::vector<float> block(const std::vector<float>& x, const BlockWeights& w, const BlockConfig& cfg,
                         Reduction order = Reduction::Forward);

}  // namespace spikegate::ref
