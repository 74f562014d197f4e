#pragma once

#include <cstddef>
#include <vector>

#include "spikegate/bitplane.hpp"
#include "spikegate/model.hpp"

namespace spikegate {

// Network layers composed from FP32 circuits. Activations are row-major;
// every accumulation runs in ascending index order starting from the first
// term, and each layer is bit-identical to the Forward host reference.

std::vector<float> linear_forward(const std::vector<float>& x, const LinearWeights& w);
BitPlaneTensor linear_forward(const BitPlaneTensor& x, const LinearWeights& w);

// Rows of gamma.size(): square, sum, / d, + eps, 1 / sqrt, (x * r) * gamma.
std::vector<float> rmsnorm_forward(const std::vector<float>& x, const std::vector<float>& gamma, float eps);
BitPlaneTensor rmsnorm_forward(const BitPlaneTensor& x, const std::vector<float>& gamma, float eps);

// Rows of head_dim rotated pairwise by position * base^(-2i/head_dim).
std::vector<float> rope_apply(const std::vector<float>& x, const std::vector<std::size_t>& positions,
                              std::size_t head_dim, double base);
// One token of d_model values; every head is rotated at `position`.
BitPlaneTensor rope_apply(const BitPlaneTensor& x, std::size_t position, const BlockConfig& cfg);

// q, k, v: whole sequences of cfg.seq_len rows of d_model; heads are
// contiguous column blocks. Scores are q.k / sqrt(d_k) plus a 0 / -Inf mask.
std::vector<float> attention_forward(const std::vector<float>& q, const std::vector<float>& k,
                                     const std::vector<float>& v, const BlockConfig& cfg, bool causal);

// Pre-norm block with causal attention, RoPE on q and k, SiLU feed-forward.
std::vector<float> transformer_block_forward(const std::vector<float>& x, const BlockWeights& w,
                                             const BlockConfig& cfg);
BitPlaneTensor transformer_block_forward(const BitPlaneTensor& x, const BlockWeights& w, const BlockConfig& cfg);

}  // namespace spikegate
