#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace spikegate {

// y[j] = sum_i w[j*in + i] * x[i] + b[j]
struct LinearWeights {
    std::size_t in = 0, out = 0;
    std::vector<float> w, b;
    void validate() const;
};

struct BlockConfig {
    std::size_t d_model = 32;
    std::size_t n_heads = 4;
    std::size_t d_ff = 128;
    std::size_t seq_len = 8;
    double rope_base = 10000.0;
    std::uint32_t eps = 0x3727C5AC;  // 1e-5f
    std::size_t head_dim() const { return d_model / n_heads; }
    void validate() const;
};

// Pre-norm block: x + Wo*attn(rope(Wq h), rope(Wk h), Wv h) with h = norm1(x),
// then + down(silu(up(norm2(.)))).
struct BlockWeights {
    std::vector<float> norm1, norm2;
    LinearWeights wq, wk, wv, wo, up, down;
    void validate(const BlockConfig& cfg) const;
};

// Reduction order of every accumulation: the circuits always use Forward.
enum class Reduction { Forward, Reverse, Pairwise };

// Seeded initialisation: weights U(-1,1) * scale / sqrt(fan_in), biases
// U(-1,1) * 0.1 * scale, norm gains 1 + N(0, 0.1^2).
BlockWeights random_block(const BlockConfig& cfg, std::uint64_t seed, double scale = 0.35);
BlockWeights zero_block(const BlockConfig& cfg);
LinearWeights random_linear(std::size_t in, std::size_t out, std::uint64_t seed, float lo, float hi);

// RoPE frequencies 10000^(-2i/d) for i < d/2, rounded once to FP32.
std::vector<float> rope_inv_freq(std::size_t head_dim, double base);

// Weight files: JSON with shapes, hex FP32 patterns and a CRC-32 over the
// pattern text. Loading validates shapes and checksum.
std::string block_to_json(const BlockConfig& cfg, const BlockWeights& w);
void block_from_json(const std::string& text, BlockConfig& cfg, BlockWeights& w);

}  // namespace spikegate
