#include "spikegate/layers.hpp"

#include <bit>
#include <limits>
#include <stdexcept>

#include "spikegate/fp_ops.hpp"
#include "spikegate/nonlinear.hpp"
#include "spikegate/unit.hpp"

namespace spikegate {

namespace {

constexpr std::uint64_t kOne = 0x3F800000;
constexpr std::uint64_t kNegInf = 0xFF800000;

Lanes op(FpOp o, const Lanes& a, const Lanes& b = {}) { return fp_apply(o, Precision::FP32, a, b); }
std::uint64_t bits(float v) { return std::bit_cast<std::uint32_t>(v); }

std::size_t rows_of(std::size_t size, std::size_t width) {
    if (width == 0 || size % width != 0) throw std::invalid_argument("activation size does not match layer width");
    return size / width;
}

// Lane n of the result is terms(i)[n] summed over i = 0..count-1 in order.
template <class Terms>
Lanes accumulate(std::size_t count, Terms terms) {
    Lanes acc = terms(0);
    for (std::size_t i = 1; i < count; ++i) acc = op(FpOp::Add, acc, terms(i));
    return acc;
}

Lanes linear_lanes(const Lanes& x, const LinearWeights& w) {
    w.validate();
    const std::size_t rows = rows_of(x.size(), w.in);
    const std::size_t n = rows * w.out;
    Lanes xs(n), ws(n), bias(n);
    Lanes acc = accumulate(w.in, [&](std::size_t i) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < w.out; ++j) {
                ws[r * w.out + j] = bits(w.w[j * w.in + i]);
                xs[r * w.out + j] = x[r * w.in + i];
            }
        return op(FpOp::Mul, ws, xs);
    });
    for (std::size_t l = 0; l < n; ++l) bias[l] = bits(w.b[l % w.out]);
    return op(FpOp::Add, acc, bias);
}

Lanes rmsnorm_lanes(const Lanes& x, const std::vector<float>& gamma, float eps) {
    const std::size_t d = gamma.size();
    const std::size_t rows = rows_of(x.size(), d);
    Lanes sq = op(FpOp::Mul, x, x);
    Lanes col(rows);
    Lanes sum = accumulate(d, [&](std::size_t i) {
        for (std::size_t r = 0; r < rows; ++r) col[r] = sq[r * d + i];
        return col;
    });
    Lanes mean = op(FpOp::Div, sum, Lanes(rows, bits(static_cast<float>(d))));
    Lanes root = op(FpOp::Sqrt, op(FpOp::Add, mean, Lanes(rows, bits(eps))));
    Lanes inv = op(FpOp::Div, Lanes(rows, kOne), root);
    Lanes inv_spread(x.size()), g(x.size());
    for (std::size_t l = 0; l < x.size(); ++l) {
        inv_spread[l] = inv[l / d];
        g[l] = bits(gamma[l % d]);
    }
    return op(FpOp::Mul, op(FpOp::Mul, x, inv_spread), g);
}

Lanes rope_lanes(const Lanes& x, const std::vector<std::size_t>& positions, std::size_t head_dim, double base) {
    if (head_dim == 0 || head_dim % 2 != 0) throw std::invalid_argument("RoPE needs an even dimension");
    const std::size_t rows = rows_of(x.size(), head_dim);
    if (positions.size() != rows) throw std::invalid_argument("one position per row required");
    const std::size_t half = head_dim / 2;
    const std::vector<float> freq = rope_inv_freq(head_dim, base);
    Lanes pos(rows * half), f(rows * half), x0(rows * half), x1(rows * half);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < half; ++i) {
            pos[r * half + i] = bits(static_cast<float>(positions[r]));
            f[r * half + i] = bits(freq[i]);
            x0[r * half + i] = x[r * head_dim + 2 * i];
            x1[r * half + i] = x[r * head_dim + 2 * i + 1];
        }
    auto [s, c] = sincos_lanes(op(FpOp::Mul, pos, f));
    Lanes y0 = op(FpOp::Sub, op(FpOp::Mul, x0, c), op(FpOp::Mul, x1, s));
    Lanes y1 = op(FpOp::Add, op(FpOp::Mul, x0, s), op(FpOp::Mul, x1, c));
    Lanes y(x.size());
    for (std::size_t l = 0; l < rows * half; ++l) {
        y[2 * l] = y0[l];
        y[2 * l + 1] = y1[l];
    }
    return y;
}

Lanes attention_lanes(const Lanes& q, const Lanes& k, const Lanes& v, const BlockConfig& cfg, bool causal) {
    cfg.validate();
    const std::size_t d = cfg.d_model, n = cfg.seq_len, dk = cfg.head_dim(), heads = cfg.n_heads;
    if (q.size() != k.size() || q.size() != v.size() || q.size() % (n * d) != 0)
        throw std::invalid_argument("attention shape mismatch");
    const std::size_t batch = q.size() / (n * d);
    // Score lanes ordered (b, h, t, u) so each softmax row is contiguous.
    const std::size_t lanes = batch * heads * n * n;
    auto score_index = [&](std::size_t l, std::size_t& b, std::size_t& h, std::size_t& t, std::size_t& u) {
        u = l % n;
        t = l / n % n;
        h = l / (n * n) % heads;
        b = l / (n * n * heads);
    };
    Lanes qs(lanes), ks(lanes), mask(lanes);
    Lanes dot = accumulate(dk, [&](std::size_t i) {
        for (std::size_t l = 0; l < lanes; ++l) {
            std::size_t b, h, t, u;
            score_index(l, b, h, t, u);
            qs[l] = q[(b * n + t) * d + h * dk + i];
            ks[l] = k[(b * n + u) * d + h * dk + i];
        }
        return op(FpOp::Mul, qs, ks);
    });
    const std::uint64_t scale = op(FpOp::Sqrt, Lanes{bits(static_cast<float>(dk))})[0];
    for (std::size_t l = 0; l < lanes; ++l) {
        std::size_t b, h, t, u;
        score_index(l, b, h, t, u);
        mask[l] = (causal && u > t) ? kNegInf : 0;
    }
    Lanes scores = op(FpOp::Add, op(FpOp::Div, dot, Lanes(lanes, scale)), mask);
    Lanes p = softmax_lanes(scores, n);

    // Output lanes ordered like q: (b, t, h, i).
    Lanes ps(q.size()), vs(q.size());
    return accumulate(n, [&](std::size_t u) {
        for (std::size_t b = 0; b < batch; ++b)
            for (std::size_t t = 0; t < n; ++t)
                for (std::size_t h = 0; h < heads; ++h)
                    for (std::size_t i = 0; i < dk; ++i) {
                        std::size_t o = (b * n + t) * d + h * dk + i;
                        ps[o] = p[((b * heads + h) * n + t) * n + u];
                        vs[o] = v[(b * n + u) * d + h * dk + i];
                    }
        return op(FpOp::Mul, ps, vs);
    });
}

Lanes block_lanes(const Lanes& x, const BlockWeights& w, const BlockConfig& cfg) {
    w.validate(cfg);
    const std::size_t d = cfg.d_model, n = cfg.seq_len, dk = cfg.head_dim();
    const std::size_t rows = rows_of(x.size(), d);
    if (rows % n != 0) throw std::invalid_argument("activation rows must be whole sequences");
    const float eps = std::bit_cast<float>(cfg.eps);
    std::vector<std::size_t> pos(rows * cfg.n_heads);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t h = 0; h < cfg.n_heads; ++h) pos[r * cfg.n_heads + h] = r % n;

    Lanes h1 = rmsnorm_lanes(x, w.norm1, eps);
    Lanes q = rope_lanes(linear_lanes(h1, w.wq), pos, dk, cfg.rope_base);
    Lanes k = rope_lanes(linear_lanes(h1, w.wk), pos, dk, cfg.rope_base);
    Lanes v = linear_lanes(h1, w.wv);
    Lanes x1 = op(FpOp::Add, x, linear_lanes(attention_lanes(q, k, v, cfg, true), w.wo));
    Lanes u = silu_lanes(linear_lanes(rmsnorm_lanes(x1, w.norm2, eps), w.up));
    return op(FpOp::Add, x1, linear_lanes(u, w.down));
}

std::vector<float> on_floats(const std::vector<float>& x, const auto& fn) { return to_floats(fn(to_patterns(x))); }

void require_fp32(const BitPlaneTensor& x) {
    if (x.format() != Precision::FP32) throw std::invalid_argument("layers take FP32 activations");
}

BitPlaneTensor on_planes(const BitPlaneTensor& x, const auto& fn) {
    require_fp32(x);
    return encode(fn(decode(x)), Precision::FP32);
}

}  // namespace

std::vector<float> linear_forward(const std::vector<float>& x, const LinearWeights& w) {
    return on_floats(x, [&](const Lanes& l) { return linear_lanes(l, w); });
}

BitPlaneTensor linear_forward(const BitPlaneTensor& x, const LinearWeights& w) {
    return on_planes(x, [&](const Lanes& l) { return linear_lanes(l, w); });
}

std::vector<float> rmsnorm_forward(const std::vector<float>& x, const std::vector<float>& gamma, float eps) {
    return on_floats(x, [&](const Lanes& l) { return rmsnorm_lanes(l, gamma, eps); });
}

BitPlaneTensor rmsnorm_forward(const BitPlaneTensor& x, const std::vector<float>& gamma, float eps) {
    return on_planes(x, [&](const Lanes& l) { return rmsnorm_lanes(l, gamma, eps); });
}

std::vector<float> rope_apply(const std::vector<float>& x, const std::vector<std::size_t>& positions,
                              std::size_t head_dim, double base) {
    return on_floats(x, [&](const Lanes& l) { return rope_lanes(l, positions, head_dim, base); });
}

BitPlaneTensor rope_apply(const BitPlaneTensor& x, std::size_t position, const BlockConfig& cfg) {
    cfg.validate();
    if (x.size() != cfg.d_model) throw std::invalid_argument("RoPE input must be one token of d_model values");
    std::vector<std::size_t> pos(cfg.n_heads, position);
    return on_planes(x, [&](const Lanes& l) { return rope_lanes(l, pos, cfg.head_dim(), cfg.rope_base); });
}

std::vector<float> attention_forward(const std::vector<float>& q, const std::vector<float>& k,
                                     const std::vector<float>& v, const BlockConfig& cfg, bool causal) {
    return to_floats(attention_lanes(to_patterns(q), to_patterns(k), to_patterns(v), cfg, causal));
}

std::vector<float> transformer_block_forward(const std::vector<float>& x, const BlockWeights& w,
                                             const BlockConfig& cfg) {
    return on_floats(x, [&](const Lanes& l) { return block_lanes(l, w, cfg); });
}

BitPlaneTensor transformer_block_forward(const BitPlaneTensor& x, const BlockWeights& w, const BlockConfig& cfg) {
    return on_planes(x, [&](const Lanes& l) { return block_lanes(l, w, cfg); });
}

}  // namespace spikegate
