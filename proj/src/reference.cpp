#include "spikegate/reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "spikegate/poly_coeffs.hpp"

namespace spikegate::ref {

namespace {

float f(std::uint32_t bits) { return std::bit_cast<float>(bits); }

float pairwise(const std::vector<float>& t, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return t[lo];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(t, lo, mid) + pairwise(t, mid, hi);
}

std::size_t rows_of(const std::vector<float>& x, std::size_t width) {
    if (width == 0 || x.size() % width != 0) throw std::invalid_argument("activation size does not match layer width");
    return x.size() / width;
}

std::vector<float> add(const std::vector<float>& a, const std::vector<float>& b) {
    std::vector<float> y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = a[i] + b[i];
    return y;
}

}  // namespace

float max_total(float a, float b) {
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<float>::quiet_NaN();
    if (a == b) return std::signbit(a) ? b : a;
    return a > b ? a : b;
}

float min_total(float a, float b) {
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<float>::quiet_NaN();
    if (a == b) return std::signbit(a) ? a : b;
    return a < b ? a : b;
}

float reduce_sum(const std::vector<float>& t, Reduction order) {
    if (t.empty()) throw std::invalid_argument("empty reduction");
    switch (order) {
        case Reduction::Forward: {
            float s = t[0];
            for (std::size_t i = 1; i < t.size(); ++i) s = s + t[i];
            return s;
        }
        case Reduction::Reverse: {
            float s = t.back();
            for (std::size_t i = t.size() - 1; i-- > 0;) s = s + t[i];
            return s;
        }
        case Reduction::Pairwise:
            return pairwise(t, 0, t.size());
    }
    return 0.0f;
}

float exp_c(float x) {
    float xc = min_total(max_total(x, f(kExpLow)), f(kExpHigh));
    const float magic = f(kRoundMagic);
    float t = xc * f(kInvLn2) + magic;
    float kf = t - magic;
    float r = xc - kf * f(kLn2Hi);
    r = r - kf * f(kLn2Lo);
    float q = f(kExpQ[4]);
    for (int i = 3; i >= 0; --i) q = q * r + f(kExpQ[i]);
    float p = (r * r) * q;
    p = (p + r) + 1.0f;
    // k is the low 9 bits of t read as a signed integer.
    std::int32_t k = static_cast<std::int32_t>(std::bit_cast<std::uint32_t>(t) & 0x1FF);
    if (k & 0x100) k -= 0x200;
    std::int32_t k1 = k >> 1, k2 = k - k1;
    auto scale = [](std::int32_t ki) { return f(static_cast<std::uint32_t>((ki + 127) & 0xFF) << 23); };
    return (p * scale(k1)) * scale(k2);
}

float sigmoid_c(float x) { return 1.0f / (1.0f + exp_c(-x)); }
float tanh_c(float x) { return 2.0f * sigmoid_c(x * 2.0f) - 1.0f; }
float silu_c(float x) { return x * sigmoid_c(x); }
float gelu_c(float x) { return x * sigmoid_c(f(kGeluScale) * x); }

std::pair<float, float> sincos_c(float x) {
    const float magic = f(kRoundMagic);
    float t = x * f(kTwoOverPi) + magic;
    float kf = t - magic;
    float r = x;
    for (std::uint32_t chunk : kHalfPiChunks) r = r - kf * f(chunk);
    float z = r * r;
    float s = f(kSinS[3]);
    for (int i = 2; i >= 0; --i) s = s * z + f(kSinS[i]);
    s = (s * z) * r + r;
    float c = f(kCosC[3]);
    for (int i = 2; i >= 0; --i) c = c * z + f(kCosC[i]);
    c = (c * z) * z;
    c = (c - z * 0.5f) + 1.0f;
    std::uint32_t q = std::bit_cast<std::uint32_t>(t);
    bool q0 = q & 1, q1 = q & 2;
    float sn = q0 ? c : s, cs = q0 ? s : c;
    if (q1) sn = -sn;
    if (q0 != q1) cs = -cs;
    return {sn, cs};
}

std::vector<float> softmax_c(const std::vector<float>& row, Reduction order) {
    if (row.empty()) throw std::invalid_argument("empty softmax row");
    float m = row[0];
    for (std::size_t i = 1; i < row.size(); ++i) m = max_total(m, row[i]);
    std::vector<float> e(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) e[i] = exp_c(row[i] - m);
    float s = reduce_sum(e, order);
    for (float& v : e) v = v / s;
    return e;
}

float exp_f(float x) { return std::exp(x); }
float sigmoid_f(float x) { return 1.0f / (1.0f + std::exp(-x)); }
float tanh_f(float x) { return std::tanh(x); }
float silu_f(float x) { return x / (1.0f + std::exp(-x)); }
float gelu_f(float x) { return x / (1.0f + std::exp(-(f(kGeluScale) * x))); }
std::pair<float, float> sincos_f(float x) { return {std::sin(x), std::cos(x)}; }

std::vector<float> softmax_f(const std::vector<float>& row) {
    if (row.empty()) throw std::invalid_argument("empty softmax row");
    float m = row[0];
    for (float v : row) m = std::max(m, v);
    std::vector<float> e(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) e[i] = std::exp(row[i] - m);
    float s = reduce_sum(e, Reduction::Forward);
    for (float& v : e) v = v / s;
    return e;
}

std::vector<float> linear(const std::vector<float>& x, const LinearWeights& w, Reduction order) {
    w.validate();
    const std::size_t rows = rows_of(x, w.in);
    std::vector<float> y(rows * w.out), terms(w.in);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < w.out; ++j) {
            for (std::size_t i = 0; i < w.in; ++i) terms[i] = w.w[j * w.in + i] * x[r * w.in + i];
            y[r * w.out + j] = reduce_sum(terms, order) + w.b[j];
        }
    return y;
}

std::vector<float> rmsnorm(const std::vector<float>& x, const std::vector<float>& gamma, float eps, Reduction order) {
    const std::size_t d = gamma.size();
    const std::size_t rows = rows_of(x, d);
    std::vector<float> y(x.size()), sq(d);
    for (std::size_t r = 0; r < rows; ++r) {
        const float* xr = &x[r * d];
        for (std::size_t i = 0; i < d; ++i) sq[i] = xr[i] * xr[i];
        float mean = reduce_sum(sq, order) / static_cast<float>(d);
        float inv = 1.0f / std::sqrt(mean + eps);
        for (std::size_t i = 0; i < d; ++i) y[r * d + i] = (xr[i] * inv) * gamma[i];
    }
    return y;
}

std::vector<float> rmsnorm_fused(const std::vector<float>& x, const std::vector<float>& gamma, float eps) {
    const std::size_t d = gamma.size();
    const std::size_t rows = rows_of(x, d);
    std::vector<float> y(x.size()), sq(d);
    for (std::size_t r = 0; r < rows; ++r) {
        const float* xr = &x[r * d];
        for (std::size_t i = 0; i < d; ++i) sq[i] = xr[i] * xr[i];
        float mean = reduce_sum(sq, Reduction::Forward) / static_cast<float>(d);
        double inv = 1.0f / std::sqrt(mean + eps);
        for (std::size_t i = 0; i < d; ++i)
            y[r * d + i] = static_cast<float>(static_cast<double>(xr[i]) * inv * static_cast<double>(gamma[i]));
    }
    return y;
}

std::vector<float> rope(const std::vector<float>& x, const std::vector<std::size_t>& positions, std::size_t head_dim,
                        double base) {
    if (head_dim == 0 || head_dim % 2 != 0) throw std::invalid_argument("RoPE needs an even dimension");
    const std::size_t rows = rows_of(x, head_dim);
    if (positions.size() != rows) throw std::invalid_argument("one position per row required");
    const std::vector<float> freq = rope_inv_freq(head_dim, base);
    std::vector<float> y(x.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < head_dim / 2; ++i) {
            auto [s, c] = sincos_c(static_cast<float>(positions[r]) * freq[i]);
            float x0 = x[r * head_dim + 2 * i], x1 = x[r * head_dim + 2 * i + 1];
            y[r * head_dim + 2 * i] = x0 * c - x1 * s;
            y[r * head_dim + 2 * i + 1] = x0 * s + x1 * c;
        }
    return y;
}

std::vector<float> attention(const std::vector<float>& q, const std::vector<float>& k, const std::vector<float>& v,
                             const BlockConfig& cfg, bool causal, Reduction order) {
    cfg.validate();
    const std::size_t d = cfg.d_model, n = cfg.seq_len, dk = cfg.head_dim();
    if (q.size() != k.size() || q.size() != v.size() || q.size() % (n * d) != 0)
        throw std::invalid_argument("attention shape mismatch");
    const std::size_t batch = q.size() / (n * d);
    const float scale = std::sqrt(static_cast<float>(dk));
    const float neg_inf = -std::numeric_limits<float>::infinity();
    std::vector<float> out(q.size()), terms(dk), scores, agg;
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t h = 0; h < cfg.n_heads; ++h)
            for (std::size_t t = 0; t < n; ++t) {
                const float* qt = &q[(b * n + t) * d + h * dk];
                scores.assign(n, 0.0f);
                for (std::size_t u = 0; u < n; ++u) {
                    const float* ku = &k[(b * n + u) * d + h * dk];
                    for (std::size_t i = 0; i < dk; ++i) terms[i] = qt[i] * ku[i];
                    scores[u] = reduce_sum(terms, order) / scale + ((causal && u > t) ? neg_inf : 0.0f);
                }
                std::vector<float> p = softmax_c(scores, order);
                agg.assign(n, 0.0f);
                for (std::size_t i = 0; i < dk; ++i) {
                    for (std::size_t u = 0; u < n; ++u) agg[u] = p[u] * v[(b * n + u) * d + h * dk + i];
                    out[(b * n + t) * d + h * dk + i] = reduce_sum(agg, order);
                }
            }
    return out;
}

std::vector<float> block(const std::vector<float>& x, const BlockWeights& w, const BlockConfig& cfg, Reduction order) {
    w.validate(cfg);
    const std::size_t d = cfg.d_model, n = cfg.seq_len, dk = cfg.head_dim();
    const std::size_t rows = rows_of(x, d);
    if (rows % n != 0) throw std::invalid_argument("activation rows must be whole sequences");
    const float eps = std::bit_cast<float>(cfg.eps);
    // Head-major rows of dk for RoPE, positions from the token index.
    std::vector<std::size_t> pos(rows * cfg.n_heads);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t h = 0; h < cfg.n_heads; ++h) pos[r * cfg.n_heads + h] = r % n;

    std::vector<float> h1 = rmsnorm(x, w.norm1, eps, order);
    std::vector<float> q = rope(linear(h1, w.wq, order), pos, dk, cfg.rope_base);
    std::vector<float> k = rope(linear(h1, w.wk, order), pos, dk, cfg.rope_base);
    std::vector<float> v = linear(h1, w.wv, order);
    std::vector<float> x1 = add(x, linear(attention(q, k, v, cfg, true, order), w.wo, order));
    std::vector<float> u = linear(rmsnorm(x1, w.norm2, eps, order), w.up, order);
    for (float& e : u) e = silu_c(e);
    return add(x1, linear(u, w.down, order));
}

}  // namespace spikegate::ref
