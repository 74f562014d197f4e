#include "spikegate/fidelity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spikegate/coding.hpp"
#include "spikegate/fp_ops.hpp"
#include "spikegate/host_fp.hpp"
#include "spikegate/layers.hpp"
#include "spikegate/nonlinear.hpp"
#include "spikegate/reference.hpp"
#include "spikegate/seed.hpp"

namespace spikegate {

namespace {

UlpReport aggregate(std::size_t n, Precision p, const std::vector<std::uint64_t>& got,
                    const std::vector<std::uint64_t>& want) {
    const FpFormat f = format_of(p);
    UlpReport r;
    r.sample_count = n;
    unsigned __int128 sum = 0;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < n; ++i) {
        bool ga = f.is_nan(got[i]), wa = f.is_nan(want[i]);
        std::uint64_t d;
        if (ga && wa) {
            d = 0;
        } else if (ga || wa) {
            d = max_ulp_span(p);
            ++r.nan_mismatches;
            r.max_abs_err = INFINITY;
        } else {
            d = ulp_distance(got[i], want[i], p);
            double e = std::fabs(to_double(got[i], f) - to_double(want[i], f));
            if (std::isnan(e)) e = INFINITY;  // Inf against Inf of the other sign
            if (d != 0 && e > r.max_abs_err) r.max_abs_err = e;
        }
        sum += d;
        if (d == 0) ++zeros;
        if (d > r.max_ulp) r.max_ulp = d;
    }
    if (n) {
        r.mean_ulp = static_cast<double>(sum) / static_cast<double>(n);
        r.zero_ulp_rate = static_cast<double>(zeros) / static_cast<double>(n);
    }
    return r;
}

}  // namespace

std::int64_t ordered_index(std::uint64_t bits, Precision p) {
    const FpFormat f = format_of(p);
    if (f.is_nan(bits)) throw std::invalid_argument("ULP distance of a NaN");
    std::uint64_t mag = bits & (f.sign_bit() - 1);
    auto m = static_cast<std::int64_t>(mag);
    return (bits & f.sign_bit()) ? -m : m;
}

std::uint64_t ulp_distance(std::uint64_t a, std::uint64_t b, Precision p) {
    std::int64_t ia = ordered_index(a, p), ib = ordered_index(b, p);
    return ia > ib ? static_cast<std::uint64_t>(ia) - static_cast<std::uint64_t>(ib)
                   : static_cast<std::uint64_t>(ib) - static_cast<std::uint64_t>(ia);
}

std::uint64_t ulp_distance(float a, float b) {
    return ulp_distance(std::bit_cast<std::uint32_t>(a), std::bit_cast<std::uint32_t>(b), Precision::FP32);
}

std::uint64_t max_ulp_span(Precision p) { return 2 * format_of(p).infinity(); }

UlpReport compare_patterns(const std::vector<std::uint64_t>& got, const std::vector<std::uint64_t>& want, Precision p) {
    if (got.size() != want.size()) throw std::invalid_argument("compared tensors differ in size");
    return aggregate(got.size(), p, got, want);
}

UlpReport compare_tensors(const BitPlaneTensor& got, const BitPlaneTensor& want) {
    if (got.format() != want.format()) throw std::invalid_argument("compared tensors differ in format");
    return compare_patterns(decode(got), decode(want), got.format());
}

UlpReport compare_floats(const std::vector<float>& got, const std::vector<float>& want) {
    return compare_patterns(to_patterns(got), to_patterns(want), Precision::FP32);
}

std::string format_report(const UlpReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "max_ulp=%llu mean_ulp=%.4f zero_ulp_rate=%.4f max_abs_err=%.3g n=%zu",
                  static_cast<unsigned long long>(r.max_ulp), r.mean_ulp, r.zero_ulp_rate, r.max_abs_err,
                  r.sample_count);
    return buf;
}

SteTarget parse_ste_target(const std::string& name) {
    for (SteTarget t : {SteTarget::Identity, SteTarget::AddConst, SteTarget::Silu, SteTarget::Linear})
        if (ste_target_name(t) == name) return t;
    throw std::invalid_argument("unknown STE function: " + name);
}

std::string ste_target_name(SteTarget t) {
    switch (t) {
        case SteTarget::Identity: return "identity";
        case SteTarget::AddConst: return "add_const";
        case SteTarget::Silu: return "silu";
        case SteTarget::Linear: return "linear";
    }
    return "";
}

SteReport ste_identity_check(SteTarget f, const std::vector<float>& x, std::uint64_t seed) {
    const BitPlaneTensor in = encode(std::span<const float>(x));
    std::vector<float> got, want;
    switch (f) {
        case SteTarget::Identity:
            got = decode_f32(in);
            want = x;
            break;
        case SteTarget::AddConst: {
            BitPlaneTensor c = encode(std::vector<float>(x.size(), 0.7f));
            got = decode_f32(fp_add(in, c));
            for (float v : x) want.push_back(v + 0.7f);
            break;
        }
        case SteTarget::Silu:
            got = decode_f32(fp_silu(in));
            for (float v : x) want.push_back(ref::silu_c(v));
            break;
        case SteTarget::Linear: {
            if (x.size() % 64 != 0) throw std::invalid_argument("linear STE check needs whole 64-element vectors");
            LinearWeights w = random_linear(64, 64, mix_seed(seed, {0x57E}), -0.125f, 0.125f);
            got = decode_f32(linear_forward(in, w));
            want = ref::linear(x, w);
            break;
        }
    }
    SteReport r;
    r.checked = got.size();
    for (std::size_t i = 0; i < got.size(); ++i)
        if (!same_value(std::bit_cast<std::uint32_t>(got[i]), std::bit_cast<std::uint32_t>(want[i]), Precision::FP32))
            ++r.mismatches;
    return r;
}

std::vector<UlpReport> depth_scan(std::size_t block_count, std::uint64_t seed, const DepthScanConfig& cfg) {
    if (block_count == 0) throw std::invalid_argument("depth scan needs at least one block");
    cfg.block.validate();
    std::mt19937_64 rng(mix_seed(seed, {0xD0}));
    std::uniform_real_distribution<float> u(cfg.x_lo, cfg.x_hi);
    std::vector<float> x(cfg.sequences * cfg.block.seq_len * cfg.block.d_model);
    for (float& v : x) v = u(rng);
    std::vector<float> snn = x, host = x;
    std::vector<UlpReport> out;
    for (std::size_t d = 0; d < block_count; ++d) {
        BlockWeights w = random_block(cfg.block, mix_seed(seed, {0xB1, d}), cfg.weight_scale);
        snn = transformer_block_forward(snn, w, cfg.block);
        host = ref::block(host, w, cfg.block, cfg.reference);
        out.push_back(compare_floats(snn, host));
    }
    return out;
}

std::string depth_scan_csv(const std::vector<UlpReport>& reports) {
    std::ostringstream os;
    os << "depth,max_ulp,mean_ulp,zero_ulp_rate,max_abs_err\n";
    char buf[160];
    for (std::size_t d = 0; d < reports.size(); ++d) {
        const UlpReport& r = reports[d];
        std::snprintf(buf, sizeof buf, "%zu,%llu,%.6f,%.6f,%.9g\n", d + 1, static_cast<unsigned long long>(r.max_ulp),
                      r.mean_ulp, r.zero_ulp_rate, r.max_abs_err);
        os << buf;
    }
    return os.str();
}

std::string scheme_name(EncodingScheme s) {
    switch (s) {
        case EncodingScheme::Spatial: return "spatial";
        case EncodingScheme::SpatialTruncated: return "spatial_truncated";
        case EncodingScheme::Rate: return "rate";
        case EncodingScheme::Ttfs: return "ttfs";
    }
    return "";
}

std::vector<float> encoding_inputs(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 100.0);
    std::vector<float> v(n);
    for (float& x : v) x = static_cast<float>(std::clamp(g(rng), -kEncoderRange, kEncoderRange));
    return v;
}

float truncate_bits(float v, unsigned keep) {
    if (keep >= 32) return v;
    std::uint32_t mask = keep == 0 ? 0u : ~0u << (32 - keep);
    return std::bit_cast<float>(std::bit_cast<std::uint32_t>(v) & mask);
}

EncodingRow encoding_benchmark(EncodingScheme s, unsigned steps, std::size_t n, std::uint64_t seed, unsigned trials) {
    if (n == 0 || trials == 0) throw std::invalid_argument("encoding benchmark needs n >= 1 and trials >= 1");
    if (steps == 0 && s != EncodingScheme::Spatial) throw std::invalid_argument("steps must be at least 1");
    std::vector<double> mse;
    for (unsigned t = 0; t < trials; ++t) {
        std::vector<float> x = encoding_inputs(n, mix_seed(seed, {0xE0, t}));
        std::vector<double> y(n);
        switch (s) {
            case EncodingScheme::Spatial: {
                auto back = decode_f32(encode(std::span<const float>(x)));
                for (std::size_t i = 0; i < n; ++i) y[i] = back[i];
                break;
            }
            case EncodingScheme::SpatialTruncated:
                for (std::size_t i = 0; i < n; ++i) y[i] = truncate_bits(x[i], steps);
                break;
            case EncodingScheme::Rate: {
                std::mt19937_64 rng(mix_seed(seed, {0xE1, t}));
                for (std::size_t i = 0; i < n; ++i) y[i] = rate_decode(rate_encode(x[i], steps, kEncoderRange, rng));
                break;
            }
            case EncodingScheme::Ttfs:
                for (std::size_t i = 0; i < n; ++i)
                    y[i] = ttfs_decode(ttfs_encode(x[i], steps, -kEncoderRange, kEncoderRange));
                break;
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double e = y[i] - static_cast<double>(x[i]);
            sum += e * e;
        }
        mse.push_back(sum / static_cast<double>(n));
    }
    double mean = 0.0, var = 0.0;
    for (double m : mse) mean += m;
    mean /= trials;
    for (double m : mse) var += (m - mean) * (m - mean);
    double sd = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
    return {s, s == EncodingScheme::Spatial ? 32u : steps, n, mean, sd, seed, trials};
}

std::vector<EncodingRow> encoding_table(std::size_t n, std::uint64_t seed, unsigned trials) {
    std::vector<EncodingRow> rows;
    for (unsigned st : {16u, 32u}) rows.push_back(encoding_benchmark(EncodingScheme::Rate, st, n, seed, trials));
    for (unsigned st : {16u, 32u, 1024u}) rows.push_back(encoding_benchmark(EncodingScheme::Ttfs, st, n, seed, trials));
    for (unsigned k : {2u, 4u, 8u, 16u, 32u})
        rows.push_back(encoding_benchmark(EncodingScheme::SpatialTruncated, k, n, seed, trials));
    rows.push_back(encoding_benchmark(EncodingScheme::Spatial, 32, n, seed, trials));
    return rows;
}

std::string encoding_csv(const std::vector<EncodingRow>& rows) {
    std::ostringstream os;
    os << "scheme,steps,n,mse_mean,mse_std,seed\n";
    char buf[200];
    for (const EncodingRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%u,%zu,%.6e,%.6e,%llu\n", scheme_name(r.scheme).c_str(), r.steps, r.n,
                      r.mse_mean, r.mse_std, static_cast<unsigned long long>(r.seed));
        os << buf;
    }
    return os.str();
}

}  // namespace spikegate
