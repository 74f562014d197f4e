#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spikegate/bitplane.hpp"
#include "spikegate/format.hpp"
#include "spikegate/model.hpp"

namespace spikegate {

// Monotone integer image of a non-NaN pattern: -0 and +0 both map to 0.
std::int64_t ordered_index(std::uint64_t bits, Precision p = Precision::FP32);
// |ordered_index(a) - ordered_index(b)|; throws on NaN.
std::uint64_t ulp_distance(std::uint64_t a, std::uint64_t b, Precision p = Precision::FP32);
std::uint64_t ulp_distance(float a, float b);
// Distance charged to a NaN against a number: the full span -Inf..+Inf.
std::uint64_t max_ulp_span(Precision p);

struct UlpReport {
    std::uint64_t max_ulp = 0;
    double mean_ulp = 0.0;
    double zero_ulp_rate = 1.0;
    double max_abs_err = 0.0;
    std::size_t sample_count = 0;
    std::size_t nan_mismatches = 0;  // NaN on exactly one side
};

// NaN against NaN is a 0-ULP match whatever the payload.
UlpReport compare_patterns(const std::vector<std::uint64_t>& got, const std::vector<std::uint64_t>& want,
                           Precision p = Precision::FP32);
UlpReport compare_tensors(const BitPlaneTensor& got, const BitPlaneTensor& want);
UlpReport compare_floats(const std::vector<float>& got, const std::vector<float>& want);

std::string format_report(const UlpReport& r);

// decode(f_circuit(encode(x))) against the Forward host reference of f.
enum class SteTarget { Identity, AddConst, Silu, Linear };
SteTarget parse_ste_target(const std::string& name);
std::string ste_target_name(SteTarget t);

struct SteReport {
    std::size_t checked = 0;
    std::size_t mismatches = 0;
};

// AddConst adds 0.7f; Linear applies seeded 64x64 weights, so x must hold
// whole 64-element vectors.
SteReport ste_identity_check(SteTarget f, const std::vector<float>& x, std::uint64_t seed);

// Stacks seeded random blocks on seeded inputs and compares the circuit
// output after every block with a host reference that uses `reference`
// order for every reduction.
struct DepthScanConfig {
    BlockConfig block;
    std::size_t sequences = 4;
    double weight_scale = 0.35;
    float x_lo = 1.0f, x_hi = 2.0f;
    Reduction reference = Reduction::Reverse;
};

// Element d-1 is the report after d blocks.
std::vector<UlpReport> depth_scan(std::size_t block_count, std::uint64_t seed, const DepthScanConfig& cfg = {});
std::string depth_scan_csv(const std::vector<UlpReport>& reports);

// Encoding fidelity on values ~ N(0, 100^2) drawn as FP32 and clipped to
// +-kEncoderRange, the shared range of the rate and TTFS encoders.
// spatial_truncated keeps the top `steps` bits of the FP32 pattern.
enum class EncodingScheme { Spatial, SpatialTruncated, Rate, Ttfs };
inline constexpr double kEncoderRange = 18000.0;

struct EncodingRow {
    EncodingScheme scheme;
    unsigned steps = 0;
    std::size_t n = 0;
    double mse_mean = 0.0, mse_std = 0.0;
    std::uint64_t seed = 0;
    unsigned trials = 0;
};

std::string scheme_name(EncodingScheme s);
std::vector<float> encoding_inputs(std::size_t n, std::uint64_t seed);
float truncate_bits(float v, unsigned keep);
// Mean and sample std of the per-trial MSE over `trials` independent draws.
EncodingRow encoding_benchmark(EncodingScheme s, unsigned steps, std::size_t n, std::uint64_t seed,
                               unsigned trials = 5);
// The comparison table: rate 16/32, TTFS 16/32/1024, spatial, truncated 2..32.
std::vector<EncodingRow> encoding_table(std::size_t n, std::uint64_t seed, unsigned trials = 5);
std::string encoding_csv(const std::vector<EncodingRow>& rows);

}  // namespace spikegate
