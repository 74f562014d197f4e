#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spikegate/format.hpp"
#include "spikegate/fp_ops.hpp"

namespace spikegate {

enum class ScanParameter { Beta, NoiseSigma, ThresholdDelta };
std::string parameter_name(ScanParameter p);

// Gates on free inputs; adder4 is a 4-bit ripple adder (carry-in held at 0),
// mult4x4 the array multiplier, shifter the 28-bit sticky right shifter
// with a 5-bit amount; fp ops run the cached FP circuits.
struct ScanTarget {
    enum Kind { And, Or, Xor, Adder4, Mult4x4, Shifter, Fp } kind = And;
    Precision format = Precision::FP32;
    FpOp op = FpOp::Add;
};
// "and", "or", "xor", "adder4", "mult4x4", "shifter", "<format>_<op>" (e.g. fp8_add).
ScanTarget parse_scan_target(const std::string& name);
std::string scan_target_name(const ScanTarget& t);

struct ScanConfig {
    ScanParameter parameter = ScanParameter::NoiseSigma;
    std::vector<double> values;
    unsigned trials = 10;
    std::uint64_t seed = 1;
    ScanTarget target;
    // Evaluations per trial: exhaustive sets are repeated up to this many
    // lanes; random targets draw this many cases.
    std::size_t cases = 1024;
    void validate() const;
};

// Word accuracy counts an evaluation correct only if every output bit
// matches the ideal circuit; bit accuracy is the fraction of matching bits.
struct ScanRow {
    std::string target;
    ScanParameter parameter;
    double value = 0.0;
    double trial_mean = 0.0, trial_std = 0.0;  // word accuracy, percent
    unsigned trials = 0;
    std::uint64_t seed = 0;
    double bit_mean = 0.0;  // percent
};

// Every trial owns a stream derived from (seed, target, parameter value,
// trial), so results do not depend on scheduling.
std::vector<ScanRow> run_scan(const ScanConfig& cfg);
// These check the parameter kind and its range, then call run_scan.
std::vector<ScanRow> run_beta_scan(const ScanConfig& cfg);
std::vector<ScanRow> run_noise_scan(const ScanConfig& cfg);
std::vector<ScanRow> run_threshold_scan(const ScanConfig& cfg);
std::vector<ScanRow> run_fp_noise_scan(const ScanConfig& cfg);

std::string scan_csv(const std::vector<ScanRow>& rows);

}  // namespace spikegate
