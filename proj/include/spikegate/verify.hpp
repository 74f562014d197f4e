#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spikegate/fidelity.hpp"
#include "spikegate/format.hpp"

namespace spikegate {

struct VerifyOptions {
    Precision format = Precision::FP32;  // fp_* ops only
    bool exact_rounding = true;          // remainder correction for div, recip, sqrt
};

// Circuit output compared against its host reference over seeded inputs.
// Budgets: IEEE ops 0 ULP (div/recip/sqrt 1 ULP without correction); exp 4,
// sigmoid 8, silu 11, gelu 11, sin/cos 4 against libm-based FP32 formulas;
// tanh 0 against the step-by-step composition; softmax 6 with >= 80% exact;
// rmsnorm 1 with >= 70% exact; linear 4 against pairwise summation and 0
// against the same accumulation order.
struct VerifyResult {
    std::string op;
    std::string reference;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    UlpReport report;
    std::uint64_t budget = 0;
    double min_zero_rate = 0.0;
    bool has_same_order = false;
    UlpReport same_order;
    bool pass = false;
};

std::vector<std::string> verify_ops();
// Throws std::invalid_argument for an unknown op, a bad format or zero samples.
VerifyResult verify_op(const std::string& op, std::size_t samples, std::uint64_t seed, VerifyOptions opt = {});

std::string verify_csv(const std::vector<VerifyResult>& rows);

}  // namespace spikegate
