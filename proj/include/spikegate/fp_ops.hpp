#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spikegate/bitplane.hpp"
#include "spikegate/evaluate.hpp"
#include "spikegate/unit.hpp"

namespace spikegate {

enum class FpOp { Add, Sub, Mul, Div, Sqrt, Recip, Max, Min, Neg };

unsigned fp_arity(FpOp op);
std::string fp_op_name(FpOp op);
FpOp parse_fp_op(const std::string& name);

struct FpOptions {
    // Remainder correction after Newton-Raphson (div, recip, sqrt).
    bool exact_rounding = true;
    bool operator==(const FpOptions&) const = default;
};

// Netlist for one operator, built on first use and cached per
// (op, format, options). FP64 has no pipelines.
const Unit& fp_unit(FpOp op, Precision p, FpOptions opt = {});

// Lane-wise application on raw bit patterns; `b` is ignored for unary ops.
std::vector<std::uint64_t> fp_apply(FpOp op, Precision p, const std::vector<std::uint64_t>& a,
                                    const std::vector<std::uint64_t>& b = {}, FpOptions opt = {});
// Same through the spiking evaluator with the given physics.
std::vector<std::uint64_t> fp_apply_spiking(FpOp op, Precision p, const std::vector<std::uint64_t>& a,
                                            const std::vector<std::uint64_t>& b, const Physics& physics,
                                            std::uint64_t seed, FpOptions opt = {});

std::vector<float> fp32_apply(FpOp op, const std::vector<float>& a, const std::vector<float>& b = {},
                              FpOptions opt = {});

// Spatially encoded operands; formats and element counts must agree.
BitPlaneTensor fp_add(const BitPlaneTensor& a, const BitPlaneTensor& b);
BitPlaneTensor fp_sub(const BitPlaneTensor& a, const BitPlaneTensor& b);
BitPlaneTensor fp_mul(const BitPlaneTensor& a, const BitPlaneTensor& b);
BitPlaneTensor fp_div(const BitPlaneTensor& a, const BitPlaneTensor& b, FpOptions opt = {});
BitPlaneTensor fp_sqrt(const BitPlaneTensor& a, FpOptions opt = {});
BitPlaneTensor fp_reciprocal(const BitPlaneTensor& b, FpOptions opt = {});
BitPlaneTensor fp_max(const BitPlaneTensor& a, const BitPlaneTensor& b);
BitPlaneTensor fp_min(const BitPlaneTensor& a, const BitPlaneTensor& b);

}  // namespace spikegate
