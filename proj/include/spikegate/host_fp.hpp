#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "spikegate/format.hpp"
#include "spikegate/fp_ops.hpp"

namespace spikegate {

// Host-side IEEE-754 oracle, independent of the circuits. FP32 uses native
// float arithmetic; narrower formats compute in double (exact or rounded
// once at 53 bits, which is innocuous for p <= 25) and round once more to
// the target format.
double to_double(std::uint64_t bits, const FpFormat& f);
std::uint64_t round_to_format(double v, const FpFormat& f);

// Unary operations (sqrt, recip, neg) read `a`.
std::uint64_t host_fp(FpOp op, Precision p, std::uint64_t a, std::uint64_t b = 0);

// Bit equality with every NaN treated as equal.
bool same_value(std::uint64_t a, std::uint64_t b, Precision p);

// Directed operand set: signed zeros, smallest and largest denormals, the
// smallest normal, 1 and its neighbours, values near overflow, both
// infinities and NaN.
std::vector<std::uint64_t> directed_values(Precision p);

// Finite patterns drawn uniformly over all bit patterns (NaN/Inf redrawn).
std::uint64_t random_finite(Precision p, std::mt19937_64& rng);

}  // namespace spikegate
