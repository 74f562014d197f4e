#pragma once

#include <cstdint>
#include <vector>

#include "spikegate/circuit.hpp"
#include "spikegate/format.hpp"

namespace spikegate {

// Floating-point circuits over LSB-first words of f.width() wires laid out
// as mantissa, exponent, sign. Any {E, M} layout with IEEE conventions works;
// rounding is always to nearest even and every NaN result is the canonical
// quiet NaN.

struct FpFields {
    Wire sign;
    Word exp, man;
    Wire exp_zero, exp_ones, man_zero;
    Wire nan, inf, zero;
    Word exp_eff;  // biased exponent, denormals read as 1
    Wire hidden;
};

FpFields unpack(Circuit& c, const FpFormat& f, const Word& x);

// Signed exponent words inside the pipelines carry E + 4 bits.
unsigned exp_work_width(const FpFormat& f);

// Rounds and packs sig / 2^point * 2^(exp - bias). `exp` is a signed word of
// exp_work_width bits and `sticky` flags nonzero bits below sig. Results too
// small for a normal come out as denormals through a sticky right shift,
// which is only built when allow_right is set.
Word round_pack(Circuit& c, const FpFormat& f, Wire sign, const Word& sig, unsigned point,
                const Word& exp, Wire sticky, bool allow_right);

// `specials` off drops NaN/Inf handling, for internal stages whose operands
// are known to be finite.
Word build_fp_add(Circuit& c, const FpFormat& f, const Word& a, const Word& b, bool specials = true);
Word build_fp_sub(Circuit& c, const FpFormat& f, const Word& a, const Word& b, bool specials = true);
Word build_fp_mul(Circuit& c, const FpFormat& f, const Word& a, const Word& b, bool specials = true);

// Newton-Raphson quotient a * (1/b). With exact_rounding a remainder step
// fixes the final bit, making the result correctly rounded.
Word build_fp_div(Circuit& c, const FpFormat& f, const Word& a, const Word& b, bool exact_rounding);
Word build_fp_recip(Circuit& c, const FpFormat& f, const Word& b, bool exact_rounding);
// Heron iteration x = (x + a/x) / 2 with the same remainder option.
Word build_fp_sqrt(Circuit& c, const FpFormat& f, const Word& a, bool exact_rounding);

// Total order on non-NaN values (-0 < +0); NaN in gives canonical NaN out.
Word build_fp_max(Circuit& c, const FpFormat& f, const Word& a, const Word& b);
Word build_fp_min(Circuit& c, const FpFormat& f, const Word& a, const Word& b);
Word build_fp_neg(Circuit& c, const FpFormat& f, const Word& a);

// Iterations run in this wider format (4 more mantissa bits).
FpFormat extended_format(const FpFormat& f);
inline constexpr unsigned kNewtonIterations = 3;

// Seed tables hold target-format mantissa fields. The reciprocal table is
// indexed by the top seed_index_bits() mantissa bits of b in [1,2) and holds
// round(1/midpoint); the square-root table is indexed by (parity, top bits)
// of a in [1,4) and holds round(sqrt(midpoint)).
unsigned seed_index_bits(const FpFormat& f);
std::vector<std::uint64_t> recip_seed_table(const FpFormat& f);
std::vector<std::uint64_t> sqrt_seed_table(const FpFormat& f);

// ROM: decoder over `addr` followed by one OR plane per output bit.
Word lookup(Circuit& c, const Word& addr, const std::vector<std::uint64_t>& table, unsigned width);

// x is a positive normal in extended_format(f); returns the Newton-Raphson
// approximation of 1/x in the same format.
Word build_recip_nr(Circuit& c, const FpFormat& f, const Word& x, unsigned iterations = kNewtonIterations);

}  // namespace spikegate
