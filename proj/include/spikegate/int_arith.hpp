#pragma once

#include <cstdint>

#include "spikegate/circuit.hpp"

namespace spikegate {

struct AddResult {
    Word sum;
    Wire carry;
};

struct ShiftResult {
    Word value;
    Wire sticky;
};

struct CompareResult {
    Wire lt, eq, gt;
};

struct FullAdderOut {
    Wire sum, carry;
};

// S = (a^b)^c, C = (a&b) | ((a^b)&c): 13 neurons on free inputs.
FullAdderOut full_adder(Circuit& c, Wire a, Wire b, Wire cin);

// Chain of full adders; 13 neurons per bit on free inputs.
AddResult ripple_add(Circuit& c, const Word& a, const Word& b, Wire cin);

// Propagate/generate form: P_i = a_i^b_i and G_i = a_i&b_i in one parallel
// layer, carries C_{i+1} = G_i | (T_i & C_i) with T_i = a_i|b_i, sums P_i^C_i.
AddResult pg_carry_chain(Circuit& c, const Word& a, const Word& b, Wire cin);

// a - b as a + ~b + 1; carry = 1 iff a >= b (unsigned).
AddResult subtract(Circuit& c, const Word& a, const Word& b);

// Unsigned a >= b from the borrow chain alone (no sum bits).
Wire unsigned_ge(Circuit& c, const Word& a, const Word& b);

CompareResult compare(Circuit& c, const Word& a, const Word& b);

Wire is_zero(Circuit& c, const Word& a);
Wire equals_const(Circuit& c, const Word& a, std::uint64_t k);

// Logical right shift by `amount` with the OR of all shifted-out bits as
// sticky. Amount bits worth >= width saturate: zero result, sticky = OR(x).
ShiftResult shift_right_sticky(Circuit& c, const Word& x, const Word& amount);
Word shift_left(Circuit& c, const Word& x, const Word& amount);

// Count of zeros above the highest set bit; x = 0 gives x.size().
Word leading_zero_count(Circuit& c, const Word& x);

// Partial products a_i & b_j reduced by a greedy Wallace tree of 3:2
// compressors, final PG adder. Result width a.size() + b.size().
Word array_multiply(Circuit& c, const Word& a, const Word& b);

// Word helpers (two's complement where signed).
Word zero_extend(const Word& a, unsigned width);
Word sign_extend(const Word& a, unsigned width);
Word slice(const Word& a, unsigned lo, unsigned count);
Word concat(const Word& low, const Word& high);
Word add_words(Circuit& c, const Word& a, const Word& b);
Word sub_words(Circuit& c, const Word& a, const Word& b);
Word add_const(Circuit& c, const Word& a, std::int64_t k);
Word negate(Circuit& c, const Word& a);
Word increment(Circuit& c, const Word& a, Wire inc);

}  // namespace spikegate
