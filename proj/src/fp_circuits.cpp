#include "spikegate/fp_circuits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spikegate/int_arith.hpp"

namespace spikegate {

namespace {

Word zeros(unsigned n) { return Word(n, kLow); }

Word with_sign(Word mag, Wire sign) {
    mag.push_back(sign);
    return mag;
}

Word pattern(const FpFormat& f, std::uint64_t bits) { return Circuit::constant(bits, f.width()); }

std::uint64_t one_bits(const FpFormat& f) { return static_cast<std::uint64_t>(f.bias()) << f.man_bits; }

Wire or_of(Circuit& c, std::initializer_list<Wire> w) { return c.or_any(std::span<const Wire>(w.begin(), w.size())); }

// Significand with the hidden bit made explicit, shifted left until its
// leading one sits at the top, and the matching signed exponent.
struct Normalized {
    Word sig;
    Word exp;
};

Normalized normalize(Circuit& c, const FpFormat& f, const FpFields& x) {
    const unsigned ew = exp_work_width(f);
    Word sig = concat(x.man, {x.hidden});
    Word lz = leading_zero_count(c, sig);
    return {shift_left(c, sig, lz), sub_words(c, zero_extend(x.exp_eff, ew), zero_extend(lz, ew))};
}

// Extended-format pattern for a positive value with the given mantissa
// field (target width) and exponent field.
Word ext_value(const FpFormat& f, const Word& man, const Word& exp_field) {
    return concat(concat(zeros(4), slice(man, 0, f.man_bits)), with_sign(exp_field, kLow));
}

// Mantissa field of v in [1,2) rounded to m bits, kept below 2.
std::uint64_t mantissa_field(double v, unsigned m) {
    double scaled = std::nearbyint(std::ldexp(v - 1.0, static_cast<int>(m)));
    std::uint64_t top = (1ULL << m) - 1;
    return std::min(static_cast<std::uint64_t>(scaled), top);
}

// Shift a normal extended-format value's significand so the result reads as
// value * 2^(M+5), given that its exponent field lies in [bias-1, bias-1+max_shift].
Word scaled_significand(Circuit& c, const FpFormat& f, const Word& x_ext, unsigned max_shift) {
    const FpFormat fe = extended_format(f);
    const unsigned bits = max_shift > 1 ? 2 : 1;
    Word man = slice(x_ext, 0, fe.man_bits);
    Word field = slice(x_ext, fe.man_bits, fe.exp_bits);
    Word sh = slice(add_const(c, field, -(f.bias() - 1)), 0, bits);
    Word sig = zero_extend(concat(man, {kHigh}), fe.man_bits + 1 + max_shift);
    return shift_left(c, sig, sh);
}

// Picks the last candidate whose guard is set; guards are monotone, so this
// is the largest admissible correction.
struct Candidate {
    Wire guard;
    Word value, remainder;
};

Candidate pick(Circuit& c, const std::vector<Candidate>& cands) {
    Candidate r = cands.front();
    for (std::size_t i = 1; i < cands.size(); ++i) {
        r.value = c.mux(cands[i].guard, cands[i].value, r.value);
        r.remainder = c.mux(cands[i].guard, cands[i].remainder, r.remainder);
    }
    return r;
}

Wire nonnegative(Circuit& c, const Word& x) { return c.not_(x.back()); }

Word shifted_up(const Word& x, unsigned k, unsigned width) { return slice(concat(zeros(k), x), 0, width); }

Word order_key(Circuit& c, const FpFormat& f, const Word& x) {
    const unsigned w = f.width();
    Wire s = x[w - 1];
    Word k(w);
    for (unsigned i = 0; i + 1 < w; ++i) k[i] = c.xor_(x[i], s);
    k[w - 1] = c.not_(s);
    return k;
}

}  // namespace

unsigned exp_work_width(const FpFormat& f) { return f.exp_bits + 4; }

FpFormat extended_format(const FpFormat& f) { return {f.exp_bits, f.man_bits + 4}; }

FpFields unpack(Circuit& c, const FpFormat& f, const Word& x) {
    if (x.size() != f.width()) throw std::invalid_argument("operand width does not match format");
    FpFields r;
    r.man = slice(x, 0, f.man_bits);
    r.exp = slice(x, f.man_bits, f.exp_bits);
    r.sign = x[f.width() - 1];
    r.exp_zero = is_zero(c, r.exp);
    r.exp_ones = c.and_all(r.exp);
    r.man_zero = is_zero(c, r.man);
    r.nan = c.and_(r.exp_ones, c.not_(r.man_zero));
    r.inf = c.and_(r.exp_ones, r.man_zero);
    r.zero = c.and_(r.exp_zero, r.man_zero);
    r.hidden = c.not_(r.exp_zero);
    r.exp_eff = r.exp;
    r.exp_eff[0] = c.or_(r.exp[0], r.exp_zero);
    return r;
}

Word round_pack(Circuit& c, const FpFormat& f, Wire sign, const Word& sig, unsigned point,
                const Word& exp, Wire sticky, bool allow_right) {
    const unsigned x = static_cast<unsigned>(sig.size());
    const unsigned m = f.man_bits, e = f.exp_bits;
    const unsigned ew = static_cast<unsigned>(exp.size());
    if (x < m + 2) throw std::invalid_argument("significand narrower than format");
    if (ew != exp_work_width(f)) throw std::invalid_argument("exponent word width");

    // Biased exponent of the top significand bit, and the left shift that
    // would bring that bit's exponent down to 1.
    Word e0 = add_const(c, exp, static_cast<std::int64_t>(x) - 1 - static_cast<std::int64_t>(point));
    Word limit = add_const(c, e0, -1);
    Word lz = leading_zero_count(c, sig);
    Word lzw = zero_extend(lz, ew);
    Wire normal = nonnegative(c, sub_words(c, limit, lzw));
    Word amount = c.mux(normal, lz, slice(limit, 0, static_cast<unsigned>(lz.size())));
    Word shifted = shift_left(c, sig, amount);
    Wire lost = kLow;
    if (allow_right) {
        Wire under = limit.back();
        ShiftResult rs = shift_right_sticky(c, sig, negate(c, limit));
        shifted = c.mux(under, rs.value, shifted);
        lost = c.and_(under, rs.sticky);
    }

    Word man = slice(shifted, x - 1 - m, m);
    Wire lsb = shifted[x - 1 - m];
    Wire round = shifted[x - 2 - m];
    Wire rest = or_of(c, {c.or_any(slice(shifted, 0, x - 2 - m)), sticky, lost});
    Wire up = c.and_(round, c.or_(rest, lsb));

    Word field = c.mux(normal, sub_words(c, e0, lzw), zeros(ew));
    Wire overflow = nonnegative(c, add_const(c, field, 1 - (std::int64_t{1} << e)));
    Word mag = increment(c, concat(man, slice(field, 0, e)), up);
    mag = c.mux(overflow, Circuit::constant(f.infinity(), m + e), mag);
    mag = c.mux(is_zero(c, sig), zeros(m + e), mag);
    return with_sign(mag, sign);
}

Word build_fp_add(Circuit& c, const FpFormat& f, const Word& a, const Word& b, bool specials) {
    const unsigned m = f.man_bits, w = f.width();
    Wire swap = c.not_(unsigned_ge(c, slice(a, 0, w - 1), slice(b, 0, w - 1)));
    Word big = c.mux(swap, b, a);
    Word small = c.mux(swap, a, b);
    FpFields x = unpack(c, f, big), y = unpack(c, f, small);

    // Headroom, hidden, mantissa, guard, round, sticky.
    auto datapath = [&](const FpFields& v) { return concat(concat(zeros(3), v.man), {v.hidden, kLow}); };
    Word sx = datapath(x);
    ShiftResult al = shift_right_sticky(c, datapath(y), sub_words(c, x.exp_eff, y.exp_eff));
    al.value[0] = c.or_(al.value[0], al.sticky);
    Wire sub = c.xor_(x.sign, y.sign);
    Word sy(al.value.size());
    for (std::size_t i = 0; i < sy.size(); ++i) sy[i] = c.xor_(al.value[i], sub);
    Word sum = pg_carry_chain(c, sx, sy, sub).sum;

    Wire sign = c.mux(is_zero(c, sum), c.and_(x.sign, y.sign), x.sign);
    Word r = round_pack(c, f, sign, sum, m + 3, zero_extend(x.exp_eff, exp_work_width(f)), kLow, false);
    if (!specials) return r;
    Wire nan = or_of(c, {x.nan, y.nan, c.and_(c.and_(x.inf, y.inf), sub)});
    r = c.mux(x.inf, big, r);
    return c.mux(nan, pattern(f, f.quiet_nan()), r);
}

Word build_fp_sub(Circuit& c, const FpFormat& f, const Word& a, const Word& b, bool specials) {
    return build_fp_add(c, f, a, build_fp_neg(c, f, b), specials);
}

Word build_fp_mul(Circuit& c, const FpFormat& f, const Word& a, const Word& b, bool specials) {
    const unsigned m = f.man_bits, ew = exp_work_width(f);
    FpFields x = unpack(c, f, a), y = unpack(c, f, b);
    Word prod = array_multiply(c, concat(x.man, {x.hidden}), concat(y.man, {y.hidden}));
    Word e = add_const(c, add_words(c, zero_extend(x.exp_eff, ew), zero_extend(y.exp_eff, ew)), -f.bias());
    Wire sign = c.xor_(x.sign, y.sign);
    Word r = round_pack(c, f, sign, prod, 2 * m, e, kLow, true);
    if (!specials) return r;
    Wire nan = or_of(c, {x.nan, y.nan, c.and_(x.inf, y.zero), c.and_(y.inf, x.zero)});
    r = c.mux(c.or_(x.inf, y.inf), with_sign(Circuit::constant(f.infinity(), f.width() - 1), sign), r);
    return c.mux(nan, pattern(f, f.quiet_nan()), r);
}

unsigned seed_index_bits(const FpFormat& f) { return std::min(8u, f.man_bits); }

std::vector<std::uint64_t> recip_seed_table(const FpFormat& f) {
    const unsigned k = seed_index_bits(f);
    std::vector<std::uint64_t> t(1u << k);
    for (std::size_t i = 0; i < t.size(); ++i) {
        double mid = 1.0 + (static_cast<double>(i) + 0.5) / static_cast<double>(t.size());
        t[i] = mantissa_field(2.0 / mid, f.man_bits);
    }
    return t;
}

std::vector<std::uint64_t> sqrt_seed_table(const FpFormat& f) {
    const unsigned k = seed_index_bits(f);
    const std::size_t n = std::size_t{1} << k;
    std::vector<std::uint64_t> t(2 * n);
    for (std::size_t i = 0; i < t.size(); ++i) {
        double mid = (1.0 + (static_cast<double>(i % n) + 0.5) / static_cast<double>(n)) * (i >= n ? 2.0 : 1.0);
        t[i] = mantissa_field(std::sqrt(mid), f.man_bits);
    }
    return t;
}

Word lookup(Circuit& c, const Word& addr, const std::vector<std::uint64_t>& table, unsigned width) {
    if (table.size() != (std::size_t{1} << addr.size())) throw std::invalid_argument("table size");
    auto decode = [&](std::span<const Wire> bits) {
        std::vector<Wire> m{kHigh};
        for (Wire b : bits) {
            Wire nb = c.not_(b);
            std::vector<Wire> next(m.size() * 2);
            for (std::size_t i = 0; i < m.size(); ++i) {
                next[i] = c.and_(m[i], nb);
                next[i + m.size()] = c.and_(m[i], b);
            }
            m.swap(next);
        }
        return m;
    };
    const std::size_t half = addr.size() / 2;
    std::vector<Wire> lo = decode(std::span<const Wire>(addr.data(), half));
    std::vector<Wire> hi = decode(std::span<const Wire>(addr.data() + half, addr.size() - half));
    std::vector<Wire> minterm(table.size(), kLow);
    std::vector<bool> built(table.size(), false);
    Word out(width);
    for (unsigned bit = 0; bit < width; ++bit) {
        std::vector<Wire> terms;
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (!((table[i] >> bit) & 1)) continue;
            if (!built[i]) {
                minterm[i] = c.and_(lo[i & (lo.size() - 1)], hi[i >> half]);
                built[i] = true;
            }
            terms.push_back(minterm[i]);
        }
        out[bit] = c.or_any(terms);
    }
    return out;
}

Word build_recip_nr(Circuit& c, const FpFormat& f, const Word& x, unsigned iterations) {
    const FpFormat fe = extended_format(f);
    const unsigned k = seed_index_bits(f);
    Word man = slice(x, 0, fe.man_bits);
    Word field = slice(x, fe.man_bits, fe.exp_bits);
    Word seed_man = lookup(c, slice(man, fe.man_bits - k, k), recip_seed_table(f), f.man_bits);
    Word seed_exp = sub_words(c, Circuit::constant(2 * f.bias() - 1, fe.exp_bits), field);
    Word r = ext_value(f, seed_man, seed_exp);
    Word two = pattern(fe, static_cast<std::uint64_t>(fe.bias() + 1) << fe.man_bits);
    for (unsigned i = 0; i < iterations; ++i) {
        Word err = build_fp_sub(c, fe, two, build_fp_mul(c, fe, x, r, false), false);
        r = build_fp_mul(c, fe, r, err, false);
    }
    return r;
}

Word build_fp_div(Circuit& c, const FpFormat& f, const Word& a, const Word& b, bool exact_rounding) {
    const unsigned m = f.man_bits;
    const FpFormat fe = extended_format(f);
    FpFields x = unpack(c, f, a), y = unpack(c, f, b);
    Wire sign = c.xor_(x.sign, y.sign);
    Normalized na = normalize(c, f, x), nb = normalize(c, f, y);
    Word one_field = Circuit::constant(f.bias(), f.exp_bits);

    Word a1 = ext_value(f, na.sig, one_field);
    Word b1 = ext_value(f, nb.sig, one_field);
    Word q = build_fp_mul(c, fe, a1, build_recip_nr(c, f, b1), false);
    // q in (1/2, 2): W = q * 2^(m+5).
    Word wq = scaled_significand(c, f, q, 1);
    Word e = add_const(c, sub_words(c, na.exp, nb.exp), f.bias());

    Word r;
    if (!exact_rounding) {
        r = round_pack(c, f, sign, wq, m + 5, e, kLow, true);
    } else {
        // Qc approximates floor(MA * 2^(m+1) / MB); the remainder picks the
        // correction and supplies the round and sticky bits.
        const unsigned rw = m + 6;
        Word qc = slice(wq, 4, m + 2);
        Word mb = zero_extend(nb.sig, rw);
        Word rem = sub_words(c, shifted_up(na.sig, m + 1, rw), slice(array_multiply(c, nb.sig, qc), 0, rw));
        Word mb2 = shifted_up(nb.sig, 1, rw);
        Word r_m2 = add_words(c, rem, mb2);
        std::vector<Candidate> cands{
            {kHigh, add_const(c, qc, -3), add_words(c, r_m2, mb)},
            {nonnegative(c, r_m2), add_const(c, qc, -2), r_m2},
        };
        Word r_m1 = add_words(c, rem, mb);
        cands.push_back({nonnegative(c, r_m1), add_const(c, qc, -1), r_m1});
        cands.push_back({nonnegative(c, rem), qc, rem});
        Word r_p1 = sub_words(c, rem, mb);
        cands.push_back({nonnegative(c, r_p1), add_const(c, qc, 1), r_p1});
        Word r_p2 = sub_words(c, rem, mb2);
        cands.push_back({nonnegative(c, r_p2), add_const(c, qc, 2), r_p2});
        Candidate best = pick(c, cands);

        Word twice = shifted_up(best.remainder, 1, rw + 1);
        Word mbw = zero_extend(nb.sig, rw + 1);
        Wire rb = unsigned_ge(c, twice, mbw);
        Wire tie = compare(c, twice, mbw).eq;
        Wire st = c.and_(c.not_(is_zero(c, best.remainder)), c.not_(tie));
        r = round_pack(c, f, sign, concat({rb}, best.value), m + 2, e, st, true);
    }

    Wire nan = or_of(c, {x.nan, y.nan, c.and_(x.zero, y.zero), c.and_(x.inf, y.inf)});
    Word signed_zero = with_sign(zeros(f.width() - 1), sign);
    Word signed_inf = with_sign(Circuit::constant(f.infinity(), f.width() - 1), sign);
    r = c.mux(c.or_(x.zero, y.inf), signed_zero, r);
    r = c.mux(c.or_(x.inf, y.zero), signed_inf, r);
    return c.mux(nan, pattern(f, f.quiet_nan()), r);
}

Word build_fp_recip(Circuit& c, const FpFormat& f, const Word& b, bool exact_rounding) {
    return build_fp_div(c, f, pattern(f, one_bits(f)), b, exact_rounding);
}

Word build_fp_sqrt(Circuit& c, const FpFormat& f, const Word& a, bool exact_rounding) {
    const unsigned m = f.man_bits, ew = exp_work_width(f);
    const FpFormat fe = extended_format(f);
    const unsigned k = seed_index_bits(f);
    FpFields x = unpack(c, f, a);
    Normalized na = normalize(c, f, x);
    Word u = add_const(c, na.exp, -f.bias());
    Wire par = u[0];
    Word half = sign_extend(slice(u, 1, ew - 1), ew);
    Word e = add_const(c, half, f.bias());

    // a1 = a scaled into [1,4), seeded from (parity, top mantissa bits).
    Word a1 = ext_value(f, na.sig, increment(c, Circuit::constant(f.bias(), f.exp_bits), par));
    Word addr = concat(slice(na.sig, m - k, k), {par});
    Word est = ext_value(f, lookup(c, addr, sqrt_seed_table(f), m), Circuit::constant(f.bias(), f.exp_bits));
    for (unsigned i = 0; i < kNewtonIterations; ++i) {
        Word s = build_fp_add(c, fe, est, build_fp_mul(c, fe, a1, build_recip_nr(c, f, est), false), false);
        // s lies in [2,4): halving is an exponent decrement.
        Word field = add_const(c, slice(s, fe.man_bits, fe.exp_bits), -1);
        est = concat(slice(s, 0, fe.man_bits), with_sign(field, kLow));
    }
    // est in [1/2, 2]: W = sqrt(a1) * 2^(m+5).
    Word ws = scaled_significand(c, f, est, 2);

    Word r;
    if (!exact_rounding) {
        r = round_pack(c, f, kLow, ws, m + 5, e, kLow, false);
    } else {
        // Sc approximates floor(sqrt(N)), N = MA * 2^(m+2+par); corrections
        // t in [-2, 2] test N - (Sc+t)^2 >= 0.
        const unsigned rw = m + 8;
        Word sc = slice(ws, 4, m + 3);
        Word scw = zero_extend(sc, rw);
        Word n = c.mux(par, shifted_up(na.sig, m + 3, rw), shifted_up(na.sig, m + 2, rw));
        Word rem = sub_words(c, n, slice(array_multiply(c, sc, sc), 0, rw));
        Word sc2 = shifted_up(sc, 1, rw), sc4 = shifted_up(sc, 2, rw);
        Word d_m1 = add_const(c, add_words(c, rem, sc2), -1);
        Word d_p1 = add_const(c, sub_words(c, rem, sc2), -1);
        Word d_p2 = add_const(c, sub_words(c, rem, sc4), -4);
        Word d_m2 = add_const(c, add_words(c, rem, sc4), -4);
        Candidate best = pick(c, {
                                     {kHigh, add_const(c, sc, -2), d_m2},
                                     {nonnegative(c, d_m1), add_const(c, sc, -1), d_m1},
                                     {nonnegative(c, rem), sc, rem},
                                     {nonnegative(c, d_p1), add_const(c, sc, 1), d_p1},
                                     {nonnegative(c, d_p2), add_const(c, sc, 2), d_p2},
                                 });
        Wire rb = compare(c, best.remainder, zero_extend(best.value, rw)).gt;
        Wire st = c.or_(rb, c.not_(is_zero(c, best.remainder)));
        r = round_pack(c, f, kLow, concat({rb}, best.value), m + 2, e, st, false);
    }

    Wire nan = c.or_(x.nan, c.and_(x.sign, c.not_(x.zero)));
    r = c.mux(c.or_(x.zero, x.inf), a, r);
    return c.mux(nan, pattern(f, f.quiet_nan()), r);
}

Word build_fp_max(Circuit& c, const FpFormat& f, const Word& a, const Word& b) {
    FpFields x = unpack(c, f, a), y = unpack(c, f, b);
    Wire ge = unsigned_ge(c, order_key(c, f, a), order_key(c, f, b));
    return c.mux(c.or_(x.nan, y.nan), pattern(f, f.quiet_nan()), c.mux(ge, a, b));
}

Word build_fp_min(Circuit& c, const FpFormat& f, const Word& a, const Word& b) {
    FpFields x = unpack(c, f, a), y = unpack(c, f, b);
    Wire ge = unsigned_ge(c, order_key(c, f, a), order_key(c, f, b));
    return c.mux(c.or_(x.nan, y.nan), pattern(f, f.quiet_nan()), c.mux(ge, b, a));
}

Word build_fp_neg(Circuit& c, const FpFormat& f, const Word& a) {
    Word r = a;
    r[f.width() - 1] = c.not_(a[f.width() - 1]);
    return r;
}

}  // namespace spikegate
