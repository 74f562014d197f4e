#include "spikegate/int_arith.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace spikegate {

namespace {

void require_same_width(const Word& a, const Word& b) {
    if (a.size() != b.size()) throw std::invalid_argument("word width mismatch");
}

}  // namespace

FullAdderOut full_adder(Circuit& c, Wire a, Wire b, Wire cin) {
    Wire x = c.xor_(a, b);
    Wire s = c.xor_(x, cin);
    Wire carry = c.or_(c.and_(a, b), c.and_(x, cin));
    return {s, carry};
}

AddResult ripple_add(Circuit& c, const Word& a, const Word& b, Wire cin) {
    require_same_width(a, b);
    AddResult r{Word(a.size()), cin};
    for (std::size_t i = 0; i < a.size(); ++i) {
        FullAdderOut fa = full_adder(c, a[i], b[i], r.carry);
        r.sum[i] = fa.sum;
        r.carry = fa.carry;
    }
    return r;
}

AddResult pg_carry_chain(Circuit& c, const Word& a, const Word& b, Wire cin) {
    require_same_width(a, b);
    const std::size_t n = a.size();
    Word p(n), g(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = c.xor_(a[i], b[i]);
        g[i] = c.and_(a[i], b[i]);
        t[i] = c.or_(a[i], b[i]);
    }
    AddResult r{Word(n), cin};
    for (std::size_t i = 0; i < n; ++i) {
        r.sum[i] = c.xor_(p[i], r.carry);
        r.carry = c.or_(g[i], c.and_(t[i], r.carry));
    }
    return r;
}

AddResult subtract(Circuit& c, const Word& a, const Word& b) {
    return ripple_add(c, a, c.not_word(b), kHigh);
}

Wire unsigned_ge(Circuit& c, const Word& a, const Word& b) {
    require_same_width(a, b);
    Wire carry = kHigh;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Wire nb = c.not_(b[i]);
        carry = c.or_(c.and_(a[i], nb), c.and_(c.or_(a[i], nb), carry));
    }
    return carry;
}

CompareResult compare(Circuit& c, const Word& a, const Word& b) {
    require_same_width(a, b);
    Wire ge = unsigned_ge(c, a, b);
    Word same(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) same[i] = c.not_(c.xor_(a[i], b[i]));
    Wire eq = c.and_all(same);
    Wire lt = c.not_(ge);
    Wire gt = c.and_(ge, c.not_(eq));
    return {lt, eq, gt};
}

Wire is_zero(Circuit& c, const Word& a) { return c.not_(c.or_any(a)); }

Wire equals_const(Circuit& c, const Word& a, std::uint64_t k) {
    Word lits(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) lits[i] = ((k >> i) & 1) ? a[i] : c.not_(a[i]);
    return c.and_all(lits);
}

ShiftResult shift_right_sticky(Circuit& c, const Word& x, const Word& amount) {
    const std::size_t w = x.size();
    Word cur = x;
    Wire sticky = kLow;
    std::vector<Wire> big;
    for (std::size_t k = 0; k < amount.size(); ++k) {
        std::size_t sh = k < 63 ? (std::size_t{1} << k) : w;
        if (sh >= w) {
            big.push_back(amount[k]);
            continue;
        }
        Wire s = amount[k];
        Wire lost = c.or_any(std::span<const Wire>(cur.data(), sh));
        sticky = c.or_(sticky, c.and_(s, lost));
        Word next(w);
        for (std::size_t i = 0; i < w; ++i) next[i] = c.mux(s, i + sh < w ? cur[i + sh] : kLow, cur[i]);
        cur.swap(next);
    }
    Wire saturate = c.or_any(big);
    if (saturate != kLow) {
        Wire keep = c.not_(saturate);
        for (Wire& b : cur) b = c.and_(keep, b);
        sticky = c.mux(saturate, c.or_any(x), sticky);
    }
    return {cur, sticky};
}

Word shift_left(Circuit& c, const Word& x, const Word& amount) {
    const std::size_t w = x.size();
    Word cur = x;
    std::vector<Wire> big;
    for (std::size_t k = 0; k < amount.size(); ++k) {
        std::size_t sh = k < 63 ? (std::size_t{1} << k) : w;
        if (sh >= w) {
            big.push_back(amount[k]);
            continue;
        }
        Wire s = amount[k];
        Word next(w);
        for (std::size_t i = 0; i < w; ++i) next[i] = c.mux(s, i >= sh ? cur[i - sh] : kLow, cur[i]);
        cur.swap(next);
    }
    Wire saturate = c.or_any(big);
    if (saturate != kLow) {
        Wire keep = c.not_(saturate);
        for (Wire& b : cur) b = c.and_(keep, b);
    }
    return cur;
}

namespace {

struct LzcPart {
    Wire zero;
    Word count;  // LSB first
};

// `msb_first` has power-of-two length.
LzcPart lzc_tree(Circuit& c, const std::vector<Wire>& msb_first, std::size_t lo, std::size_t len) {
    if (len == 1) return {c.not_(msb_first[lo]), {}};
    std::size_t half = len / 2;
    LzcPart hi = lzc_tree(c, msb_first, lo, half);
    LzcPart low = lzc_tree(c, msb_first, lo + half, half);
    LzcPart r;
    r.zero = c.and_(hi.zero, low.zero);
    for (std::size_t i = 0; i < hi.count.size(); ++i) r.count.push_back(c.mux(hi.zero, low.count[i], hi.count[i]));
    r.count.push_back(hi.zero);
    return r;
}

}  // namespace

Word leading_zero_count(Circuit& c, const Word& x) {
    const std::size_t n = x.size();
    std::size_t p = 1;
    while (p <= n) p <<= 1;
    std::vector<Wire> msb_first;
    for (std::size_t i = n; i-- > 0;) msb_first.push_back(x[i]);
    while (msb_first.size() < p) msb_first.push_back(kHigh);
    return lzc_tree(c, msb_first, 0, p).count;
}

Word array_multiply(Circuit& c, const Word& a, const Word& b) {
    const std::size_t width = a.size() + b.size();
    std::vector<std::vector<Wire>> cols(width + 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            Wire pp = c.and_(a[i], b[j]);
            if (pp != kLow) cols[i + j].push_back(pp);
        }
    auto height = [&] {
        std::size_t h = 0;
        for (auto& col : cols) h = std::max(h, col.size());
        return h;
    };
    while (height() > 2) {
        std::vector<std::vector<Wire>> next(cols.size() + 1);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const auto& col = cols[k];
            std::size_t i = 0;
            for (; i + 3 <= col.size(); i += 3) {
                FullAdderOut fa = full_adder(c, col[i], col[i + 1], col[i + 2]);
                next[k].push_back(fa.sum);
                if (fa.carry != kLow) next[k + 1].push_back(fa.carry);
            }
            for (; i < col.size(); ++i) next[k].push_back(col[i]);
        }
        cols.swap(next);
    }
    Word r0(width, kLow), r1(width, kLow);
    for (std::size_t k = 0; k < width && k < cols.size(); ++k) {
        if (cols[k].size() > 0) r0[k] = cols[k][0];
        if (cols[k].size() > 1) r1[k] = cols[k][1];
    }
    return pg_carry_chain(c, r0, r1, kLow).sum;
}

Word zero_extend(const Word& a, unsigned width) {
    Word r(a.begin(), a.begin() + std::min<std::size_t>(a.size(), width));
    r.resize(width, kLow);
    return r;
}

Word sign_extend(const Word& a, unsigned width) {
    Word r(a.begin(), a.begin() + std::min<std::size_t>(a.size(), width));
    Wire s = a.empty() ? kLow : a.back();
    r.resize(width, s);
    return r;
}

Word slice(const Word& a, unsigned lo, unsigned count) {
    Word r;
    for (unsigned i = 0; i < count; ++i) r.push_back(lo + i < a.size() ? a[lo + i] : kLow);
    return r;
}

Word concat(const Word& low, const Word& high) {
    Word r = low;
    r.insert(r.end(), high.begin(), high.end());
    return r;
}

Word add_words(Circuit& c, const Word& a, const Word& b) { return ripple_add(c, a, b, kLow).sum; }

Word sub_words(Circuit& c, const Word& a, const Word& b) { return subtract(c, a, b).sum; }

Word add_const(Circuit& c, const Word& a, std::int64_t k) {
    return ripple_add(c, a, Circuit::constant(static_cast<std::uint64_t>(k), static_cast<unsigned>(a.size())), kLow).sum;
}

Word negate(Circuit& c, const Word& a) {
    return ripple_add(c, c.not_word(a), Word(a.size(), kLow), kHigh).sum;
}

Word increment(Circuit& c, const Word& a, Wire inc) {
    return ripple_add(c, a, Word(a.size(), kLow), inc).sum;
}

}  // namespace spikegate
