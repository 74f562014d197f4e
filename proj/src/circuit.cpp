#include "spikegate/circuit.hpp"

#include <stdexcept>
#include <vector>

namespace spikegate {

Wire Circuit::and_(Wire a, Wire b) {
    if (fold_) {
        if (a == kLow || b == kLow) return kLow;
        if (a == kHigh) return b;
        if (b == kHigh) return a;
    }
    return nl_.add_neuron({{a, b}, {1.0, 1.0}, 0.0, kAndThreshold});
}

Wire Circuit::or_(Wire a, Wire b) {
    if (fold_) {
        if (a == kHigh || b == kHigh) return kHigh;
        if (a == kLow) return b;
        if (b == kLow) return a;
    }
    return nl_.add_neuron({{a, b}, {1.0, 1.0}, 0.0, kOrThreshold});
}

Wire Circuit::not_(Wire a) {
    if (fold_ && is_const(a)) return a == kLow ? kHigh : kLow;
    if (fold_) {
        auto it = not_memo_.find(a);
        if (it != not_memo_.end()) return it->second;
    }
    Wire r = nl_.add_neuron({{a, kLow}, {-1.0, 0.0}, kNotBias, kNotThreshold});
    if (fold_) not_memo_.emplace(a, r);
    return r;
}

Wire Circuit::xor_(Wire a, Wire b) {
    if (fold_) {
        if (a == kLow) return b;
        if (b == kLow) return a;
        if (a == kHigh) return not_(b);
        if (b == kHigh) return not_(a);
    }
    Wire na = not_(a);
    Wire nb = not_(b);
    return or_(and_(a, nb), and_(na, b));
}

Wire Circuit::mux(Wire s, Wire a, Wire b) {
    if (fold_) {
        if (s == kHigh) return a;
        if (s == kLow) return b;
        if (a == b) return a;
        if (a == kHigh) return or_(s, b);
        if (a == kLow) return and_(not_(s), b);
        if (b == kHigh) return or_(not_(s), a);
        if (b == kLow) return and_(s, a);
    }
    Wire ns = not_(s);
    return or_(and_(not_(ns), a), and_(ns, b));
}

Wire Circuit::and_all(std::span<const Wire> w) {
    if (w.empty()) return kHigh;
    std::vector<Wire> level(w.begin(), w.end());
    while (level.size() > 1) {
        std::vector<Wire> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(and_(level[i], level[i + 1]));
        if (level.size() % 2) next.push_back(level.back());
        level.swap(next);
    }
    return level[0];
}

Wire Circuit::or_any(std::span<const Wire> w) {
    if (w.empty()) return kLow;
    std::vector<Wire> level(w.begin(), w.end());
    while (level.size() > 1) {
        std::vector<Wire> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(or_(level[i], level[i + 1]));
        if (level.size() % 2) next.push_back(level.back());
        level.swap(next);
    }
    return level[0];
}

Word Circuit::constant(std::uint64_t value, unsigned width) {
    Word w(width);
    for (unsigned i = 0; i < width; ++i) w[i] = (i < 64 && ((value >> i) & 1)) ? kHigh : kLow;
    return w;
}

Word Circuit::mux(Wire s, const Word& a, const Word& b) {
    if (a.size() != b.size()) throw std::invalid_argument("mux width mismatch");
    Word r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mux(s, a[i], b[i]);
    return r;
}

Word Circuit::not_word(const Word& a) {
    Word r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = not_(a[i]);
    return r;
}

}  // namespace spikegate
