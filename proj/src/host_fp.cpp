#include "spikegate/host_fp.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace spikegate {

namespace {

float as_float(std::uint64_t bits) { return std::bit_cast<float>(static_cast<std::uint32_t>(bits)); }
std::uint64_t as_bits(float v) { return std::bit_cast<std::uint32_t>(v); }

// Key under which unsigned order matches numeric order (-0 below +0).
std::uint64_t order_key(std::uint64_t bits, const FpFormat& f) {
    const std::uint64_t all = f.sign_bit() | (f.sign_bit() - 1);
    return (bits & f.sign_bit()) ? (~bits & all) : (bits | f.sign_bit());
}

}  // namespace

double to_double(std::uint64_t bits, const FpFormat& f) {
    const bool neg = bits & f.sign_bit();
    const std::uint64_t field = (bits >> f.man_bits) & f.exp_mask();
    const std::uint64_t man = bits & f.man_mask();
    double mag;
    if (field == f.exp_mask())
        mag = man ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
    else if (field == 0)
        mag = std::ldexp(static_cast<double>(man), 1 - f.bias() - static_cast<int>(f.man_bits));
    else
        mag = std::ldexp(static_cast<double>(man | (1ULL << f.man_bits)),
                         static_cast<int>(field) - f.bias() - static_cast<int>(f.man_bits));
    return neg ? -mag : mag;
}

std::uint64_t round_to_format(double v, const FpFormat& f) {
    if (std::isnan(v)) return f.quiet_nan();
    const std::uint64_t sign = std::signbit(v) ? f.sign_bit() : 0;
    double a = std::fabs(v);
    if (std::isinf(a)) return sign | f.infinity();
    if (a == 0) return sign;
    const int m = static_cast<int>(f.man_bits);
    const int emin = 1 - f.bias();
    int e;
    std::frexp(a, &e);
    const int ex = std::max(e - 1, emin);
    const double n = std::nearbyint(std::ldexp(a, m - ex));  // ties to even
    const double r = std::ldexp(n, ex - m);
    if (r == 0) return sign;
    std::frexp(r, &e);
    if (e - 1 < emin) return sign | static_cast<std::uint64_t>(std::ldexp(r, m - emin));
    const std::uint64_t field = static_cast<std::uint64_t>(e - 1 + f.bias());
    if (field >= f.exp_mask()) return sign | f.infinity();
    const std::uint64_t man = static_cast<std::uint64_t>(std::ldexp(r, m - (e - 1))) & f.man_mask();
    return sign | (field << f.man_bits) | man;
}

std::uint64_t host_fp(FpOp op, Precision p, std::uint64_t a, std::uint64_t b) {
    const FpFormat f = format_of(p);
    if (op == FpOp::Neg) return a ^ f.sign_bit();
    if (op == FpOp::Max || op == FpOp::Min) {
        if (f.is_nan(a) || f.is_nan(b)) return f.quiet_nan();
        bool ge = order_key(a, f) >= order_key(b, f);
        return (op == FpOp::Max) == ge ? a : b;
    }
    if (p == Precision::FP32) {
        float x = as_float(a), y = as_float(b);
        switch (op) {
            case FpOp::Add: return as_bits(x + y);
            case FpOp::Sub: return as_bits(x - y);
            case FpOp::Mul: return as_bits(x * y);
            case FpOp::Div: return as_bits(x / y);
            case FpOp::Sqrt: return as_bits(std::sqrt(x));
            case FpOp::Recip: return as_bits(1.0f / x);
            default: break;
        }
    } else if (p != Precision::FP64) {
        double x = to_double(a, f), y = to_double(b, f);
        switch (op) {
            case FpOp::Add: return round_to_format(x + y, f);
            case FpOp::Sub: return round_to_format(x - y, f);
            case FpOp::Mul: return round_to_format(x * y, f);
            case FpOp::Div: return round_to_format(x / y, f);
            case FpOp::Sqrt: return round_to_format(std::sqrt(x), f);
            case FpOp::Recip: return round_to_format(1.0 / x, f);
            default: break;
        }
    }
    throw std::invalid_argument("no host oracle for this operation/format");
}

std::vector<std::uint64_t> directed_values(Precision p) {
    const FpFormat f = format_of(p);
    const std::uint64_t one = static_cast<std::uint64_t>(f.bias()) << f.man_bits;
    const std::uint64_t min_normal = 1ULL << f.man_bits;
    const std::uint64_t max_finite = f.infinity() - 1;
    const std::uint64_t two = one + min_normal;
    std::vector<std::uint64_t> mags{0,
                                    1,
                                    2,
                                    f.man_mask(),
                                    min_normal,
                                    min_normal + 1,
                                    one - 1,
                                    one,
                                    one + 1,
                                    one | (1ULL << (f.man_bits - 1)),
                                    two,
                                    max_finite,
                                    max_finite - 1,
                                    max_finite - min_normal,
                                    f.infinity()};
    std::vector<std::uint64_t> out;
    for (std::uint64_t m : mags) {
        out.push_back(m);
        out.push_back(m | f.sign_bit());
    }
    out.push_back(f.quiet_nan());
    out.push_back(f.quiet_nan() | f.sign_bit() | 1);
    return out;
}

std::uint64_t random_finite(Precision p, std::mt19937_64& rng) {
    const FpFormat f = format_of(p);
    const std::uint64_t mask = f.sign_bit() | (f.sign_bit() - 1);
    for (;;) {
        std::uint64_t v = rng() & mask;
        if (!f.is_nan(v) && !f.is_inf(v)) return v;
    }
}

bool same_value(std::uint64_t a, std::uint64_t b, Precision p) {
    const FpFormat f = format_of(p);
    if (f.is_nan(a) || f.is_nan(b)) return f.is_nan(a) && f.is_nan(b);
    return a == b;
}

}  // namespace spikegate
