#include "spikegate/verify.hpp"

#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spikegate/bitplane.hpp"
#include "spikegate/fp_ops.hpp"
#include "spikegate/host_fp.hpp"
#include "spikegate/layers.hpp"
#include "spikegate/model.hpp"
#include "spikegate/nonlinear.hpp"
#include "spikegate/reference.hpp"
#include "spikegate/seed.hpp"

namespace spikegate {

namespace {

std::vector<float> uniform(std::size_t n, float lo, float hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(lo, hi);
    std::vector<float> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

std::vector<float> normal(std::size_t n, float sd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> g(0.0f, sd);
    std::vector<float> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

template <class Fn>
std::vector<float> host(const std::vector<float>& x, Fn fn) {
    std::vector<float> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = fn(x[i]);
    return y;
}

std::vector<float> run(Lanes (*fn)(const Lanes&), const std::vector<float>& x) {
    return to_floats(fn(to_patterns(x)));
}

const std::pair<const char*, FpOp> kFpOps[] = {{"fp_add", FpOp::Add},   {"fp_sub", FpOp::Sub},
                                              {"fp_mul", FpOp::Mul},   {"fp_div", FpOp::Div},
                                              {"fp_sqrt", FpOp::Sqrt}, {"fp_recip", FpOp::Recip},
                                              {"fp_max", FpOp::Max},   {"fp_min", FpOp::Min}};

VerifyResult verify_fp(FpOp op, std::size_t samples, std::uint64_t seed, VerifyOptions opt) {
    if (opt.format == Precision::FP64) throw std::invalid_argument("no FP64 circuits");
    std::mt19937_64 rng(mix_seed(seed, {0xF0}));
    std::vector<std::uint64_t> a, b;
    // Directed pairs first, then random finite operands.
    const auto directed = directed_values(opt.format);
    for (std::uint64_t x : directed)
        for (std::uint64_t y : directed) {
            if (a.size() >= samples) break;
            a.push_back(x);
            b.push_back(y);
        }
    while (a.size() < samples) {
        a.push_back(random_finite(opt.format, rng));
        b.push_back(random_finite(opt.format, rng));
    }
    auto got = fp_apply(op, opt.format, a, b, {opt.exact_rounding});
    std::vector<std::uint64_t> want(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) want[i] = host_fp(op, opt.format, a[i], b[i]);
    VerifyResult r;
    r.reference = "host IEEE " + precision_name(opt.format) + " round-to-nearest-even";
    r.report = compare_patterns(got, want, opt.format);
    const bool nr = op == FpOp::Div || op == FpOp::Sqrt || op == FpOp::Recip;
    r.budget = nr && !opt.exact_rounding ? 1 : 0;
    return r;
}

}  // namespace

std::vector<std::string> verify_ops() {
    std::vector<std::string> ops;
    for (const auto& [name, op] : kFpOps) ops.push_back(name);
    for (const char* n : {"exp", "sigmoid", "tanh", "silu", "gelu", "sin", "cos", "softmax", "rmsnorm", "linear"})
        ops.push_back(n);
    return ops;
}

VerifyResult verify_op(const std::string& op, std::size_t samples, std::uint64_t seed, VerifyOptions opt) {
    if (samples == 0) throw std::invalid_argument("samples must be positive");
    const std::uint64_t s = mix_seed(seed, {0x7E});
    VerifyResult r;
    bool known = false;
    for (const auto& [name, fop] : kFpOps)
        if (op == name) {
            r = verify_fp(fop, samples, seed, opt);
            known = true;
        }
    if (!known) {
        known = true;
        if (op == "exp") {
            auto x = uniform(samples, -103.0f, 88.7f, s);
            r.report = compare_floats(run(exp_lanes, x), host(x, ref::exp_f));
            r.reference = "expf";
            r.budget = 4;
        } else if (op == "sigmoid" || op == "silu" || op == "gelu") {
            auto x = normal(samples, 4.0f, s);
            auto fn = op == "sigmoid" ? sigmoid_lanes : op == "silu" ? silu_lanes : gelu_lanes;
            auto rf = op == "sigmoid" ? ref::sigmoid_f : op == "silu" ? ref::silu_f : ref::gelu_f;
            r.report = compare_floats(run(fn, x), host(x, rf));
            r.reference = "fp32 formula with expf";
            r.budget = op == "sigmoid" ? 8 : 11;
        } else if (op == "tanh") {
            auto x = normal(samples, 4.0f, s);
            r.report = compare_floats(run(tanh_lanes, x), host(x, ref::tanh_c));
            r.reference = "step-by-step fp32 composition";
            r.budget = 0;
        } else if (op == "sin" || op == "cos") {
            auto x = uniform(samples, -62832.0f, 62832.0f, s);
            auto [sn, cs] = sincos_lanes(to_patterns(x));
            const bool sine = op == "sin";
            auto want = host(x, [&](float v) {
                auto [a, b] = ref::sincos_f(v);
                return sine ? a : b;
            });
            r.report = compare_floats(to_floats(sine ? sn : cs), want);
            r.reference = sine ? "sinf" : "cosf";
            r.budget = 4;
        } else if (op == "softmax") {
            const std::size_t row = 8;
            const std::size_t n = (samples + row - 1) / row * row;
            auto x = normal(n, 3.0f, s);
            auto y = to_floats(softmax_lanes(to_patterns(x), row));
            std::vector<float> want;
            for (std::size_t i = 0; i < n; i += row) {
                auto w = ref::softmax_f(std::vector<float>(x.begin() + i, x.begin() + i + row));
                want.insert(want.end(), w.begin(), w.end());
            }
            r.report = compare_floats(y, want);
            r.reference = "fp32 max, expf, running sum, divide (rows of 8)";
            r.budget = 6;
            r.min_zero_rate = 0.80;
        } else if (op == "rmsnorm") {
            const std::size_t d = 64;
            const std::size_t n = (samples + d - 1) / d * d;
            auto x = uniform(n, -3.0f, 3.0f, s);
            auto g = uniform(d, 0.5f, 1.5f, mix_seed(s, {1}));
            r.report = compare_floats(rmsnorm_forward(x, g, 1e-5f), ref::rmsnorm_fused(x, g, 1e-5f));
            r.reference = "fp32 statistics, product rounded once (rows of 64)";
            r.budget = 1;
            r.min_zero_rate = 0.70;
        } else if (op == "linear") {
            const std::size_t d = 64;
            const std::size_t n = (samples + d - 1) / d * d;
            auto x = uniform(n, 1.0f, 2.0f, s);
            LinearWeights w = random_linear(d, d, mix_seed(s, {1}), 1.0f, 2.0f);
            auto y = linear_forward(x, w);
            r.report = compare_floats(y, ref::linear(x, w, Reduction::Pairwise));
            r.same_order = compare_floats(y, ref::linear(x, w, Reduction::Forward));
            r.has_same_order = true;
            r.reference = "pairwise summation (64x64, U[1,2) data)";
            r.budget = 4;
        } else {
            known = false;
        }
    }
    if (!known) throw std::invalid_argument("unknown op: " + op);
    r.op = op;
    r.samples = r.report.sample_count;
    r.seed = seed;
    r.pass = r.report.max_ulp <= r.budget && r.report.nan_mismatches == 0 &&
             r.report.zero_ulp_rate >= r.min_zero_rate && (!r.has_same_order || r.same_order.max_ulp == 0);
    return r;
}

std::string verify_csv(const std::vector<VerifyResult>& rows) {
    std::ostringstream os;
    os << "op,samples,seed,max_ulp,mean_ulp,zero_ulp_rate,max_abs_err,budget,same_order_max_ulp,pass\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%llu,%llu,%.6g,%.6g,%.6g,%llu,%s,%d\n", r.op.c_str(), r.samples,
                      static_cast<unsigned long long>(r.seed), static_cast<unsigned long long>(r.report.max_ulp),
                      r.report.mean_ulp, r.report.zero_ulp_rate, r.report.max_abs_err,
                      static_cast<unsigned long long>(r.budget),
                      r.has_same_order ? std::to_string(r.same_order.max_ulp).c_str() : "",
                      r.pass ? 1 : 0);
        os << buf;
    }
    return os.str();
}

}  // namespace spikegate
