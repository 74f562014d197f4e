#include "spikegate/fp_ops.hpp"

#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "spikegate/fp_circuits.hpp"

namespace spikegate {

namespace {

constexpr FpOp kAllOps[] = {FpOp::Add, FpOp::Sub, FpOp::Mul,  FpOp::Div, FpOp::Sqrt,
                            FpOp::Recip, FpOp::Max, FpOp::Min, FpOp::Neg};

std::unique_ptr<Unit> build_unit(FpOp op, Precision p, FpOptions opt) {
    if (p == Precision::FP64) throw std::invalid_argument("no fp64 pipelines");
    const FpFormat f = format_of(p);
    Netlist nl;
    Circuit c(nl);
    std::vector<unsigned> in{f.width()};
    Word a = c.input_word(f.width());
    Word b;
    if (fp_arity(op) == 2) {
        b = c.input_word(f.width());
        in.push_back(f.width());
    }
    Word r;
    switch (op) {
        case FpOp::Add: r = build_fp_add(c, f, a, b); break;
        case FpOp::Sub: r = build_fp_sub(c, f, a, b); break;
        case FpOp::Mul: r = build_fp_mul(c, f, a, b); break;
        case FpOp::Div: r = build_fp_div(c, f, a, b, opt.exact_rounding); break;
        case FpOp::Sqrt: r = build_fp_sqrt(c, f, a, opt.exact_rounding); break;
        case FpOp::Recip: r = build_fp_recip(c, f, a, opt.exact_rounding); break;
        case FpOp::Max: r = build_fp_max(c, f, a, b); break;
        case FpOp::Min: r = build_fp_min(c, f, a, b); break;
        case FpOp::Neg: r = build_fp_neg(c, f, a); break;
    }
    c.output(r);
    nl.prune();
    return std::make_unique<Unit>(std::move(nl), std::move(in), std::vector<unsigned>{f.width()});
}

void check_pair(const BitPlaneTensor& a, const BitPlaneTensor& b) {
    if (a.format() != b.format()) throw std::invalid_argument("operand formats differ");
    if (a.size() != b.size()) throw std::invalid_argument("operand sizes differ");
}

BitPlaneTensor apply_planes(FpOp op, std::vector<const BitPlaneTensor*> in, FpOptions opt) {
    return fp_unit(op, in[0]->format(), opt).run_planes(in, {in[0]->format()})[0];
}

}  // namespace

unsigned fp_arity(FpOp op) {
    return (op == FpOp::Sqrt || op == FpOp::Recip || op == FpOp::Neg) ? 1 : 2;
}

std::string fp_op_name(FpOp op) {
    switch (op) {
        case FpOp::Add: return "add";
        case FpOp::Sub: return "sub";
        case FpOp::Mul: return "mul";
        case FpOp::Div: return "div";
        case FpOp::Sqrt: return "sqrt";
        case FpOp::Recip: return "recip";
        case FpOp::Max: return "max";
        case FpOp::Min: return "min";
        case FpOp::Neg: return "neg";
    }
    return "?";
}

FpOp parse_fp_op(const std::string& name) {
    for (FpOp op : kAllOps)
        if (fp_op_name(op) == name) return op;
    throw std::invalid_argument("unknown operation: " + name);
}

const Unit& fp_unit(FpOp op, Precision p, FpOptions opt) {
    static std::mutex mu;
    static std::map<std::tuple<FpOp, Precision, bool>, std::unique_ptr<Unit>> cache;
    // Only the rounding flag changes the netlist, and only for NR-based ops.
    bool exact = (op == FpOp::Div || op == FpOp::Sqrt || op == FpOp::Recip) && opt.exact_rounding;
    std::lock_guard lock(mu);
    auto& slot = cache[{op, p, exact}];
    if (!slot) slot = build_unit(op, p, {exact});
    return *slot;
}

std::vector<std::uint64_t> fp_apply(FpOp op, Precision p, const std::vector<std::uint64_t>& a,
                                    const std::vector<std::uint64_t>& b, FpOptions opt) {
    const Unit& u = fp_unit(op, p, opt);
    if (fp_arity(op) == 1) return u.run({a})[0];
    if (a.size() != b.size()) throw std::invalid_argument("operand sizes differ");
    return u.run({a, b})[0];
}

std::vector<std::uint64_t> fp_apply_spiking(FpOp op, Precision p, const std::vector<std::uint64_t>& a,
                                            const std::vector<std::uint64_t>& b, const Physics& physics,
                                            std::uint64_t seed, FpOptions opt) {
    const Unit& u = fp_unit(op, p, opt);
    if (fp_arity(op) == 1) return u.run_spiking({a}, physics, seed)[0];
    if (a.size() != b.size()) throw std::invalid_argument("operand sizes differ");
    return u.run_spiking({a, b}, physics, seed)[0];
}

std::vector<float> fp32_apply(FpOp op, const std::vector<float>& a, const std::vector<float>& b, FpOptions opt) {
    return to_floats(fp_apply(op, Precision::FP32, to_patterns(a), to_patterns(b), opt));
}

BitPlaneTensor fp_add(const BitPlaneTensor& a, const BitPlaneTensor& b) {
    check_pair(a, b);
    return apply_planes(FpOp::Add, {&a, &b}, {});
}

BitPlaneTensor fp_sub(const BitPlaneTensor& a, const BitPlaneTensor& b) {
    check_pair(a, b);
    return apply_planes(FpOp::Sub, {&a, &b}, {});
}

BitPlaneTensor fp_mul(const BitPlaneTensor& a, const BitPlaneTensor& b) {
    check_pair(a, b);
    return apply_planes(FpOp::Mul, {&a, &b}, {});
}

BitPlaneTensor fp_div(const BitPlaneTensor& a, const BitPlaneTensor& b, FpOptions opt) {
    check_pair(a, b);
    return apply_planes(FpOp::Div, {&a, &b}, opt);
}

BitPlaneTensor fp_sqrt(const BitPlaneTensor& a, FpOptions opt) { return apply_planes(FpOp::Sqrt, {&a}, opt); }

BitPlaneTensor fp_reciprocal(const BitPlaneTensor& b, FpOptions opt) {
    return apply_planes(FpOp::Recip, {&b}, opt);
}

BitPlaneTensor fp_max(const BitPlaneTensor& a, const BitPlaneTensor& b) {
    check_pair(a, b);
    return apply_planes(FpOp::Max, {&a, &b}, {});
}

BitPlaneTensor fp_min(const BitPlaneTensor& a, const BitPlaneTensor& b) {
    check_pair(a, b);
    return apply_planes(FpOp::Min, {&a, &b}, {});
}

}  // namespace spikegate
