#include "spikegate/gates.hpp"

#include <stdexcept>

namespace spikegate {

unsigned gate_arity(GateKind kind) {
    switch (kind) {
        case GateKind::NOT: return 1;
        case GateKind::MUX: return 3;
        default: return 2;
    }
}

std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::AND: return "AND";
        case GateKind::OR: return "OR";
        case GateKind::NOT: return "NOT";
        case GateKind::XOR: return "XOR";
        case GateKind::MUX: return "MUX";
    }
    return "?";
}

GateKind parse_gate(const std::string& name) {
    for (GateKind k : {GateKind::AND, GateKind::OR, GateKind::NOT, GateKind::XOR, GateKind::MUX})
        if (gate_name(k) == name) return k;
    throw std::invalid_argument("unknown gate: " + name);
}

Wire build_gate(Circuit& c, GateKind kind, std::span<const Wire> in) {
    if (in.size() != gate_arity(kind)) throw std::invalid_argument("gate arity mismatch");
    switch (kind) {
        case GateKind::AND: return c.and_(in[0], in[1]);
        case GateKind::OR: return c.or_(in[0], in[1]);
        case GateKind::NOT: return c.not_(in[0]);
        case GateKind::XOR: return c.xor_(in[0], in[1]);
        case GateKind::MUX: return c.mux(in[0], in[1], in[2]);
    }
    throw std::invalid_argument("unknown gate");
}

Netlist gate_netlist(GateKind kind) {
    Netlist nl;
    Circuit c(nl, false);
    Word in = c.input_word(gate_arity(kind));
    c.output(build_gate(c, kind, in));
    return nl;
}

GateUnit::GateUnit(GateKind kind, const Physics& physics)
    : kind_(kind), netlist_(gate_netlist(kind)), eval_(netlist_, physics) {}

bool GateUnit::eval(std::span<const int> inputs) {
    if (inputs.size() != gate_arity(kind_)) throw std::invalid_argument("gate arity mismatch");
    std::vector<BitVec> ops;
    for (int v : inputs) {
        if (v != 0 && v != 1) throw std::invalid_argument("gate inputs must be 0 or 1");
        BitVec b(1);
        b.set(0, v == 1);
        ops.push_back(b);
    }
    return eval_vec(ops).get(0);
}

BitVec GateUnit::eval_vec(std::span<const BitVec> operands) {
    if (operands.size() != gate_arity(kind_)) throw std::invalid_argument("gate arity mismatch");
    const std::size_t lanes = operands[0].size();
    std::vector<const std::uint64_t*> in;
    for (const BitVec& b : operands) {
        if (b.size() != lanes) throw std::invalid_argument("operand lane count mismatch");
        in.push_back(b.data());
    }
    BitVec out(lanes);
    std::uint64_t* o = out.data();
    eval_.run(lanes, in, std::span<std::uint64_t* const>(&o, 1));
    return out;
}

bool eval_gate(GateKind kind, std::span<const int> inputs) {
    GateUnit g(kind);
    return g.eval(inputs);
}

BitVec eval_gate_vec(GateKind kind, std::span<const BitVec> operands) {
    GateUnit g(kind);
    return g.eval_vec(operands);
}

}  // namespace spikegate
