#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikegate/bitvec.hpp"
#include "spikegate/circuit.hpp"
#include "spikegate/evaluate.hpp"

namespace spikegate {

enum class GateKind { AND, OR, NOT, XOR, MUX };

unsigned gate_arity(GateKind kind);
std::string gate_name(GateKind kind);
GateKind parse_gate(const std::string& name);

// Emits the gate into `c`; MUX inputs are (s, a, b), s=1 picks a.
Wire build_gate(Circuit& c, GateKind kind, std::span<const Wire> inputs);

// Stand-alone netlist for one gate instance, built without folding.
Netlist gate_netlist(GateKind kind);

// A gate netlist with its evaluator and spike counter.
class GateUnit {
public:
    explicit GateUnit(GateKind kind, const Physics& physics = {});
    GateUnit(const GateUnit&) = delete;
    GateUnit& operator=(const GateUnit&) = delete;

    GateKind kind() const { return kind_; }
    const Netlist& netlist() const { return netlist_; }

    bool eval(std::span<const int> inputs);
    BitVec eval_vec(std::span<const BitVec> operands);

    std::uint64_t spike_count() const { return netlist_.spike_count(); }
    void clear_spikes() { netlist_.clear_spikes(); }

private:
    GateKind kind_;
    Netlist netlist_;
    Evaluator eval_;
};

// Single evaluation through a fresh gate netlist.
bool eval_gate(GateKind kind, std::span<const int> inputs);
BitVec eval_gate_vec(GateKind kind, std::span<const BitVec> operands);

}  // namespace spikegate
