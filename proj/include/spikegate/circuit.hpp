#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>

#include "spikegate/netlist.hpp"

namespace spikegate {

// Gate-level construction on top of a Netlist. Every gate is an IF neuron
// with the thresholds below; XOR and MUX are 5-neuron composites. With
// folding on, gates with constant inputs collapse to constants or wires.
class Circuit {
public:
    static constexpr double kAndThreshold = 1.5;
    static constexpr double kOrThreshold = 0.5;
    static constexpr double kNotThreshold = 1.0;
    static constexpr double kNotBias = 1.5;

    explicit Circuit(Netlist& netlist, bool fold = true) : nl_(netlist), fold_(fold) {}

    Netlist& netlist() { return nl_; }

    Wire input() { return nl_.add_input(); }
    Word input_word(unsigned width) { return nl_.add_inputs(width); }
    void output(Wire w) { nl_.add_output(w); }
    void output(const Word& w) { nl_.add_outputs(w); }

    Wire and_(Wire a, Wire b);
    Wire or_(Wire a, Wire b);
    Wire not_(Wire a);
    Wire xor_(Wire a, Wire b);
    // s ? a : b
    Wire mux(Wire s, Wire a, Wire b);

    Wire and_all(std::span<const Wire> w);
    Wire or_any(std::span<const Wire> w);

    static Word constant(std::uint64_t value, unsigned width);
    Word mux(Wire s, const Word& a, const Word& b);
    Word not_word(const Word& a);

private:
    bool is_const(Wire w) const { return w == kLow || w == kHigh; }

    Netlist& nl_;
    bool fold_;
    std::unordered_map<Wire, Wire> not_memo_;
};

}  // namespace spikegate
