#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace spikegate {

using Wire = std::uint32_t;
inline constexpr Wire kLow = 0;
inline constexpr Wire kHigh = 1;

// LSB-first bundle of wires.
using Word = std::vector<Wire>;

// A single IF neuron with at most two synapses. Unused slots point at kLow
// with weight 0.
struct Neuron {
    std::array<Wire, 2> in{kLow, kLow};
    std::array<double, 2> weight{0.0, 0.0};
    double bias = 0.0;
    double threshold = 1.0;
};

// Feed-forward circuit. Wires 0 and 1 are the constants; every other wire is
// either a primary input or the output of exactly one neuron. Neurons are
// stored in creation order, which is topological.
class Netlist {
public:
    Netlist();
    Netlist(const Netlist& other);
    Netlist& operator=(const Netlist& other);

    Wire add_input();
    Word add_inputs(unsigned count);
    Wire add_neuron(const Neuron& n);
    void add_output(Wire w);
    void add_outputs(const Word& w);

    std::size_t neuron_count() const { return neurons_.size(); }
    std::size_t wire_count() const { return driver_.size(); }
    const std::vector<Neuron>& neurons() const { return neurons_; }
    const std::vector<Wire>& inputs() const { return inputs_; }
    const std::vector<Wire>& outputs() const { return outputs_; }
    Wire neuron_wire(std::size_t index) const { return neuron_out_[index]; }

    // Longest input-to-output path counted in neurons.
    std::size_t depth() const;

    // Drop neurons that no output depends on; wires are renumbered.
    void prune();

    // `neuron <id> θ=<v> bias=<v> in=[<id>:<w>,...]`, one line per neuron.
    void dump(std::ostream& os) const;

    std::uint64_t spike_count() const { return spikes_.load(std::memory_order_relaxed); }
    void clear_spikes() { spikes_.store(0, std::memory_order_relaxed); }
    void record_spikes(std::uint64_t n) const { spikes_.fetch_add(n, std::memory_order_relaxed); }

private:
    static constexpr std::int32_t kConst = -1;
    static constexpr std::int32_t kInput = -2;

    std::vector<Neuron> neurons_;
    std::vector<Wire> neuron_out_;
    std::vector<std::int32_t> driver_;  // per wire
    std::vector<Wire> inputs_;
    std::vector<Wire> outputs_;
    mutable std::atomic<std::uint64_t> spikes_{0};
};

}  // namespace spikegate
