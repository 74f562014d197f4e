#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spikegate/netlist.hpp"
#include "spikegate/neuron.hpp"

namespace spikegate {

// Physical realization shared by every neuron of a netlist. `deviation` holds
// one delta per neuron; when empty every neuron uses `uniform_deviation`.
struct Physics {
    double decay = 1.0;
    bool soft_reset = true;
    double noise_sigma = 0.0;
    double uniform_deviation = 0.0;
    std::vector<double> deviation;

    NeuronConfig neuron_config(const Neuron& n, std::size_t index) const;
};

// Static per-neuron deviations, uniform in [-dmax, +dmax].
std::vector<double> draw_deviations(std::size_t neurons, double dmax, std::uint64_t seed);

inline std::size_t lane_words(std::size_t lanes) { return (lanes + 63) / 64; }

// Input and output buffers are bit-sliced: one pointer per netlist input or
// output wire, each addressing lane_words(lanes) words (lane i = bit i%64 of
// word i/64).
using InputBits = std::span<const std::uint64_t* const>;
using OutputBits = std::span<std::uint64_t* const>;

// Activity seen by every evaluator run on this thread while a scope is open:
// neuron evaluations (neurons x lanes) and fired spikes.
struct ActivityTally {
    std::uint64_t neuron_evals = 0;
    std::uint64_t spikes = 0;
};

class ActivityScope {
public:
    explicit ActivityScope(ActivityTally& tally);
    ~ActivityScope();
    ActivityScope(const ActivityScope&) = delete;
    ActivityScope& operator=(const ActivityScope&) = delete;

private:
    ActivityTally* previous_;
};

// Deterministic evaluator. Each neuron's Boolean behaviour is obtained once by
// stepping a freshly reset neuron-core neuron on every input combination; the
// resulting tables are then applied 64 lanes per machine word.
class Evaluator {
public:
    explicit Evaluator(const Netlist& netlist, const Physics& physics = {});

    const Netlist& netlist() const { return *netlist_; }

    // Fired spikes are added to the netlist counter; per-neuron totals are
    // accumulated into `per_neuron` when given (size = neuron_count).
    void run(std::size_t lanes, InputBits in, OutputBits out,
             std::vector<std::uint64_t>* per_neuron = nullptr) const;

private:
    struct Op {
        Wire a, b, out;
        std::uint64_t m00, m10, m01, m11;  // output mask for (a,b)
    };
    const Netlist* netlist_;
    std::vector<Op> ops_;
};

// Per-lane evaluator that runs the full neuron step (decay, deviation,
// Gaussian noise) for every neuron and lane. Each neuron is reset before its
// step (combinational semantics); noise continues along one seeded stream.
class SpikingEvaluator {
public:
    SpikingEvaluator(const Netlist& netlist, Physics physics, std::uint64_t seed);

    void run(std::size_t lanes, InputBits in, OutputBits out,
             std::vector<std::uint64_t>* per_neuron = nullptr);

private:
    const Netlist* netlist_;
    Physics physics_;
    std::vector<NeuronConfig> configs_;
    NeuronState state_;
};

}  // namespace spikegate
