#include "spikegate/evaluate.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>

namespace spikegate {

namespace {

constexpr std::size_t kBlockWords = 4;

void check_ports(const Netlist& nl, InputBits in, OutputBits out) {
    if (in.size() != nl.inputs().size()) throw std::invalid_argument("input port count mismatch");
    if (out.size() != nl.outputs().size()) throw std::invalid_argument("output port count mismatch");
}

std::uint64_t tail_mask(std::size_t lanes, std::size_t word) {
    std::size_t full = lanes / 64;
    if (word < full) return ~0ULL;
    std::size_t rem = lanes % 64;
    return rem == 0 ? 0ULL : (~0ULL >> (64 - rem));
}

}  // namespace

NeuronConfig Physics::neuron_config(const Neuron& n, std::size_t index) const {
    NeuronConfig c;
    c.threshold = n.threshold;
    c.decay = decay;
    c.soft_reset = soft_reset;
    c.noise_sigma = noise_sigma;
    c.threshold_deviation = deviation.empty() ? uniform_deviation : deviation.at(index);
    return c;
}

std::vector<double> draw_deviations(std::size_t neurons, double dmax, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-dmax, dmax);
    std::vector<double> d(neurons);
    for (double& x : d) x = dmax == 0.0 ? 0.0 : u(rng);
    return d;
}

Evaluator::Evaluator(const Netlist& netlist, const Physics& physics) : netlist_(&netlist) {
    const auto& neurons = netlist.neurons();
    ops_.reserve(neurons.size());
    for (std::size_t i = 0; i < neurons.size(); ++i) {
        const Neuron& n = neurons[i];
        NeuronConfig cfg = physics.neuron_config(n, i);
        cfg.noise_sigma = 0.0;
        std::uint64_t m[4];
        for (int combo = 0; combo < 4; ++combo) {
            double a = combo & 1, b = (combo >> 1) & 1;
            NeuronState st;
            bool fired = step(st, cfg, n.weight[0] * a + n.weight[1] * b + n.bias);
            m[combo] = fired ? ~0ULL : 0ULL;
        }
        ops_.push_back({n.in[0], n.in[1], netlist.neuron_wire(i), m[0], m[1], m[2], m[3]});
    }
}

namespace {
thread_local ActivityTally* active_tally = nullptr;

void tally(const Netlist& nl, std::size_t lanes, std::uint64_t fired) {
    if (active_tally) {
        active_tally->neuron_evals += nl.neuron_count() * lanes;
        active_tally->spikes += fired;
    }
}
}  // namespace

ActivityScope::ActivityScope(ActivityTally& t) : previous_(active_tally) { active_tally = &t; }
ActivityScope::~ActivityScope() { active_tally = previous_; }

void Evaluator::run(std::size_t lanes, InputBits in, OutputBits out,
                    std::vector<std::uint64_t>* per_neuron) const {
    const Netlist& nl = *netlist_;
    check_ports(nl, in, out);
    if (per_neuron) per_neuron->resize(nl.neuron_count(), 0);
    const std::size_t words = lane_words(lanes);
    std::vector<std::uint64_t> val(nl.wire_count() * kBlockWords);
    std::uint64_t fired = 0;

    for (std::size_t w0 = 0; w0 < words; w0 += kBlockWords) {
        const std::size_t nb = std::min(kBlockWords, words - w0);
        std::uint64_t mask[kBlockWords];
        for (std::size_t k = 0; k < kBlockWords; ++k)
            mask[k] = k < nb ? tail_mask(lanes, w0 + k) : 0;
        for (std::size_t k = 0; k < kBlockWords; ++k) {
            val[kLow * kBlockWords + k] = 0;
            val[kHigh * kBlockWords + k] = ~0ULL;
        }
        for (std::size_t p = 0; p < in.size(); ++p) {
            std::uint64_t* dst = &val[nl.inputs()[p] * kBlockWords];
            for (std::size_t k = 0; k < kBlockWords; ++k) dst[k] = k < nb ? in[p][w0 + k] : 0;
        }
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            const Op& op = ops_[i];
            const std::uint64_t* a = &val[op.a * kBlockWords];
            const std::uint64_t* b = &val[op.b * kBlockWords];
            std::uint64_t* o = &val[op.out * kBlockWords];
            std::uint64_t count = 0;
            for (std::size_t k = 0; k < kBlockWords; ++k) {
                std::uint64_t x = a[k], y = b[k];
                std::uint64_t r = (op.m00 & ~(x | y)) | (op.m10 & x & ~y) | (op.m01 & ~x & y) |
                                  (op.m11 & x & y);
                o[k] = r;
                count += static_cast<std::uint64_t>(std::popcount(r & mask[k]));
            }
            fired += count;
            if (per_neuron) (*per_neuron)[i] += count;
        }
        for (std::size_t p = 0; p < out.size(); ++p) {
            const std::uint64_t* src = &val[nl.outputs()[p] * kBlockWords];
            for (std::size_t k = 0; k < nb; ++k) out[p][w0 + k] = src[k] & mask[k];
        }
    }
    nl.record_spikes(fired);
    tally(nl, lanes, fired);
}

SpikingEvaluator::SpikingEvaluator(const Netlist& netlist, Physics physics, std::uint64_t seed)
    : netlist_(&netlist), physics_(std::move(physics)), state_(seed) {
    const auto& neurons = netlist.neurons();
    configs_.reserve(neurons.size());
    for (std::size_t i = 0; i < neurons.size(); ++i)
        configs_.push_back(physics_.neuron_config(neurons[i], i));
}

void SpikingEvaluator::run(std::size_t lanes, InputBits in, OutputBits out,
                           std::vector<std::uint64_t>* per_neuron) {
    const Netlist& nl = *netlist_;
    check_ports(nl, in, out);
    if (per_neuron) per_neuron->resize(nl.neuron_count(), 0);
    const auto& neurons = nl.neurons();
    const std::size_t words = lane_words(lanes);
    std::vector<std::uint64_t> val(nl.wire_count());
    std::uint64_t fired = 0;

    for (std::size_t w = 0; w < words; ++w) {
        const std::uint64_t mask = tail_mask(lanes, w);
        const int nlanes = std::popcount(mask);
        val[kLow] = 0;
        val[kHigh] = ~0ULL;
        for (std::size_t p = 0; p < in.size(); ++p) val[nl.inputs()[p]] = in[p][w];
        for (std::size_t i = 0; i < neurons.size(); ++i) {
            const Neuron& n = neurons[i];
            const std::uint64_t a = val[n.in[0]], b = val[n.in[1]];
            std::uint64_t r = 0;
            for (int lane = 0; lane < nlanes; ++lane) {
                double current = n.weight[0] * static_cast<double>((a >> lane) & 1) +
                                 n.weight[1] * static_cast<double>((b >> lane) & 1) + n.bias;
                state_.membrane = 0.0;
                if (step(state_, configs_[i], current)) r |= 1ULL << lane;
            }
            val[nl.neuron_wire(i)] = r;
            std::uint64_t count = static_cast<std::uint64_t>(std::popcount(r));
            fired += count;
            if (per_neuron) (*per_neuron)[i] += count;
        }
        for (std::size_t p = 0; p < out.size(); ++p) out[p][w] = val[nl.outputs()[p]] & mask;
    }
    nl.record_spikes(fired);
    tally(nl, lanes, fired);
}

}  // namespace spikegate
