#include "spikegate/netlist.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace spikegate {

Netlist::Netlist() : driver_{kConst, kConst} {}

Netlist::Netlist(const Netlist& other)
    : neurons_(other.neurons_),
      neuron_out_(other.neuron_out_),
      driver_(other.driver_),
      inputs_(other.inputs_),
      outputs_(other.outputs_),
      spikes_(other.spike_count()) {}

Netlist& Netlist::operator=(const Netlist& other) {
    if (this != &other) {
        neurons_ = other.neurons_;
        neuron_out_ = other.neuron_out_;
        driver_ = other.driver_;
        inputs_ = other.inputs_;
        outputs_ = other.outputs_;
        spikes_.store(other.spike_count());
    }
    return *this;
}

Wire Netlist::add_input() {
    Wire w = static_cast<Wire>(driver_.size());
    driver_.push_back(kInput);
    inputs_.push_back(w);
    return w;
}

Word Netlist::add_inputs(unsigned count) {
    Word w;
    w.reserve(count);
    for (unsigned i = 0; i < count; ++i) w.push_back(add_input());
    return w;
}

Wire Netlist::add_neuron(const Neuron& n) {
    Wire out = static_cast<Wire>(driver_.size());
    for (Wire w : n.in)
        if (w >= out) throw std::logic_error("neuron input refers to a later wire");
    driver_.push_back(static_cast<std::int32_t>(neurons_.size()));
    neurons_.push_back(n);
    neuron_out_.push_back(out);
    return out;
}

void Netlist::add_output(Wire w) {
    if (w >= driver_.size()) throw std::out_of_range("unknown wire");
    outputs_.push_back(w);
}

void Netlist::add_outputs(const Word& w) {
    for (Wire x : w) add_output(x);
}

std::size_t Netlist::depth() const {
    std::vector<std::size_t> level(driver_.size(), 0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < neurons_.size(); ++i) {
        const Neuron& n = neurons_[i];
        std::size_t l = std::max(level[n.in[0]], level[n.in[1]]) + 1;
        level[neuron_out_[i]] = l;
    }
    for (Wire o : outputs_) best = std::max(best, level[o]);
    return best;
}

void Netlist::prune() {
    std::vector<char> live(driver_.size(), 0);
    for (Wire o : outputs_) live[o] = 1;
    for (std::size_t i = neurons_.size(); i-- > 0;) {
        if (!live[neuron_out_[i]]) continue;
        live[neurons_[i].in[0]] = 1;
        live[neurons_[i].in[1]] = 1;
    }

    std::vector<Wire> remap(driver_.size(), 0);
    std::vector<std::int32_t> driver{kConst, kConst};
    std::vector<Neuron> neurons;
    std::vector<Wire> neuron_out;
    remap[kLow] = kLow;
    remap[kHigh] = kHigh;
    for (Wire w = 2; w < driver_.size(); ++w) {
        std::int32_t d = driver_[w];
        if (d == kInput) {
            remap[w] = static_cast<Wire>(driver.size());
            driver.push_back(kInput);
        } else if (live[w]) {
            Neuron n = neurons_[static_cast<std::size_t>(d)];
            n.in[0] = remap[n.in[0]];
            n.in[1] = remap[n.in[1]];
            remap[w] = static_cast<Wire>(driver.size());
            driver.push_back(static_cast<std::int32_t>(neurons.size()));
            neuron_out.push_back(remap[w]);
            neurons.push_back(n);
        }
    }
    for (Wire& w : inputs_) w = remap[w];
    for (Wire& w : outputs_) w = remap[w];
    driver_ = std::move(driver);
    neurons_ = std::move(neurons);
    neuron_out_ = std::move(neuron_out);
}

void Netlist::dump(std::ostream& os) const {
    for (std::size_t i = 0; i < neurons_.size(); ++i) {
        const Neuron& n = neurons_[i];
        os << "neuron " << neuron_out_[i] << " θ=" << n.threshold << " bias=" << n.bias << " in=[";
        bool first = true;
        for (int k = 0; k < 2; ++k) {
            if (n.weight[k] == 0.0 && n.in[k] == kLow) continue;
            if (!first) os << ',';
            os << n.in[k] << ':' << n.weight[k];
            first = false;
        }
        os << "]\n";
    }
}

}  // namespace spikegate
