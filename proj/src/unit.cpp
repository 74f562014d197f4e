#include "spikegate/unit.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

namespace spikegate {

std::vector<std::vector<std::uint64_t>> to_slices(const Lanes& values, unsigned width) {
    const std::size_t words = lane_words(values.size());
    std::vector<std::vector<std::uint64_t>> s(width, std::vector<std::uint64_t>(words, 0));
    for (std::size_t j = 0; j < values.size(); ++j) {
        std::uint64_t x = values[j];
        if (width < 64) x &= (1ULL << width) - 1;
        const std::uint64_t bit = 1ULL << (j % 64);
        while (x) {
            unsigned b = static_cast<unsigned>(std::countr_zero(x));
            s[b][j / 64] |= bit;
            x &= x - 1;
        }
    }
    return s;
}

Lanes from_slices(const std::vector<std::vector<std::uint64_t>>& slices, std::size_t lanes) {
    Lanes out(lanes, 0);
    for (std::size_t b = 0; b < slices.size(); ++b)
        for (std::size_t w = 0; w < slices[b].size(); ++w) {
            std::uint64_t bits = slices[b][w];
            while (bits) {
                unsigned lane = static_cast<unsigned>(std::countr_zero(bits));
                out[w * 64 + lane] |= 1ULL << b;
                bits &= bits - 1;
            }
        }
    return out;
}

Unit::Unit(Netlist netlist, std::vector<unsigned> in_widths, std::vector<unsigned> out_widths)
    : netlist_(std::move(netlist)), in_widths_(std::move(in_widths)), out_widths_(std::move(out_widths)) {
    if (std::accumulate(in_widths_.begin(), in_widths_.end(), 0u) != netlist_.inputs().size())
        throw std::invalid_argument("input widths do not cover the netlist inputs");
    if (std::accumulate(out_widths_.begin(), out_widths_.end(), 0u) != netlist_.outputs().size())
        throw std::invalid_argument("output widths do not cover the netlist outputs");
    eval_ = std::make_unique<Evaluator>(netlist_);
}

template <class Fn>
std::vector<Lanes> Unit::run_with(const std::vector<Lanes>& ports, Fn&& fn) const {
    if (ports.size() != in_widths_.size()) throw std::invalid_argument("port count mismatch");
    const std::size_t lanes = ports.empty() ? 0 : ports[0].size();
    std::vector<std::vector<std::vector<std::uint64_t>>> in_slices;
    std::vector<const std::uint64_t*> in_ptr;
    for (std::size_t p = 0; p < ports.size(); ++p) {
        if (ports[p].size() != lanes) throw std::invalid_argument("port lane count mismatch");
        in_slices.push_back(to_slices(ports[p], in_widths_[p]));
    }
    for (auto& port : in_slices)
        for (auto& s : port) in_ptr.push_back(s.data());
    std::vector<std::vector<std::vector<std::uint64_t>>> out_slices;
    std::vector<std::uint64_t*> out_ptr;
    for (unsigned w : out_widths_)
        out_slices.emplace_back(w, std::vector<std::uint64_t>(lane_words(lanes), 0));
    for (auto& port : out_slices)
        for (auto& s : port) out_ptr.push_back(s.data());
    fn(lanes, InputBits(in_ptr), OutputBits(out_ptr));
    std::vector<Lanes> out;
    for (auto& port : out_slices) out.push_back(from_slices(port, lanes));
    return out;
}

std::vector<Lanes> Unit::run(const std::vector<Lanes>& ports, std::vector<std::uint64_t>* per_neuron) const {
    return run_with(ports, [&](std::size_t lanes, InputBits in, OutputBits out) {
        eval_->run(lanes, in, out, per_neuron);
    });
}

std::vector<Lanes> Unit::run_spiking(const std::vector<Lanes>& ports, const Physics& physics,
                                     std::uint64_t seed) const {
    SpikingEvaluator ev(netlist_, physics, seed);
    return run_with(ports, [&](std::size_t lanes, InputBits in, OutputBits out) { ev.run(lanes, in, out); });
}

std::vector<Lanes> Unit::run_physics(const std::vector<Lanes>& ports, const Physics& physics) const {
    Evaluator ev(netlist_, physics);
    return run_with(ports, [&](std::size_t lanes, InputBits in, OutputBits out) { ev.run(lanes, in, out); });
}

std::vector<BitPlaneTensor> Unit::run_planes(const std::vector<const BitPlaneTensor*>& ports,
                                             const std::vector<Precision>& out_formats) const {
    if (ports.size() != in_widths_.size() || out_formats.size() != out_widths_.size())
        throw std::invalid_argument("port count mismatch");
    const std::size_t lanes = ports.empty() ? 0 : ports[0]->size();
    std::vector<const std::uint64_t*> in_ptr;
    for (std::size_t p = 0; p < ports.size(); ++p) {
        if (ports[p]->width() != in_widths_[p]) throw std::invalid_argument("format mismatch");
        if (ports[p]->size() != lanes) throw std::invalid_argument("element count mismatch");
        for (unsigned b = 0; b < in_widths_[p]; ++b) in_ptr.push_back(ports[p]->bit(b));
    }
    std::vector<BitPlaneTensor> out;
    for (std::size_t p = 0; p < out_formats.size(); ++p) {
        out.emplace_back(out_formats[p], lanes);
        if (out.back().width() != out_widths_[p]) throw std::invalid_argument("output format mismatch");
    }
    std::vector<std::uint64_t*> out_ptr;
    for (auto& t : out)
        for (unsigned b = 0; b < t.width(); ++b) out_ptr.push_back(t.bit(b));
    eval_->run(lanes, in_ptr, out_ptr);
    return out;
}

}  // namespace spikegate
