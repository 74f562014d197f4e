#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "spikegate/bitplane.hpp"
#include "spikegate/evaluate.hpp"
#include "spikegate/netlist.hpp"

namespace spikegate {

using Lanes = std::vector<std::uint64_t>;

// A finished netlist whose inputs and outputs are grouped into LSB-first
// ports of fixed widths (in creation order), plus its deterministic evaluator.
class Unit {
public:
    Unit(Netlist netlist, std::vector<unsigned> in_widths, std::vector<unsigned> out_widths);
    Unit(const Unit&) = delete;
    Unit& operator=(const Unit&) = delete;

    const Netlist& netlist() const { return netlist_; }
    Netlist& netlist() { return netlist_; }
    const std::vector<unsigned>& in_widths() const { return in_widths_; }
    const std::vector<unsigned>& out_widths() const { return out_widths_; }

    // One integer per lane per port; every port must have the same lane count.
    std::vector<Lanes> run(const std::vector<Lanes>& ports,
                           std::vector<std::uint64_t>* per_neuron = nullptr) const;
    // Same, through the per-lane spiking evaluator.
    std::vector<Lanes> run_spiking(const std::vector<Lanes>& ports, const Physics& physics,
                                   std::uint64_t seed) const;
    // Deterministic evaluation with non-default physics (decay, deviation).
    std::vector<Lanes> run_physics(const std::vector<Lanes>& ports, const Physics& physics) const;

    // Ports given directly as spatially encoded tensors (port width = format width).
    std::vector<BitPlaneTensor> run_planes(const std::vector<const BitPlaneTensor*>& ports,
                                           const std::vector<Precision>& out_formats) const;

private:
    template <class Fn>
    std::vector<Lanes> run_with(const std::vector<Lanes>& ports, Fn&& fn) const;

    Netlist netlist_;
    std::vector<unsigned> in_widths_, out_widths_;
    std::unique_ptr<Evaluator> eval_;
};

// Transposition helpers between integers and LSB-first bit slices.
std::vector<std::vector<std::uint64_t>> to_slices(const Lanes& values, unsigned width);
Lanes from_slices(const std::vector<std::vector<std::uint64_t>>& slices, std::size_t lanes);

}  // namespace spikegate
