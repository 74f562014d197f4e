#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "spikegate/unit.hpp"

namespace spikegate {

inline constexpr double kPicojoulesPerSpike = 23.6;

double spikes_to_nj(double spikes);

// `component = nJ` lines plus `unit_scale = k` and `component.neurons = n`
// (reference counts, for display); `#` starts a comment.
struct BaselineCostTable {
    std::map<std::string, double> gpu_nj;
    std::map<std::string, double> reference_neurons;
    double unit_scale = 1.0;
};
BaselineCostTable parse_baseline_costs(const std::string& text);
BaselineCostTable load_baseline_costs(const std::string& path);
std::string default_baseline_path();

enum class EnergyMode { Measured, Expected };
std::string energy_mode_name(EnergyMode m);
EnergyMode parse_energy_mode(const std::string& s);

// Per-evaluation figures. Energy follows the spike count of the mode:
// fired spikes when measured, half of all neuron evaluations when expected.
struct EnergyReport {
    std::string component;
    double neuron_count = 0;
    std::uint64_t evaluations = 0;
    double fired_spikes = 0;
    double expected_spikes = 0;
    EnergyMode mode = EnergyMode::Expected;
    double energy_nj = 0;
    double baseline_gpu_nj = 0;  // 0 when no baseline exists
    double savings_ratio = 0;    // 0 when no baseline exists
    double reference_neurons = 0;
    double spikes() const { return mode == EnergyMode::Measured ? fired_spikes : expected_spikes; }
};

// Runs the workload (one evaluation per lane) and reads spike counters.
EnergyReport measure_energy(const std::string& component, const Unit& unit, const std::vector<Lanes>& workload);
// Runs an arbitrary circuit composition once for `evaluations` elements and
// attributes every evaluator run inside it.
EnergyReport measure_energy(const std::string& component, std::uint64_t evaluations,
                            const std::function<void()>& workload);
EnergyReport expected_energy(const std::string& component, double neuron_count);

// Applies the baseline table: savings = baseline * unit_scale / energy.
void join_baseline(EnergyReport& r, const BaselineCostTable& costs);

// Every standard component on seeded workloads: N(0,1) FP32 data, full
// truth-table cycles for NOT, XOR, MUX and the full adder, the firing case
// for AND and OR. Evaluations must be a multiple of 8.
std::vector<EnergyReport> component_table(EnergyMode mode, const BaselineCostTable& costs, std::uint64_t seed,
                                          std::size_t evaluations = 256);

// component,neurons,spikes,energy_nj,baseline_nj,savings,reference_neurons
std::string energy_csv(const std::vector<EnergyReport>& rows);

}  // namespace spikegate
