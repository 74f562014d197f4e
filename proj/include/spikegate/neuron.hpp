#pragma once

#include <cstdint>
#include <random>

namespace spikegate {

struct NeuronConfig {
    double threshold = 1.0;
    double decay = 1.0;  // beta; 1 is the pure IF neuron
    bool soft_reset = true;
    double noise_sigma = 0.0;
    double threshold_deviation = 0.0;  // delta, applied multiplicatively

    double effective_threshold() const { return threshold * (1.0 + threshold_deviation); }
    bool valid() const;
};

// Membrane plus a private, reproducible noise stream.
class NeuronState {
public:
    explicit NeuronState(std::uint64_t seed = 0);

    double membrane = 0.0;

    std::uint64_t seed() const { return seed_; }
    double draw_noise(double sigma);

private:
    std::uint64_t seed_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// One timestep: V <- beta*V + I + noise; fire iff V > theta_eff (strict).
// A NaN current leaves a NaN membrane and never fires.
bool step(NeuronState& state, const NeuronConfig& config, double input_current);

// Zero the membrane and rewind the noise stream to its seed.
void reset(NeuronState& state);

}  // namespace spikegate
