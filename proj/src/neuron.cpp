#include "spikegate/neuron.hpp"

#include <cmath>

namespace spikegate {

bool NeuronConfig::valid() const {
    return threshold > 0.0 && decay > 0.0 && decay <= 1.0 && noise_sigma >= 0.0;
}

NeuronState::NeuronState(std::uint64_t seed) : seed_(seed), rng_(seed) {}

double NeuronState::draw_noise(double sigma) {
    if (sigma == 0.0) return 0.0;
    return sigma * normal_(rng_);
}

bool step(NeuronState& state, const NeuronConfig& config, double input_current) {
    double v = config.decay * state.membrane + input_current + state.draw_noise(config.noise_sigma);
    double theta = config.effective_threshold();
    bool spike = v > theta;  // false for NaN
    if (spike) v = config.soft_reset ? v - theta : 0.0;
    state.membrane = v;
    return spike;
}

void reset(NeuronState& state) {
    state = NeuronState(state.seed());
}

}  // namespace spikegate
