#include "spikegate/coding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spikegate {

RateTrain rate_encode(double value, unsigned steps, double scale, std::mt19937_64& rng) {
    if (steps == 0) throw std::invalid_argument("rate coding needs at least one step");
    RateTrain t;
    t.scale = scale;
    t.sign = value < 0 ? -1 : 1;
    double p = std::clamp(std::fabs(value) / scale, 0.0, 1.0);
    std::bernoulli_distribution fire(p);
    t.spikes.resize(steps);
    for (auto& s : t.spikes) s = fire(rng) ? 1 : 0;
    return t;
}

RateTrain rate_encode(double value, unsigned steps, double scale, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return rate_encode(value, steps, scale, rng);
}

double rate_decode(const RateTrain& t) {
    if (t.spikes.empty()) throw std::invalid_argument("empty spike train");
    std::size_t n = 0;
    for (auto s : t.spikes) n += s;
    return t.sign * t.scale * static_cast<double>(n) / static_cast<double>(t.spikes.size());
}

TtfsTrain ttfs_encode(double value, unsigned steps, double lo, double hi) {
    if (steps == 0) throw std::invalid_argument("ttfs coding needs at least one step");
    if (std::isnan(value)) throw std::invalid_argument("ttfs cannot encode NaN");
    TtfsTrain t;
    t.lo = lo;
    t.hi = hi;
    t.spikes.assign(steps, 0);
    double u = (value - lo) / (hi - lo);
    double bin = std::floor(std::clamp(u, 0.0, 1.0) * steps);
    std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(bin), steps - 1);
    t.spikes[k] = 1;
    return t;
}

double ttfs_decode(const TtfsTrain& t) {
    const std::size_t steps = t.spikes.size();
    for (std::size_t k = 0; k < steps; ++k)
        if (t.spikes[k])
            return t.lo + (static_cast<double>(k) + 0.5) / static_cast<double>(steps) * (t.hi - t.lo);
    throw std::invalid_argument("ttfs train has no spike");
}

}  // namespace spikegate
