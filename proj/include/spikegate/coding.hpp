#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace spikegate {

// Rate code: Bernoulli spikes with p = clamp(|v|/scale, 0, 1); the sign is
// carried alongside the train.
struct RateTrain {
    std::vector<std::uint8_t> spikes;
    int sign = 1;
    double scale = 1.0;
};

RateTrain rate_encode(double value, unsigned steps, double scale, std::mt19937_64& rng);
RateTrain rate_encode(double value, unsigned steps, double scale, std::uint64_t seed);
double rate_decode(const RateTrain& train);

// Time-to-first-spike code over [lo, hi): the value is mapped affinely to
// [0,1), binned into `steps` slots, and a single spike marks the bin.
struct TtfsTrain {
    std::vector<std::uint8_t> spikes;
    double lo = 0.0;
    double hi = 1.0;
};

TtfsTrain ttfs_encode(double value, unsigned steps, double lo, double hi);
double ttfs_decode(const TtfsTrain& train);

}  // namespace spikegate
