#pragma once

#include <vector>

#include "spikegate/model.hpp"

namespace spikegate::ref {

// Analytic gradients of the host reference layers. Training through the
// spike encoding uses these on decoded values: the forward circuits are
// bit-identical to the reference, so the straight-through estimator is
// exact. T = float accumulates in ascending order like the forward pass;
// T = double is the high-precision comparison point.

template <class T>
struct LinearGrads {
    std::vector<T> dx, dw, db;
};

template <class T>
LinearGrads<T> linear_backward(const std::vector<T>& x, const LinearWeights& w, const std::vector<T>& dy);

template <class T>
struct RmsNormGrads {
    std::vector<T> dx, dgamma;
};

template <class T>
RmsNormGrads<T> rmsnorm_backward(const std::vector<T>& x, const std::vector<float>& gamma, float eps,
                                 const std::vector<T>& dy);

// SiLU'(x) = s * (1 + x * (1 - s)), s = sigmoid(x).
template <class T>
std::vector<T> silu_backward(const std::vector<T>& x, const std::vector<T>& dy);

// Rows of row_len: dx = p * (dy - sum(dy * p)).
template <class T>
std::vector<T> softmax_backward(const std::vector<T>& p, const std::vector<T>& dy, std::size_t row_len);

}  // namespace spikegate::ref
