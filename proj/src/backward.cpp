#include "spikegate/backward.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "spikegate/reference.hpp"

namespace spikegate::ref {

namespace {

std::size_t rows_of(std::size_t size, std::size_t width) {
    if (width == 0 || size % width != 0) throw std::invalid_argument("activation size does not match layer width");
    return size / width;
}

template <class T>
T sigmoid(T x) {
    if constexpr (std::is_same_v<T, float>) return sigmoid_c(x);
    else return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

template <class T>
LinearGrads<T> linear_backward(const std::vector<T>& x, const LinearWeights& w, const std::vector<T>& dy) {
    w.validate();
    const std::size_t rows = rows_of(x.size(), w.in);
    if (dy.size() != rows * w.out) throw std::invalid_argument("gradient shape mismatch");
    LinearGrads<T> g{std::vector<T>(x.size()), std::vector<T>(w.w.size()), std::vector<T>(w.out)};
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < w.in; ++i) {
            T s = T(w.w[i]) * dy[r * w.out];
            for (std::size_t j = 1; j < w.out; ++j) s = s + T(w.w[j * w.in + i]) * dy[r * w.out + j];
            g.dx[r * w.in + i] = s;
        }
    for (std::size_t j = 0; j < w.out; ++j) {
        T b = dy[j];
        for (std::size_t r = 1; r < rows; ++r) b = b + dy[r * w.out + j];
        g.db[j] = b;
        for (std::size_t i = 0; i < w.in; ++i) {
            T s = dy[j] * x[i];
            for (std::size_t r = 1; r < rows; ++r) s = s + dy[r * w.out + j] * x[r * w.in + i];
            g.dw[j * w.in + i] = s;
        }
    }
    return g;
}

template <class T>
RmsNormGrads<T> rmsnorm_backward(const std::vector<T>& x, const std::vector<float>& gamma, float eps,
                                 const std::vector<T>& dy) {
    const std::size_t d = gamma.size();
    const std::size_t rows = rows_of(x.size(), d);
    if (dy.size() != x.size()) throw std::invalid_argument("gradient shape mismatch");
    RmsNormGrads<T> g{std::vector<T>(x.size()), std::vector<T>(d, T(0))};
    for (std::size_t r = 0; r < rows; ++r) {
        const T* xr = &x[r * d];
        const T* gr = &dy[r * d];
        T ss = xr[0] * xr[0];
        for (std::size_t i = 1; i < d; ++i) ss = ss + xr[i] * xr[i];
        T inv = T(1) / std::sqrt(ss / T(d) + T(eps));
        T dot = gr[0] * T(gamma[0]) * xr[0];
        for (std::size_t i = 1; i < d; ++i) dot = dot + gr[i] * T(gamma[i]) * xr[i];
        T k = inv * inv * inv * dot / T(d);
        for (std::size_t i = 0; i < d; ++i) {
            g.dx[r * d + i] = inv * T(gamma[i]) * gr[i] - xr[i] * k;
            g.dgamma[i] = g.dgamma[i] + gr[i] * xr[i] * inv;
        }
    }
    return g;
}

template <class T>
std::vector<T> silu_backward(const std::vector<T>& x, const std::vector<T>& dy) {
    if (dy.size() != x.size()) throw std::invalid_argument("gradient shape mismatch");
    std::vector<T> dx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        T s = sigmoid(x[i]);
        dx[i] = dy[i] * (s * (T(1) + x[i] * (T(1) - s)));
    }
    return dx;
}

template <class T>
std::vector<T> softmax_backward(const std::vector<T>& p, const std::vector<T>& dy, std::size_t row_len) {
    const std::size_t rows = rows_of(p.size(), row_len);
    if (dy.size() != p.size()) throw std::invalid_argument("gradient shape mismatch");
    std::vector<T> dx(p.size());
    for (std::size_t r = 0; r < rows; ++r) {
        T dot = dy[r * row_len] * p[r * row_len];
        for (std::size_t i = 1; i < row_len; ++i) dot = dot + dy[r * row_len + i] * p[r * row_len + i];
        for (std::size_t i = 0; i < row_len; ++i) dx[r * row_len + i] = p[r * row_len + i] * (dy[r * row_len + i] - dot);
    }
    return dx;
}

template LinearGrads<float> linear_backward(const std::vector<float>&, const LinearWeights&, const std::vector<float>&);
template LinearGrads<double> linear_backward(const std::vector<double>&, const LinearWeights&,
                                             const std::vector<double>&);
template RmsNormGrads<float> rmsnorm_backward(const std::vector<float>&, const std::vector<float>&, float,
                                              const std::vector<float>&);
template RmsNormGrads<double> rmsnorm_backward(const std::vector<double>&, const std::vector<float>&, float,
                                               const std::vector<double>&);
template std::vector<float> silu_backward(const std::vector<float>&, const std::vector<float>&);
template std::vector<double> silu_backward(const std::vector<double>&, const std::vector<double>&);
template std::vector<float> softmax_backward(const std::vector<float>&, const std::vector<float>&, std::size_t);
template std::vector<double> softmax_backward(const std::vector<double>&, const std::vector<double>&, std::size_t);

}  // namespace spikegate::ref
