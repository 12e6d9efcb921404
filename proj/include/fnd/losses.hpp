#ifndef FND_LOSSES_HPP
#define FND_LOSSES_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "fnd/tensor.hpp"

namespace fnd {

// Binary cross entropy over probabilities yhat[B,1] (or [B]) with labels in
// {0,1}. Probabilities are clamped to [1e-7, 1-1e-7] so the loss stays
// finite for saturated inputs.
template <typename T>
T bce_loss(const Tensor<T>& yhat, const std::vector<int>& y, Tensor<T>* dyhat) {
    const std::size_t batch = y.size();
    const T lo = static_cast<T>(1e-7), hi = static_cast<T>(1.0 - 1e-7);
    T loss = T(0);
    if (dyhat) *dyhat = Tensor<T>(yhat.shape());
    for (std::size_t b = 0; b < batch; ++b) {
        T p = std::clamp(yhat[b], lo, hi);
        loss -= y[b] ? std::log(p) : std::log(T(1) - p);
        if (dyhat)
            (*dyhat)[b] = (p - static_cast<T>(y[b])) / (p * (T(1) - p)) /
                          static_cast<T>(batch);
    }
    return loss / static_cast<T>(batch);
}

// Softmax cross entropy over logits[B,C] via the log-sum-exp form; immune
// to overflow for extreme logits.
template <typename T>
T softmax_ce_loss(const Tensor<T>& logits, const std::vector<int>& y, Tensor<T>* dlogits) {
    const std::size_t batch = logits.dim(0), classes = logits.dim(1);
    T loss = T(0);
    if (dlogits) *dlogits = Tensor<T>(logits.shape());
    std::vector<T> p(classes);
    for (std::size_t b = 0; b < batch; ++b) {
        const T* row = logits.data() + b * classes;
        T m = row[0];
        for (std::size_t c = 1; c < classes; ++c) m = std::max(m, row[c]);
        T sum = T(0);
        for (std::size_t c = 0; c < classes; ++c) {
            p[c] = std::exp(row[c] - m);
            sum += p[c];
        }
        const T lse = m + std::log(sum);
        loss += lse - row[static_cast<std::size_t>(y[b])];
        if (dlogits) {
            T* drow = dlogits->data() + b * classes;
            for (std::size_t c = 0; c < classes; ++c) {
                T soft = p[c] / sum;
                drow[c] = (soft - (static_cast<std::size_t>(y[b]) == c ? T(1) : T(0))) /
                          static_cast<T>(batch);
            }
        }
    }
    return loss / static_cast<T>(batch);
}

} // namespace fnd

#endif
