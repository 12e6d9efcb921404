#ifndef FND_OPTIM_HPP
#define FND_OPTIM_HPP

#include <cmath>
#include <vector>

#include "fnd/layers.hpp"
#include "fnd/tensor.hpp"

namespace fnd {

// Adam with bias-corrected first and second moments. One step() per batch.
template <typename T>
class Adam {
public:
    explicit Adam(std::vector<ParamRef<T>> params, T lr = static_cast<T>(1e-3),
                  T beta1 = static_cast<T>(0.9), T beta2 = static_cast<T>(0.999),
                  T eps = static_cast<T>(1e-8))
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
        for (auto& p : params)
            slots_.push_back({p, Tensor<T>::zeros(p.value->shape()),
                              Tensor<T>::zeros(p.value->shape())});
    }

    void zero_grads() {
        for (auto& s : slots_) s.ref.grad->fill(T(0));
    }

    void step() {
        ++t_;
        const T bc1 = T(1) - static_cast<T>(std::pow(static_cast<double>(beta1_), t_));
        const T bc2 = T(1) - static_cast<T>(std::pow(static_cast<double>(beta2_), t_));
        for (auto& s : slots_) {
            Tensor<T>& w = *s.ref.value;
            const Tensor<T>& g = *s.ref.grad;
            for (std::size_t i = 0; i < w.numel(); ++i) {
                s.m[i] = beta1_ * s.m[i] + (T(1) - beta1_) * g[i];
                s.v[i] = beta2_ * s.v[i] + (T(1) - beta2_) * g[i] * g[i];
                const T mhat = s.m[i] / bc1;
                const T vhat = s.v[i] / bc2;
                w[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
            }
        }
    }

    long step_count() const { return t_; }

private:
    struct Slot {
        ParamRef<T> ref;
        Tensor<T> m, v;
    };
    std::vector<Slot> slots_;
    T lr_, beta1_, beta2_, eps_;
    long t_ = 0;
};

} // namespace fnd

#endif
