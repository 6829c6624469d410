#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "slkd/model.hpp"

namespace slkd {

template <class T>
struct SgdStateT {
    std::vector<TensorT<T>> velocity; // one per parameter tensor, model order
};
using SgdState = SgdStateT<float>;

template <class T>
struct AdamStateT {
    std::vector<TensorT<T>> m;
    std::vector<TensorT<T>> v;
    std::uint64_t step = 0;
};
using AdamState = AdamStateT<float>;

namespace detail {

template <class T>
void check_grads(const std::vector<const TensorT<T>*>& params, const std::vector<const TensorT<T>*>& grads,
                 const char* who) {
    require(params.size() == grads.size(), std::string(who) + ": gradient count does not match parameter count");
    for (std::size_t i = 0; i < params.size(); ++i) {
        require(params[i]->shape == grads[i]->shape, std::string(who) + ": gradient shape mismatch at tensor " +
                                                         std::to_string(i));
        require(grads[i]->all_finite(), std::string(who) + ": non-finite gradient, step aborted");
    }
}

template <class T>
void ensure_state(std::vector<TensorT<T>>& st, const std::vector<const TensorT<T>*>& params) {
    if (st.empty())
        for (const auto* p : params) st.push_back(TensorT<T>::zeros(p->shape));
    require(st.size() == params.size(), "optimizer state does not match parameter count");
}

} // namespace detail

// v <- momentum*v + grad + weight_decay*param ; param <- param - lr*v
template <class T>
void sgd_step(ModelT<T>& model, const GradsT<T>& grads, T lr, T momentum, T weight_decay, SgdStateT<T>& state) {
    require(lr > T(0), "sgd_step: lr must be > 0");
    require(momentum >= T(0) && momentum < T(1), "sgd_step: momentum must be in [0,1)");
    require(weight_decay >= T(0), "sgd_step: weight_decay must be >= 0");
    auto params = model.param_tensors();
    const auto gs = grads.param_tensors();
    std::vector<const TensorT<T>*> cparams(params.begin(), params.end());
    detail::check_grads(cparams, gs, "sgd_step");
    detail::ensure_state(state.velocity, cparams);
    for (std::size_t i = 0; i < params.size(); ++i) {
        TensorT<T>& p = *params[i];
        const TensorT<T>& g = *gs[i];
        TensorT<T>& v = state.velocity[i];
        for (std::size_t k = 0; k < p.data.size(); ++k) {
            v.data[k] = momentum * v.data[k] + g.data[k] + weight_decay * p.data[k];
            p.data[k] -= lr * v.data[k];
        }
    }
}

// standard first/second moment recurrence with bias correction
template <class T>
void adam_step(ModelT<T>& model, const GradsT<T>& grads, T lr, T beta1, T beta2, T eps, AdamStateT<T>& state) {
    require(lr > T(0), "adam_step: lr must be > 0");
    require(beta1 >= T(0) && beta1 < T(1), "adam_step: beta1 must be in [0,1)");
    require(beta2 >= T(0) && beta2 < T(1), "adam_step: beta2 must be in [0,1)");
    require(eps > T(0), "adam_step: eps must be > 0");
    auto params = model.param_tensors();
    const auto gs = grads.param_tensors();
    std::vector<const TensorT<T>*> cparams(params.begin(), params.end());
    detail::check_grads(cparams, gs, "adam_step");
    detail::ensure_state(state.m, cparams);
    detail::ensure_state(state.v, cparams);
    state.step += 1;
    const double bc1 = 1.0 - std::pow(static_cast<double>(beta1), static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(static_cast<double>(beta2), static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        TensorT<T>& p = *params[i];
        const TensorT<T>& g = *gs[i];
        TensorT<T>& m = state.m[i];
        TensorT<T>& v = state.v[i];
        for (std::size_t k = 0; k < p.data.size(); ++k) {
            m.data[k] = beta1 * m.data[k] + (T(1) - beta1) * g.data[k];
            v.data[k] = beta2 * v.data[k] + (T(1) - beta2) * g.data[k] * g.data[k];
            const double mhat = static_cast<double>(m.data[k]) / bc1;
            const double vhat = static_cast<double>(v.data[k]) / bc2;
            p.data[k] = static_cast<T>(static_cast<double>(p.data[k]) -
                                       static_cast<double>(lr) * mhat / (std::sqrt(vhat) + static_cast<double>(eps)));
        }
    }
}

} // namespace slkd
