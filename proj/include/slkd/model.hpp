#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "slkd/layers.hpp"
#include "slkd/rng.hpp"
#include "slkd/tensor.hpp"

namespace slkd {

enum class Role { teacher, student, snapshot };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::teacher: return "teacher";
        case Role::student: return "student";
        case Role::snapshot: return "snapshot";
    }
    return "?";
}

// input_shape is per-sample: {features} for vector inputs (rank-2 batches) or
// {channels, h, w} for image inputs (rank-4 batches).
struct ModelSpec {
    std::vector<int> input_shape;
    std::vector<LayerSpec> layers;
};

// Walks the layer stack and returns the per-sample shape after each layer.
// Rejects any spec whose adjacent shapes do not compose, naming the layer.
inline std::vector<std::vector<int>> validate_spec(const ModelSpec& spec) {
    require(spec.input_shape.size() == 1 || spec.input_shape.size() == 3,
            "model spec: input shape must be {features} or {channels,h,w}, got " + shape_str(spec.input_shape));
    for (int e : spec.input_shape) require(e > 0, "model spec: input extents must be positive");
    require(!spec.layers.empty(), "model spec: at least one layer required");

    std::vector<std::vector<int>> shapes;
    std::vector<int> cur = spec.input_shape;
    for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const LayerSpec& l = spec.layers[li];
        const std::string where = "layer " + std::to_string(li) + " (" + layer_kind_name(l.kind) + ")";
        switch (l.kind) {
            case LayerKind::dense:
                require(l.in > 0 && l.out > 0, where + ": dense needs positive in/out");
                require(cur.size() == 1, where + ": dense expects flat features, got " + shape_str(cur) +
                                             " (insert flatten first)");
                require(cur[0] == l.in, where + ": expects " + std::to_string(l.in) + " input features, got " +
                                            std::to_string(cur[0]));
                cur = {l.out};
                break;
            case LayerKind::relu:
                break;
            case LayerKind::conv3x3:
                require(l.in > 0 && l.out > 0, where + ": conv3x3 needs positive channel counts");
                require(cur.size() == 3, where + ": conv3x3 expects {c,h,w} input, got " + shape_str(cur));
                require(cur[0] == l.in, where + ": expects " + std::to_string(l.in) + " input channels, got " +
                                            std::to_string(cur[0]));
                cur = {l.out, cur[1], cur[2]};
                break;
            case LayerKind::maxpool2x2:
                require(cur.size() == 3, where + ": maxpool2x2 expects {c,h,w} input, got " + shape_str(cur));
                require(cur[1] % 2 == 0 && cur[2] % 2 == 0,
                        where + ": maxpool2x2 needs even spatial extents, got " + shape_str(cur));
                cur = {cur[0], cur[1] / 2, cur[2] / 2};
                break;
            case LayerKind::flatten:
                require(cur.size() == 3, where + ": flatten expects {c,h,w} input, got " + shape_str(cur));
                cur = {cur[0] * cur[1] * cur[2]};
                break;
        }
        shapes.push_back(cur);
    }
    require(cur.size() == 1, "model spec: final layer must emit flat logits, got " + shape_str(cur));
    return shapes;
}

inline int output_classes(const ModelSpec& spec) { return validate_spec(spec).back()[0]; }

// sum(in*out + out) over dense layers plus sum(9*in_ch*out_ch + out_ch) over convs
inline std::int64_t param_count(const ModelSpec& spec) {
    std::int64_t n = 0;
    for (const LayerSpec& l : spec.layers) {
        if (l.kind == LayerKind::dense) n += static_cast<std::int64_t>(l.in) * l.out + l.out;
        if (l.kind == LayerKind::conv3x3) n += 9LL * l.in * l.out + l.out;
    }
    return n;
}

template <class T>
struct LayerParamsT {
    bool present = false;
    TensorT<T> w;
    TensorT<T> b;
};

template <class T>
struct ModelT {
    ModelSpec spec;
    Role role = Role::student;
    std::vector<LayerParamsT<T>> params; // one slot per layer; present only for dense/conv

    // flat list of parameter tensors in a fixed order (w then b per layer)
    std::vector<const TensorT<T>*> param_tensors() const {
        std::vector<const TensorT<T>*> out;
        for (const auto& p : params)
            if (p.present) {
                out.push_back(&p.w);
                out.push_back(&p.b);
            }
        return out;
    }
    std::vector<TensorT<T>*> param_tensors() {
        std::vector<TensorT<T>*> out;
        for (auto& p : params)
            if (p.present) {
                out.push_back(&p.w);
                out.push_back(&p.b);
            }
        return out;
    }
};

using Model = ModelT<float>;

namespace detail {

template <class T>
void init_layer(const LayerSpec& l, LayerParamsT<T>& p) {
    const bool is_dense = l.kind == LayerKind::dense;
    const std::vector<int> w_shape = is_dense ? std::vector<int>{l.in, l.out} : std::vector<int>{l.out, l.in, 3, 3};
    p.present = true;
    p.w = TensorT<T>::zeros(w_shape);
    p.b = TensorT<T>::zeros({l.out});
    switch (l.init.scheme) {
        case InitScheme::zeros:
            break;
        case InitScheme::identity: {
            require(is_dense && l.in == l.out, "identity init requires a square dense layer");
            for (int i = 0; i < l.in; ++i) p.w.at2(i, i) = T(1);
            break;
        }
        case InitScheme::he_uniform: {
            const int fan_in = is_dense ? l.in : 9 * l.in;
            const float limit = std::sqrt(6.0f / static_cast<float>(fan_in));
            Rng rng(l.init.seed);
            for (T& v : p.w.data) v = static_cast<T>(rng.uniform(-limit, limit));
            break;
        }
    }
}

} // namespace detail

template <class T = float>
ModelT<T> build_model(const ModelSpec& spec, Role role) {
    validate_spec(spec);
    ModelT<T> m;
    m.spec = spec;
    m.role = role;
    m.params.resize(spec.layers.size());
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& l = spec.layers[i];
        if (l.kind == LayerKind::dense || l.kind == LayerKind::conv3x3) detail::init_layer(l, m.params[i]);
    }
    return m;
}

// exact widening copy, used by the 64-bit finite-difference shadow in tests
template <class To, class From>
ModelT<To> convert_model(const ModelT<From>& m) {
    ModelT<To> out;
    out.spec = m.spec;
    out.role = m.role;
    out.params.resize(m.params.size());
    for (std::size_t i = 0; i < m.params.size(); ++i) {
        if (!m.params[i].present) continue;
        out.params[i].present = true;
        out.params[i].w.shape = m.params[i].w.shape;
        out.params[i].b.shape = m.params[i].b.shape;
        for (From v : m.params[i].w.data) out.params[i].w.data.push_back(static_cast<To>(v));
        for (From v : m.params[i].b.data) out.params[i].b.data.push_back(static_cast<To>(v));
    }
    return out;
}

template <class T>
bool models_bit_identical(const ModelT<T>& a, const ModelT<T>& b) {
    auto pa = a.param_tensors();
    auto pb = b.param_tensors();
    if (pa.size() != pb.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        if (pa[i]->shape != pb[i]->shape) return false;
        for (std::size_t k = 0; k < pa[i]->data.size(); ++k)
            if (pa[i]->data[k] != pb[i]->data[k]) return false;
    }
    return true;
}

// Cached activations from one forward pass; required by backward().
template <class T>
struct ForwardTraceT {
    bool valid = false;
    std::vector<TensorT<T>> acts;                       // input, then output of each layer
    std::vector<std::vector<std::int32_t>> pool_argmax; // per layer, empty unless maxpool
};

using ForwardTrace = ForwardTraceT<float>;

namespace detail {

template <class T>
void check_batch_shape(const ModelT<T>& m, const TensorT<T>& batch) {
    const std::size_t want_rank = m.spec.input_shape.size() + 1;
    require(batch.shape.size() == want_rank && batch.shape[0] >= 1,
            "forward: batch rank " + shape_str(batch.shape) + " does not match model input " +
                shape_str(m.spec.input_shape));
    for (std::size_t i = 0; i < m.spec.input_shape.size(); ++i)
        require(batch.shape[i + 1] == m.spec.input_shape[i],
                "forward: batch shape " + shape_str(batch.shape) + " does not match model input " +
                    shape_str(m.spec.input_shape));
}

} // namespace detail

template <class T>
ForwardTraceT<T> forward_trace(const ModelT<T>& m, const TensorT<T>& batch) {
    detail::check_batch_shape(m, batch);
    check_finite(batch, "forward: input batch");
    ForwardTraceT<T> tr;
    tr.acts.reserve(m.spec.layers.size() + 1);
    tr.acts.push_back(batch);
    tr.pool_argmax.resize(m.spec.layers.size());
    TensorT<T> cur = batch;
    const int n = batch.shape[0];
    for (std::size_t li = 0; li < m.spec.layers.size(); ++li) {
        const LayerSpec& l = m.spec.layers[li];
        switch (l.kind) {
            case LayerKind::dense: cur = dense_forward(cur, m.params[li].w, m.params[li].b); break;
            case LayerKind::relu: cur = relu_forward(cur); break;
            case LayerKind::conv3x3: cur = conv3x3_forward(cur, m.params[li].w, m.params[li].b); break;
            case LayerKind::maxpool2x2: cur = maxpool2x2_forward(cur, tr.pool_argmax[li]); break;
            case LayerKind::flatten: {
                const int f = cur.shape[1] * cur.shape[2] * cur.shape[3];
                cur = reshape_copy(cur, {n, f});
                break;
            }
        }
        tr.acts.push_back(cur);
    }
    check_finite(cur, "forward: logits");
    tr.valid = true;
    return tr;
}

template <class T>
TensorT<T> forward(const ModelT<T>& m, const TensorT<T>& batch) {
    return forward_trace(m, batch).acts.back();
}

template <class T>
struct GradsT {
    std::vector<LayerParamsT<T>> layers; // same layout as ModelT::params
    TensorT<T> input;                    // d loss / d batch

    std::vector<const TensorT<T>*> param_tensors() const {
        std::vector<const TensorT<T>*> out;
        for (const auto& p : layers)
            if (p.present) {
                out.push_back(&p.w);
                out.push_back(&p.b);
            }
        return out;
    }
};

using Grads = GradsT<float>;

// loss_grad: d loss / d logits, shape (batch, classes). The trace must come
// from a forward pass of the same model on the same batch.
template <class T>
GradsT<T> backward(const ModelT<T>& m, const ForwardTraceT<T>& tr, const TensorT<T>& loss_grad) {
    require(tr.valid, "backward: called without a matching forward pass");
    require(tr.acts.size() == m.spec.layers.size() + 1,
            "backward: trace does not match this model's layer stack");
    require(loss_grad.shape == tr.acts.back().shape,
            "backward: loss gradient shape " + shape_str(loss_grad.shape) + " != logits shape " +
                shape_str(tr.acts.back().shape));
    check_finite(loss_grad, "backward: loss gradient");

    GradsT<T> g;
    g.layers.resize(m.spec.layers.size());
    TensorT<T> d = loss_grad;
    for (std::size_t i = m.spec.layers.size(); i-- > 0;) {
        const LayerSpec& l = m.spec.layers[i];
        const TensorT<T>& x = tr.acts[i];
        switch (l.kind) {
            case LayerKind::dense: {
                g.layers[i].present = true;
                TensorT<T> dx;
                dense_backward(x, m.params[i].w, d, dx, g.layers[i].w, g.layers[i].b);
                d = std::move(dx);
                break;
            }
            case LayerKind::relu: d = relu_backward(x, d); break;
            case LayerKind::conv3x3: {
                g.layers[i].present = true;
                TensorT<T> dx;
                conv3x3_backward(x, m.params[i].w, d, dx, g.layers[i].w, g.layers[i].b);
                d = std::move(dx);
                break;
            }
            case LayerKind::maxpool2x2: d = maxpool2x2_backward(x.shape, tr.pool_argmax[i], d); break;
            case LayerKind::flatten: d = reshape_copy(d, x.shape); break;
        }
    }
    g.input = std::move(d);
    for (auto& lp : g.layers)
        if (lp.present) {
            check_finite(lp.w, "backward: weight gradient");
            check_finite(lp.b, "backward: bias gradient");
        }
    return g;
}

} // namespace slkd
