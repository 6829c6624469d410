#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "slkd/tensor.hpp"

namespace slkd {

enum class LayerKind { dense, relu, conv3x3, maxpool2x2, flatten };

inline const char* layer_kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::dense: return "dense";
        case LayerKind::relu: return "relu";
        case LayerKind::conv3x3: return "conv3x3";
        case LayerKind::maxpool2x2: return "maxpool2x2";
        case LayerKind::flatten: return "flatten";
    }
    return "?";
}

enum class InitScheme { he_uniform, zeros, identity };

struct InitSpec {
    std::uint64_t seed = 0;
    InitScheme scheme = InitScheme::he_uniform;
};

// dense(in,out) and conv3x3(in_ch,out_ch) use in/out; relu, maxpool2x2 and
// flatten carry no parameters.
struct LayerSpec {
    LayerKind kind = LayerKind::relu;
    int in = 0;
    int out = 0;
    InitSpec init;

    static LayerSpec dense(int in, int out, InitSpec init = {}) { return {LayerKind::dense, in, out, init}; }
    static LayerSpec relu() { return {LayerKind::relu, 0, 0, {}}; }
    static LayerSpec conv3x3(int in_ch, int out_ch, InitSpec init = {}) { return {LayerKind::conv3x3, in_ch, out_ch, init}; }
    static LayerSpec maxpool2x2() { return {LayerKind::maxpool2x2, 0, 0, {}}; }
    static LayerSpec flatten() { return {LayerKind::flatten, 0, 0, {}}; }
};

// ---- kernels ---------------------------------------------------------------
// x: (n,in) W: (in,out) b: (out) -> y: (n,out); accumulation in double.

template <class T>
TensorT<T> dense_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b) {
    const int n = x.shape[0], in = x.shape[1], out = w.shape[1];
    TensorT<T> y = TensorT<T>::zeros({n, out});
    for (int i = 0; i < n; ++i) {
        for (int o = 0; o < out; ++o) {
            double acc = static_cast<double>(b.data[static_cast<std::size_t>(o)]);
            for (int k = 0; k < in; ++k) acc += static_cast<double>(x.at2(i, k)) * static_cast<double>(w.at2(k, o));
            y.at2(i, o) = static_cast<T>(acc);
        }
    }
    return y;
}

template <class T>
void dense_backward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& dy,
                    TensorT<T>& dx, TensorT<T>& dw, TensorT<T>& db) {
    const int n = x.shape[0], in = x.shape[1], out = w.shape[1];
    dx = TensorT<T>::zeros({n, in});
    dw = TensorT<T>::zeros({in, out});
    db = TensorT<T>::zeros({out});
    for (int o = 0; o < out; ++o) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += static_cast<double>(dy.at2(i, o));
        db.data[static_cast<std::size_t>(o)] = static_cast<T>(acc);
    }
    for (int k = 0; k < in; ++k) {
        for (int o = 0; o < out; ++o) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += static_cast<double>(x.at2(i, k)) * static_cast<double>(dy.at2(i, o));
            dw.at2(k, o) = static_cast<T>(acc);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < in; ++k) {
            double acc = 0.0;
            for (int o = 0; o < out; ++o) acc += static_cast<double>(dy.at2(i, o)) * static_cast<double>(w.at2(k, o));
            dx.at2(i, k) = static_cast<T>(acc);
        }
    }
}

template <class T>
TensorT<T> relu_forward(const TensorT<T>& x) {
    TensorT<T> y = x;
    for (T& v : y.data) v = std::max(v, T(0));
    return y;
}

template <class T>
TensorT<T> relu_backward(const TensorT<T>& x, const TensorT<T>& dy) {
    TensorT<T> dx = dy;
    for (std::size_t i = 0; i < dx.data.size(); ++i)
        if (!(x.data[i] > T(0))) dx.data[i] = T(0);
    return dx;
}

// x: (n,ic,h,w) W: (oc,ic,3,3) b: (oc) -> y: (n,oc,h,w); pad=1, stride=1.

template <class T>
TensorT<T> conv3x3_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b) {
    const int n = x.shape[0], ic = x.shape[1], h = x.shape[2], wd = x.shape[3];
    const int oc = w.shape[0];
    TensorT<T> y = TensorT<T>::zeros({n, oc, h, wd});
    for (int i = 0; i < n; ++i)
        for (int o = 0; o < oc; ++o)
            for (int yy = 0; yy < h; ++yy)
                for (int xx = 0; xx < wd; ++xx) {
                    double acc = static_cast<double>(b.data[static_cast<std::size_t>(o)]);
                    for (int c = 0; c < ic; ++c)
                        for (int ky = 0; ky < 3; ++ky) {
                            const int sy = yy + ky - 1;
                            if (sy < 0 || sy >= h) continue;
                            for (int kx = 0; kx < 3; ++kx) {
                                const int sx = xx + kx - 1;
                                if (sx < 0 || sx >= wd) continue;
                                acc += static_cast<double>(x.at4(i, c, sy, sx)) * static_cast<double>(w.at4(o, c, ky, kx));
                            }
                        }
                    y.at4(i, o, yy, xx) = static_cast<T>(acc);
                }
    return y;
}

template <class T>
void conv3x3_backward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& dy,
                      TensorT<T>& dx, TensorT<T>& dw, TensorT<T>& db) {
    const int n = x.shape[0], ic = x.shape[1], h = x.shape[2], wd = x.shape[3];
    const int oc = w.shape[0];
    dx = TensorT<T>::zeros(x.shape);
    dw = TensorT<T>::zeros(w.shape);
    db = TensorT<T>::zeros({oc});
    std::vector<double> db_acc(static_cast<std::size_t>(oc), 0.0);
    std::vector<double> dw_acc(w.data.size(), 0.0);
    std::vector<double> dx_acc(x.data.size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int o = 0; o < oc; ++o)
            for (int yy = 0; yy < h; ++yy)
                for (int xx = 0; xx < wd; ++xx) {
                    const double g = static_cast<double>(dy.at4(i, o, yy, xx));
                    db_acc[static_cast<std::size_t>(o)] += g;
                    for (int c = 0; c < ic; ++c)
                        for (int ky = 0; ky < 3; ++ky) {
                            const int sy = yy + ky - 1;
                            if (sy < 0 || sy >= h) continue;
                            for (int kx = 0; kx < 3; ++kx) {
                                const int sx = xx + kx - 1;
                                if (sx < 0 || sx >= wd) continue;
                                const std::size_t wi = ((static_cast<std::size_t>(o) * ic + c) * 3 + ky) * 3 + kx;
                                const std::size_t xi = ((static_cast<std::size_t>(i) * ic + c) * h + sy) * wd + sx;
                                dw_acc[wi] += static_cast<double>(x.data[xi]) * g;
                                dx_acc[xi] += static_cast<double>(w.data[wi]) * g;
                            }
                        }
                }
    for (std::size_t k = 0; k < db_acc.size(); ++k) db.data[k] = static_cast<T>(db_acc[k]);
    for (std::size_t k = 0; k < dw_acc.size(); ++k) dw.data[k] = static_cast<T>(dw_acc[k]);
    for (std::size_t k = 0; k < dx_acc.size(); ++k) dx.data[k] = static_cast<T>(dx_acc[k]);
}

// 2x2 window, stride 2; even extents enforced by spec validation.

template <class T>
TensorT<T> maxpool2x2_forward(const TensorT<T>& x, std::vector<std::int32_t>& argmax) {
    const int n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3];
    const int oh = h / 2, ow = w / 2;
    TensorT<T> y = TensorT<T>::zeros({n, c, oh, ow});
    argmax.assign(y.data.size(), 0);
    std::size_t oi = 0;
    for (int i = 0; i < n; ++i)
        for (int ch = 0; ch < c; ++ch)
            for (int yy = 0; yy < oh; ++yy)
                for (int xx = 0; xx < ow; ++xx, ++oi) {
                    T best = x.at4(i, ch, 2 * yy, 2 * xx);
                    int best_k = 0;
                    for (int k = 1; k < 4; ++k) {
                        const T v = x.at4(i, ch, 2 * yy + k / 2, 2 * xx + k % 2);
                        if (v > best) {
                            best = v;
                            best_k = k;
                        }
                    }
                    y.data[oi] = best;
                    argmax[oi] = static_cast<std::int32_t>(
                        ((static_cast<std::size_t>(i) * c + ch) * h + 2 * yy + best_k / 2) * w + 2 * xx + best_k % 2);
                }
    return y;
}

template <class T>
TensorT<T> maxpool2x2_backward(const std::vector<int>& x_shape, const std::vector<std::int32_t>& argmax,
                               const TensorT<T>& dy) {
    TensorT<T> dx = TensorT<T>::zeros(x_shape);
    for (std::size_t i = 0; i < dy.data.size(); ++i)
        dx.data[static_cast<std::size_t>(argmax[i])] += dy.data[i];
    return dx;
}

} // namespace slkd
