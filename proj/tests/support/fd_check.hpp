#pragma once

// Central finite-difference checking against a 64-bit shadow of the network.
// Every analytic gradient in the library is compared coordinate-by-coordinate
// to (f(x+h) - f(x-h)) / 2h. ReLU and maxpool are piecewise linear, so random
// instances are redrawn until the perturbation cannot cross a kink.

#include <cmath>
#include <functional>
#include <vector>

#include "slkd/model.hpp"
#include "slkd/rng.hpp"

namespace fd {

using DTensor = slkd::TensorT<double>;
using DModel = slkd::ModelT<double>;

constexpr double kStep = 1e-3;
constexpr double kTol = 1e-4;
// keep pre-activations at least this far from a ReLU/maxpool kink
constexpr double kKinkMargin = 5e-2;

inline double rel_err(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
    return std::abs(a - b) / scale;
}

inline DTensor random_tensor(slkd::Rng& rng, std::vector<int> shape, double lo = -1.5, double hi = 1.5) {
    DTensor t = DTensor::zeros(std::move(shape));
    for (double& v : t.data) v = lo + (hi - lo) * rng.uniform_unit_double();
    return t;
}

// scalar functional of the logits plus its analytic gradient
struct Functional {
    std::function<double(const DTensor&)> value;
    std::function<DTensor(const DTensor&)> grad;
};

// sum(c .* logits) with fixed random coefficients: linear, so it exercises
// the layer Jacobians without coupling in any loss nonlinearity
inline Functional linear_functional(slkd::Rng& rng, const std::vector<int>& logits_shape) {
    auto c = std::make_shared<DTensor>(random_tensor(rng, logits_shape, 0.25, 1.75));
    Functional f;
    f.value = [c](const DTensor& logits) {
        double acc = 0.0;
        for (std::size_t i = 0; i < logits.data.size(); ++i) acc += c->data[i] * logits.data[i];
        return acc;
    };
    f.grad = [c](const DTensor&) { return *c; };
    return f;
}

// true when every ReLU input and every maxpool window in the trace keeps a
// safe margin, so +-h perturbations stay on one linear piece
inline bool trace_clear_of_kinks(const slkd::ModelSpec& spec, const slkd::ForwardTraceT<double>& tr) {
    for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const DTensor& x = tr.acts[li];
        if (spec.layers[li].kind == slkd::LayerKind::relu) {
            for (double v : x.data)
                if (std::abs(v) < kKinkMargin) return false;
        }
        if (spec.layers[li].kind == slkd::LayerKind::maxpool2x2) {
            const int n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3];
            for (int i = 0; i < n; ++i)
                for (int ch = 0; ch < c; ++ch)
                    for (int yy = 0; yy + 1 < h; yy += 2)
                        for (int xx = 0; xx + 1 < w; xx += 2) {
                            double best = -1e300, second = -1e300;
                            for (int k = 0; k < 4; ++k) {
                                const double v = x.at4(i, ch, yy + k / 2, xx + k % 2);
                                if (v > best) {
                                    second = best;
                                    best = v;
                                } else if (v > second) {
                                    second = v;
                                }
                            }
                            if (best - second < kKinkMargin) return false;
                        }
        }
    }
    return true;
}

struct Report {
    double max_rel_err = 0.0;
    long long coords = 0;
};

// Check d f(model(batch)) / d params and / d batch for one instance.
inline void check_model_gradients(DModel& model, DTensor& batch, const Functional& f, Report& rep) {
    const slkd::ForwardTraceT<double> tr = slkd::forward_trace(model, batch);
    const slkd::GradsT<double> g = slkd::backward(model, tr, f.grad(tr.acts.back()));

    auto probe = [&](double* coord, double analytic) {
        const double keep = *coord;
        *coord = keep + kStep;
        const double up = f.value(slkd::forward(model, batch));
        *coord = keep - kStep;
        const double dn = f.value(slkd::forward(model, batch));
        *coord = keep;
        rep.max_rel_err = std::max(rep.max_rel_err, rel_err((up - dn) / (2.0 * kStep), analytic));
        ++rep.coords;
    };

    auto params = model.param_tensors();
    const auto grads = g.param_tensors();
    for (std::size_t t = 0; t < params.size(); ++t)
        for (std::size_t k = 0; k < params[t]->data.size(); ++k)
            probe(&params[t]->data[k], grads[t]->data[k]);
    for (std::size_t k = 0; k < batch.data.size(); ++k) probe(&batch.data[k], g.input.data[k]);
}

// Run `instances` seeded random draws of (model, batch) for one spec shape,
// redrawing any instance whose trace sits near a kink.
inline Report check_spec(const slkd::ModelSpec& spec, int batch_n, int instances, std::uint64_t seed) {
    Report rep;
    slkd::Rng rng(seed);
    int done = 0;
    int attempts = 0;
    while (done < instances) {
        slkd::require(++attempts < instances * 200, "fd harness: cannot draw a kink-free instance");
        DModel m = slkd::build_model<double>(spec, slkd::Role::student);
        for (auto* t : m.param_tensors())
            for (double& v : t->data) v = -1.0 + 2.0 * rng.uniform_unit_double();
        std::vector<int> bshape{batch_n};
        for (int e : spec.input_shape) bshape.push_back(e);
        DTensor batch = random_tensor(rng, bshape);
        if (!trace_clear_of_kinks(spec, slkd::forward_trace(m, batch))) continue;
        Functional f = linear_functional(rng, slkd::forward(m, batch).shape);
        check_model_gradients(m, batch, f, rep);
        ++done;
    }
    return rep;
}

// Check d loss / d student_logits for a loss given by (value, analytic grad).
inline Report check_loss(const std::function<double(const DTensor&)>& value,
                         const std::function<DTensor(const DTensor&)>& grad, int rows, int cols, int instances,
                         std::uint64_t seed) {
    Report rep;
    slkd::Rng rng(seed);
    for (int inst = 0; inst < instances; ++inst) {
        DTensor logits = random_tensor(rng, {rows, cols}, -2.0, 2.0);
        const DTensor g = grad(logits);
        for (std::size_t k = 0; k < logits.data.size(); ++k) {
            const double keep = logits.data[k];
            logits.data[k] = keep + kStep;
            const double up = value(logits);
            logits.data[k] = keep - kStep;
            const double dn = value(logits);
            logits.data[k] = keep;
            rep.max_rel_err = std::max(rep.max_rel_err, rel_err((up - dn) / (2.0 * kStep), g.data[k]));
            ++rep.coords;
        }
    }
    return rep;
}

} // namespace fd
