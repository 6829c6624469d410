#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "slkd/tensor.hpp"

namespace slkd {

template <class T>
struct SoftTargetsT {
    TensorT<T> probs; // (batch, classes)
    T temperature = T(1);
};
using SoftTargets = SoftTargetsT<float>;

enum class LossMode { convex, additive };

struct LossBreakdown {
    double ce = 0.0;
    double kd = 0.0;
    double total = 0.0;
    double lambda = 0.0;
};

namespace detail {

// row-wise log-softmax of logits/tau, max-subtracted, double accumulation
template <class T>
std::vector<double> log_softmax_row(const TensorT<T>& logits, int row, double tau) {
    const int k = logits.shape[1];
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) mx = std::max(mx, static_cast<double>(logits.at2(row, j)) / tau);
    double sum = 0.0;
    std::vector<double> out(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        out[static_cast<std::size_t>(j)] = static_cast<double>(logits.at2(row, j)) / tau - mx;
        sum += std::exp(out[static_cast<std::size_t>(j)]);
    }
    const double lse = std::log(sum);
    for (double& v : out) v -= lse;
    return out;
}

template <class T>
void check_logit_pair(const TensorT<T>& a, const TensorT<T>& b, const char* who) {
    require(a.shape.size() == 2 && b.shape.size() == 2 && a.shape == b.shape,
            std::string(who) + ": logits shapes differ, " + shape_str(a.shape) + " vs " + shape_str(b.shape));
}

} // namespace detail

// Temperature-softened softmax; rows sum to 1, entries clamped into (0,1).
template <class T>
SoftTargetsT<T> softmax_t(const TensorT<T>& logits, double tau) {
    require(tau > 0.0, "softmax_t: tau must be > 0");
    require(logits.shape.size() == 2, "softmax_t: logits must be (batch, classes), got " + shape_str(logits.shape));
    check_finite(logits, "softmax_t: logits");
    SoftTargetsT<T> st;
    st.temperature = static_cast<T>(tau);
    st.probs = TensorT<T>::zeros(logits.shape);
    const int n = logits.shape[0], k = logits.shape[1];
    const T lo = T(1e-12);
    const T hi = std::nextafter(T(1), T(0));
    for (int i = 0; i < n; ++i) {
        const auto lp = detail::log_softmax_row(logits, i, tau);
        for (int j = 0; j < k; ++j) {
            const T p = static_cast<T>(std::exp(lp[static_cast<std::size_t>(j)]));
            st.probs.at2(i, j) = std::clamp(p, lo, hi);
        }
    }
    return st;
}

inline void validate_one_hot(const Tensor& labels) {
    require(labels.shape.size() == 2, "cross_entropy: labels must be (batch, classes)");
    const int n = labels.shape[0], k = labels.shape[1];
    for (int i = 0; i < n; ++i) {
        int ones = 0;
        for (int j = 0; j < k; ++j) {
            const float v = labels.at2(i, j);
            require(v == 0.0f || v == 1.0f, "cross_entropy: labels row " + std::to_string(i) + " is not one-hot");
            if (v == 1.0f) ++ones;
        }
        require(ones == 1, "cross_entropy: labels row " + std::to_string(i) + " is not one-hot");
    }
}

inline Tensor one_hot(const std::vector<int>& labels, int classes) {
    require(classes > 0, "one_hot: classes must be positive");
    Tensor t = Tensor::zeros({static_cast<int>(labels.size()), classes});
    for (std::size_t i = 0; i < labels.size(); ++i) {
        require(labels[i] >= 0 && labels[i] < classes, "one_hot: label out of range");
        t.at2(static_cast<int>(i), labels[i]) = 1.0f;
    }
    return t;
}

// mean over the batch of -log p_true, p clamped at 1e-12 before the log
template <class T>
double cross_entropy(const SoftTargetsT<T>& probs, const Tensor& labels) {
    require(probs.probs.shape.size() == 2, "cross_entropy: probs must be (batch, classes)");
    validate_one_hot(labels);
    require(probs.probs.shape == labels.shape,
            "cross_entropy: probs " + shape_str(probs.probs.shape) + " vs labels " + shape_str(labels.shape));
    const int n = labels.shape[0], k = labels.shape[1];
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            if (labels.at2(i, j) == 1.0f)
                acc += -std::log(std::max(static_cast<double>(probs.probs.at2(i, j)), 1e-12));
    return acc / n;
}

// tau^2 * mean-over-batch KL(softmax_t(teacher,tau) || softmax_t(student,tau)).
// The teacher side is a constant; gradients flow only through the student term.
template <class T>
double kd_loss(const TensorT<T>& teacher_logits, const TensorT<T>& student_logits, double tau) {
    require(tau > 0.0, "kd_loss: tau must be > 0");
    detail::check_logit_pair(teacher_logits, student_logits, "kd_loss");
    const int n = teacher_logits.shape[0], k = teacher_logits.shape[1];
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto lt = detail::log_softmax_row(teacher_logits, i, tau);
        const auto ls = detail::log_softmax_row(student_logits, i, tau);
        double row = 0.0;
        for (int j = 0; j < k; ++j) {
            const std::size_t u = static_cast<std::size_t>(j);
            row += std::exp(lt[u]) * (lt[u] - ls[u]);
        }
        acc += std::max(row, 0.0);
    }
    return tau * tau * acc / n;
}

// d kd_loss / d student_logits = tau * (softmax_t(student) - softmax_t(teacher)) / batch
template <class T>
TensorT<T> kd_loss_grad_student(const TensorT<T>& teacher_logits, const TensorT<T>& student_logits, double tau) {
    require(tau > 0.0, "kd_loss: tau must be > 0");
    detail::check_logit_pair(teacher_logits, student_logits, "kd_loss");
    const int n = teacher_logits.shape[0], k = teacher_logits.shape[1];
    TensorT<T> g = TensorT<T>::zeros(teacher_logits.shape);
    for (int i = 0; i < n; ++i) {
        const auto lt = detail::log_softmax_row(teacher_logits, i, tau);
        const auto ls = detail::log_softmax_row(student_logits, i, tau);
        for (int j = 0; j < k; ++j) {
            const std::size_t u = static_cast<std::size_t>(j);
            g.at2(i, j) = static_cast<T>(tau * (std::exp(ls[u]) - std::exp(lt[u])) / n);
        }
    }
    return g;
}

// d cross_entropy(softmax(student), y) / d student_logits = (softmax(student) - y) / batch
template <class T>
TensorT<T> ce_grad_student(const TensorT<T>& student_logits, const Tensor& labels) {
    validate_one_hot(labels);
    require(student_logits.shape.size() == 2 &&
                student_logits.shape == std::vector<int>{labels.shape[0], labels.shape[1]},
            "ce gradient: logits " + shape_str(student_logits.shape) + " vs labels " + shape_str(labels.shape));
    const int n = student_logits.shape[0], k = student_logits.shape[1];
    TensorT<T> g = TensorT<T>::zeros(student_logits.shape);
    for (int i = 0; i < n; ++i) {
        const auto ls = detail::log_softmax_row(student_logits, i, 1.0);
        for (int j = 0; j < k; ++j)
            g.at2(i, j) = static_cast<T>(
                (std::exp(ls[static_cast<std::size_t>(j)]) - static_cast<double>(labels.at2(i, j))) / n);
    }
    return g;
}

inline void validate_lambda(double lambda, LossMode mode) {
    if (mode == LossMode::convex)
        require(lambda >= 0.0 && lambda <= 1.0, "student_loss: convex mode requires lambda in [0,1]");
    else
        require(lambda >= 0.0, "student_loss: additive mode requires lambda >= 0");
}

// convex: (1-lambda)*ce + lambda*kd ; additive: ce + lambda*kd
inline double student_loss(double ce, double kd, double lambda, LossMode mode) {
    validate_lambda(lambda, mode);
    if (mode == LossMode::convex) return (1.0 - lambda) * ce + lambda * kd;
    return ce + lambda * kd;
}

// Per-stage objective: hard-label cross-entropy plus lambda times the
// temperature-softened teacher divergence, always additive.
template <class T>
LossBreakdown slkd_stage_loss(const TensorT<T>& student_logits, const TensorT<T>& teacher_logits,
                              const Tensor& labels, double tau, double lambda) {
    require(lambda >= 0.0, "slkd_stage_loss: lambda must be >= 0");
    LossBreakdown out;
    out.lambda = lambda;
    out.ce = cross_entropy(softmax_t(student_logits, 1.0), labels);
    out.kd = kd_loss(teacher_logits, student_logits, tau);
    out.total = out.ce + lambda * out.kd;
    return out;
}

// gradient of student_loss(ce(s), kd(t,s), lambda) w.r.t. student logits;
// lambda == 0 takes the pure cross-entropy path bit-for-bit
template <class T>
TensorT<T> student_loss_grad(const TensorT<T>& teacher_logits, const TensorT<T>& student_logits,
                             const Tensor& labels, double tau, double lambda, LossMode mode) {
    validate_lambda(lambda, mode);
    TensorT<T> g = ce_grad_student<T>(student_logits, labels);
    if (lambda == 0.0) return g;
    const double ce_w = mode == LossMode::convex ? 1.0 - lambda : 1.0;
    TensorT<T> gk = kd_loss_grad_student(teacher_logits, student_logits, tau);
    for (std::size_t i = 0; i < g.data.size(); ++i)
        g.data[i] = static_cast<T>(ce_w * static_cast<double>(g.data[i]) +
                                   lambda * static_cast<double>(gk.data[i]));
    return g;
}

} // namespace slkd
