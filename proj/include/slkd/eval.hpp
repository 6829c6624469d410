#pragma once

#include <vector>

#include "slkd/dataset.hpp"
#include "slkd/losses.hpp"
#include "slkd/model.hpp"

namespace slkd {

struct EvalResult {
    double top1_accuracy = 0.0;
    double mean_loss = 0.0;
    long long count = 0;
};

constexpr int kEvalChunk = 256;

// Un-augmented forward logits for the named rows, in the order given.
inline Tensor model_logits(const Model& m, const Dataset& d, const std::vector<int>& indices) {
    require(!indices.empty(), "model_logits: empty index list");
    require(output_classes(m.spec) == d.class_count,
            "model emits " + std::to_string(output_classes(m.spec)) + " classes but dataset has " +
                std::to_string(d.class_count));
    Tensor all = Tensor::zeros({static_cast<int>(indices.size()), d.class_count});
    for (std::size_t lo = 0; lo < indices.size(); lo += kEvalChunk) {
        const std::size_t hi = std::min(indices.size(), lo + kEvalChunk);
        const std::vector<int> chunk(indices.begin() + static_cast<std::ptrdiff_t>(lo),
                                     indices.begin() + static_cast<std::ptrdiff_t>(hi));
        Tensor images, labels;
        gather_batch(d, chunk, images, labels);
        const Tensor logits = forward(m, images);
        for (std::size_t r = lo; r < hi; ++r)
            for (int j = 0; j < d.class_count; ++j)
                all.at2(static_cast<int>(r), j) = logits.at2(static_cast<int>(r - lo), j);
    }
    return all;
}

// lowest index wins ties, so evaluation is deterministic
inline int argmax_row(const Tensor& t, int row) {
    int best = 0;
    for (int j = 1; j < t.shape[1]; ++j)
        if (t.at2(row, j) > t.at2(row, best)) best = j;
    return best;
}

inline EvalResult evaluate_subset(const Model& m, const Dataset& d, const std::vector<int>& indices) {
    require(!indices.empty(), "evaluate: empty index set");
    d.validate();
    const Tensor logits = model_logits(m, d, indices);
    const SoftTargets probs = softmax_t(logits, 1.0);
    EvalResult r;
    r.count = static_cast<long long>(indices.size());
    long long correct = 0;
    double loss = 0.0;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int truth = d.labels[static_cast<std::size_t>(indices[i])];
        if (argmax_row(logits, static_cast<int>(i)) == truth) ++correct;
        loss += -std::log(std::max(static_cast<double>(probs.probs.at2(static_cast<int>(i), truth)), 1e-12));
    }
    r.top1_accuracy = static_cast<double>(correct) / static_cast<double>(r.count);
    r.mean_loss = loss / static_cast<double>(r.count);
    return r;
}

inline std::vector<int> all_indices(const Dataset& d) {
    std::vector<int> idx(static_cast<std::size_t>(d.size()));
    for (int i = 0; i < d.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
}

inline EvalResult evaluate(const Model& m, const Dataset& d) {
    require(d.size() > 0, "evaluate: dataset is empty");
    return evaluate_subset(m, d, all_indices(d));
}

} // namespace slkd
