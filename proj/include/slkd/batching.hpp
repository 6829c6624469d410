#pragma once

#include <vector>

#include "slkd/rng.hpp"

namespace slkd {

// A seeded epoch plan: `order` is a permutation of the active indices, cut
// into consecutive batches of `batch_size` (last one may be short).
struct BatchPlan {
    int batch_size = 1;
    std::uint64_t epoch_seed = 0;
    std::vector<int> order;

    int batch_count() const {
        return static_cast<int>((order.size() + static_cast<std::size_t>(batch_size) - 1) /
                                static_cast<std::size_t>(batch_size));
    }

    std::vector<int> batch(int b) const {
        require(b >= 0 && b < batch_count(), "batch plan: batch index out of range");
        const std::size_t lo = static_cast<std::size_t>(b) * static_cast<std::size_t>(batch_size);
        const std::size_t hi = std::min(order.size(), lo + static_cast<std::size_t>(batch_size));
        return std::vector<int>(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                order.begin() + static_cast<std::ptrdiff_t>(hi));
    }
};

inline BatchPlan make_batches(const std::vector<int>& active_indices, int batch_size, std::uint64_t epoch_seed) {
    require(!active_indices.empty(), "make_batches: active index set is empty");
    require(batch_size >= 1, "make_batches: batch_size must be >= 1");
    BatchPlan plan;
    plan.batch_size = batch_size;
    plan.epoch_seed = epoch_seed;
    plan.order = active_indices;
    Rng rng(epoch_seed);
    rng.shuffle(plan.order);
    return plan;
}

// iterations one epoch over `active` costs at batch size b
inline long long epoch_iterations(long long active, long long b) {
    require(active >= 0 && b >= 1, "epoch_iterations: bad arguments");
    return (active + b - 1) / b;
}

} // namespace slkd
