#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "slkd/losses.hpp"
#include "slkd/rng.hpp"
#include "slkd/tensor.hpp"

namespace slkd {

enum class Split { train, test };

inline const char* split_name(Split s) { return s == Split::train ? "train" : "test"; }

// In-memory labelled dataset. images is (n, features...) with the sample
// axis first; image corpora use (n, c, h, w), synthetic blobs use (n, dims).
struct Dataset {
    Tensor images;
    std::vector<int> labels;
    int class_count = 0;
    Split split = Split::train;
    std::string name;

    int size() const { return images.shape.empty() ? 0 : images.shape[0]; }

    void validate() const {
        require(!images.shape.empty(), "dataset " + name + ": images tensor has no shape");
        require(images.shape[0] == static_cast<int>(labels.size()),
                "dataset " + name + ": " + std::to_string(images.shape[0]) + " images vs " +
                    std::to_string(labels.size()) + " labels");
        require(class_count > 0, "dataset " + name + ": class_count must be positive");
        for (std::size_t i = 0; i < labels.size(); ++i)
            require(labels[i] >= 0 && labels[i] < class_count,
                    "dataset " + name + ": label " + std::to_string(labels[i]) + " at index " +
                        std::to_string(i) + " outside [0," + std::to_string(class_count) + ")");
        check_finite(images, "dataset " + name + ": images");
    }

    std::vector<int> sample_shape() const {
        require(!images.shape.empty(), "dataset: images tensor has no shape");
        return std::vector<int>(images.shape.begin() + 1, images.shape.end());
    }

    std::vector<int> class_histogram() const {
        std::vector<int> h(static_cast<std::size_t>(class_count), 0);
        for (int lab : labels) ++h[static_cast<std::size_t>(lab)];
        return h;
    }
};

// Gaussian class blobs: exactly per_class samples of each class, presented in
// a seeded shuffled order. Centroids depend on seed only, so train/test draws
// (distinguished by stream) share the same class geometry. With
// modes_per_class > 1 each class is the union of several scattered Gaussian
// modes, which makes the decision boundary genuinely non-linear and lets
// model capacity matter; separation between centroid_scale and spread still
// controls intrinsic difficulty.
inline Dataset synth_blobs(int class_count, int per_class, int dims, double spread, std::uint64_t seed,
                           std::uint64_t stream = 0, double centroid_scale = 3.0,
                           int modes_per_class = 1) {
    require(class_count > 0 && per_class > 0 && dims > 0,
            "synth_blobs: class_count, per_class, dims must be positive");
    require(spread >= 0.0, "synth_blobs: spread must be >= 0");
    require(modes_per_class >= 1, "synth_blobs: modes_per_class must be >= 1");
    const int n = class_count * per_class;
    const int modes = modes_per_class;
    std::vector<float> centroids(static_cast<std::size_t>(class_count) * modes * dims);
    {
        Rng crng(mix64(seed, 0xb10b5u));
        for (float& v : centroids) v = static_cast<float>(centroid_scale * crng.normal());
    }
    Rng srng(mix64(seed, 0x5a3591eu, stream));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    srng.shuffle(order);

    Dataset d;
    d.name = "blobs";
    d.class_count = class_count;
    d.split = stream == 0 ? Split::train : Split::test;
    d.images = Tensor::zeros({n, dims});
    d.labels.resize(static_cast<std::size_t>(n));
    // draw class by class so the per-class histogram is exact, then scatter
    // through the shuffled order
    int slot = 0;
    for (int c = 0; c < class_count; ++c) {
        for (int k = 0; k < per_class; ++k, ++slot) {
            const int row = order[static_cast<std::size_t>(slot)];
            d.labels[static_cast<std::size_t>(row)] = c;
            const int mode =
                modes > 1 ? static_cast<int>(srng.uniform_int(static_cast<std::uint32_t>(modes))) : 0;
            const std::size_t base = (static_cast<std::size_t>(c) * modes + mode) * dims;
            for (int j = 0; j < dims; ++j)
                d.images.at2(row, j) =
                    centroids[base + static_cast<std::size_t>(j)] + static_cast<float>(spread * srng.normal());
        }
    }
    d.validate();
    return d;
}

// Reassign a fraction of labels uniformly to some *other* class. Returns the
// indices that were flipped, ascending.
inline std::vector<int> apply_label_noise(Dataset& d, double fraction, std::uint64_t seed) {
    require(fraction >= 0.0 && fraction <= 1.0, "apply_label_noise: fraction must be in [0,1]");
    d.validate();
    require(d.class_count >= 2 || fraction == 0.0, "apply_label_noise: needs at least two classes");
    const int n = d.size();
    const int flips = static_cast<int>(fraction * n + 0.5);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    Rng rng(mix64(seed, 0x4015eu));
    rng.shuffle(order);
    std::vector<int> flipped(order.begin(), order.begin() + flips);
    std::sort(flipped.begin(), flipped.end());
    for (int idx : flipped) {
        int& lab = d.labels[static_cast<std::size_t>(idx)];
        const int shift = 1 + rng.uniform_int(d.class_count - 1);
        lab = (lab + shift) % d.class_count;
    }
    return flipped;
}

// Copy the rows named by indices into a batch tensor + one-hot labels.
inline void gather_batch(const Dataset& d, const std::vector<int>& indices, Tensor& images, Tensor& labels) {
    require(!indices.empty(), "gather_batch: empty index list");
    const auto sshape = d.sample_shape();
    std::vector<int> bshape;
    bshape.push_back(static_cast<int>(indices.size()));
    bshape.insert(bshape.end(), sshape.begin(), sshape.end());
    images = Tensor::zeros(bshape);
    const std::size_t stride = shape_numel(sshape);
    std::vector<int> labs(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const int src = indices[i];
        require(src >= 0 && src < d.size(), "gather_batch: index " + std::to_string(src) + " out of range");
        std::copy_n(d.images.data.begin() + static_cast<std::ptrdiff_t>(src * stride), stride,
                    images.data.begin() + static_cast<std::ptrdiff_t>(i * stride));
        labs[i] = d.labels[static_cast<std::size_t>(src)];
    }
    labels = one_hot(labs, d.class_count);
}

} // namespace slkd
