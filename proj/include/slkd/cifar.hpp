#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "slkd/bytes.hpp"
#include "slkd/dataset.hpp"

namespace slkd {

// CIFAR-10 binary layout: records of 1 label byte + 1024 R + 1024 G + 1024 B.
constexpr std::size_t kCifarRecordBytes = 3073;
constexpr int kCifarSide = 32;

// Decode one or more record files, concatenated in the order given.
inline Dataset load_cifar_binary(const std::vector<std::string>& paths) {
    require(!paths.empty(), "load_cifar_binary: no files given");
    std::size_t total = 0;
    std::vector<std::vector<std::uint8_t>> blobs;
    blobs.reserve(paths.size());
    for (const auto& path : paths) {
        auto b = read_file_bytes(path);
        require(!b.empty(), "empty dataset file " + path);
        require(b.size() % kCifarRecordBytes == 0,
                path + ": length " + std::to_string(b.size()) + " is not a multiple of " +
                    std::to_string(kCifarRecordBytes));
        total += b.size() / kCifarRecordBytes;
        blobs.push_back(std::move(b));
    }
    Dataset d;
    d.name = paths.front();
    d.images = Tensor::zeros({static_cast<int>(total), 3, kCifarSide, kCifarSide});
    d.labels.resize(total);
    const std::size_t plane = static_cast<std::size_t>(kCifarSide) * kCifarSide;
    std::size_t rec = 0;
    int max_label = 0;
    for (const auto& b : blobs) {
        for (std::size_t off = 0; off < b.size(); off += kCifarRecordBytes, ++rec) {
            const int lab = b[off];
            d.labels[rec] = lab;
            max_label = std::max(max_label, lab);
            float* dst = d.images.data.data() + rec * 3 * plane;
            for (std::size_t i = 0; i < 3 * plane; ++i)
                dst[i] = static_cast<float>(b[off + 1 + i]) / 255.0f;
        }
    }
    d.class_count = max_label + 1;
    d.validate();
    return d;
}

inline void save_cifar_binary(const Dataset& d, const std::string& path) {
    d.validate();
    require(d.images.shape == std::vector<int>{d.size(), 3, kCifarSide, kCifarSide},
            "save_cifar_binary: images must be (n, 3, 32, 32), got " + shape_str(d.images.shape));
    ByteWriter w;
    const std::size_t plane = static_cast<std::size_t>(kCifarSide) * kCifarSide;
    for (int r = 0; r < d.size(); ++r) {
        const int lab = d.labels[static_cast<std::size_t>(r)];
        require(lab >= 0 && lab <= 255, "save_cifar_binary: label outside byte range");
        w.u8(static_cast<std::uint8_t>(lab));
        const float* src = d.images.data.data() + static_cast<std::size_t>(r) * 3 * plane;
        for (std::size_t i = 0; i < 3 * plane; ++i) {
            require(src[i] >= 0.0f && src[i] <= 1.0f, "save_cifar_binary: pixel outside [0,1]");
            w.u8(static_cast<std::uint8_t>(std::lround(src[i] * 255.0f)));
        }
    }
    write_file_bytes(path, w.buf);
}

} // namespace slkd
