#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "slkd/bytes.hpp"
#include "slkd/dataset.hpp"

namespace slkd {

constexpr std::uint32_t kIdxImagesMagic = 0x00000803u; // ubyte, 3 dims
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801u; // ubyte, 1 dim

namespace detail {

inline std::uint32_t idx_header_u32(ByteReader& r, const std::string& path) {
    if (r.remaining() < 4) fail("truncated header in " + path);
    return r.u32be();
}

} // namespace detail

// MNIST-style IDX pair. Pixels land in [0,1] (byte / 255), images decoded as
// (n, 1, rows, cols).
inline Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    const auto ibytes = read_file_bytes(images_path);
    const auto lbytes = read_file_bytes(labels_path);

    ByteReader ir(ibytes, "truncated payload in " + images_path);
    const std::uint32_t imagic = detail::idx_header_u32(ir, images_path);
    require(imagic == kIdxImagesMagic, "bad magic in " + images_path + ": got " + std::to_string(imagic) +
                                           ", want " + std::to_string(kIdxImagesMagic));
    const std::uint32_t n = detail::idx_header_u32(ir, images_path);
    const std::uint32_t rows = detail::idx_header_u32(ir, images_path);
    const std::uint32_t cols = detail::idx_header_u32(ir, images_path);

    ByteReader lr(lbytes, "truncated payload in " + labels_path);
    const std::uint32_t lmagic = detail::idx_header_u32(lr, labels_path);
    require(lmagic == kIdxLabelsMagic, "bad magic in " + labels_path + ": got " + std::to_string(lmagic) +
                                           ", want " + std::to_string(kIdxLabelsMagic));
    const std::uint32_t ln = detail::idx_header_u32(lr, labels_path);
    require(n == ln, "count mismatch: " + std::to_string(n) + " images in " + images_path + " vs " +
                         std::to_string(ln) + " labels in " + labels_path);
    require(n > 0 && rows > 0 && cols > 0, "empty dataset in " + images_path);

    const std::size_t pixels = static_cast<std::size_t>(n) * rows * cols;
    if (ir.remaining() != pixels)
        fail("truncated payload in " + images_path + ": expected " + std::to_string(pixels) +
             " pixel bytes, found " + std::to_string(ir.remaining()));
    if (lr.remaining() != n)
        fail("truncated payload in " + labels_path + ": expected " + std::to_string(n) +
             " label bytes, found " + std::to_string(lr.remaining()));

    Dataset d;
    d.name = images_path;
    d.images = Tensor::zeros({static_cast<int>(n), 1, static_cast<int>(rows), static_cast<int>(cols)});
    for (std::size_t i = 0; i < pixels; ++i) d.images.data[i] = static_cast<float>(ir.u8()) / 255.0f;
    d.labels.resize(n);
    int max_label = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        d.labels[i] = lr.u8();
        max_label = std::max(max_label, d.labels[i]);
    }
    d.class_count = max_label + 1;
    d.validate();
    return d;
}

// Encode back to the IDX pair; pixels re-quantized as round(v * 255).
inline void save_idx(const Dataset& d, const std::string& images_path, const std::string& labels_path) {
    d.validate();
    require(d.images.shape.size() == 4 && d.images.shape[1] == 1,
            "save_idx: images must be (n, 1, rows, cols), got " + shape_str(d.images.shape));
    ByteWriter iw;
    iw.u32be(kIdxImagesMagic);
    iw.u32be(static_cast<std::uint32_t>(d.images.shape[0]));
    iw.u32be(static_cast<std::uint32_t>(d.images.shape[2]));
    iw.u32be(static_cast<std::uint32_t>(d.images.shape[3]));
    for (float v : d.images.data) {
        require(v >= 0.0f && v <= 1.0f, "save_idx: pixel outside [0,1]");
        iw.u8(static_cast<std::uint8_t>(std::lround(v * 255.0f)));
    }
    ByteWriter lw;
    lw.u32be(kIdxLabelsMagic);
    lw.u32be(static_cast<std::uint32_t>(d.labels.size()));
    for (int lab : d.labels) {
        require(lab >= 0 && lab <= 255, "save_idx: label outside byte range");
        lw.u8(static_cast<std::uint8_t>(lab));
    }
    write_file_bytes(images_path, iw.buf);
    write_file_bytes(labels_path, lw.buf);
}

} // namespace slkd
