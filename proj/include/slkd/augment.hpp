#pragma once

#include <vector>

#include "slkd/rng.hpp"
#include "slkd/tensor.hpp"

namespace slkd {

// pad == 0 disables pad-then-crop; hflip_p == 0 disables flipping.
struct AugmentPolicy {
    int pad = 0;
    double hflip_p = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        require(pad >= 0, "augment: pad must be >= 0");
        require(hflip_p >= 0.0 && hflip_p <= 1.0, "augment: hflip p must be in [0,1]");
    }
    bool identity() const { return pad == 0 && hflip_p == 0.0; }
};

struct AugmentDraw {
    int dy = 0; // crop offset into the padded image, in [0, 2*pad]
    int dx = 0;
    bool flip = false;
};

// The per-image randomness for one batch, fixed by (policy.seed, epoch,
// batch_index). Offsets are drawn before the flip for each image.
inline std::vector<AugmentDraw> augment_draws(const AugmentPolicy& pol, int epoch, int batch_index, int n) {
    pol.validate();
    require(n >= 0, "augment: negative batch size");
    std::vector<AugmentDraw> draws(static_cast<std::size_t>(n));
    if (pol.identity()) return draws;
    Rng rng(mix64(pol.seed, static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(batch_index)));
    for (auto& d : draws) {
        if (pol.pad > 0) {
            d.dy = rng.uniform_int(2 * pol.pad + 1);
            d.dx = rng.uniform_int(2 * pol.pad + 1);
        }
        if (pol.hflip_p > 0.0) d.flip = rng.uniform_unit_double() < pol.hflip_p;
    }
    return draws;
}

// Zero-pad each image by pol.pad on every side, crop back to the original
// extent at the drawn offset, then flip horizontally where drawn. Shape is
// preserved; labels are untouched by construction.
inline Tensor augment(const Tensor& batch, const AugmentPolicy& pol, int epoch, int batch_index) {
    pol.validate();
    require(batch.shape.size() == 4, "augment: batch must be (n, c, h, w), got " + shape_str(batch.shape));
    const int n = batch.shape[0], c = batch.shape[1], h = batch.shape[2], w = batch.shape[3];
    require(pol.pad <= h && pol.pad <= w,
            "augment: pad " + std::to_string(pol.pad) + " larger than image extent " + std::to_string(h) +
                "x" + std::to_string(w));
    if (pol.identity()) return batch;
    const auto draws = augment_draws(pol, epoch, batch_index, n);
    Tensor out = Tensor::zeros(batch.shape);
    for (int i = 0; i < n; ++i) {
        const AugmentDraw& d = draws[static_cast<std::size_t>(i)];
        for (int ch = 0; ch < c; ++ch)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const int xs = d.flip ? w - 1 - x : x;
                    // out pixel (y, xs) reads padded-image pixel (dy+y, dx+x)
                    const int sy = d.dy + y - pol.pad;
                    const int sx = d.dx + x - pol.pad;
                    out.at4(i, ch, y, xs) =
                        (sy >= 0 && sy < h && sx >= 0 && sx < w) ? batch.at4(i, ch, sy, sx) : 0.0f;
                }
    }
    return out;
}

} // namespace slkd
