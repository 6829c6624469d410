#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "slkd/common.hpp"

namespace slkd {

// Deterministic RNG wrapper. std::mt19937 output is pinned by the standard,
// but the standard distributions are not, so the draws below are hand-rolled
// to keep runs bit-reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(static_cast<std::uint32_t>(mix64(seed))) {}

    std::uint32_t next_u32() { return engine_(); }

    // uniform in [0, 1) with 24 bits of mantissa
    float uniform_unit() { return static_cast<float>(next_u32() >> 8) * (1.0f / 16777216.0f); }

    double uniform_unit_double() {
        std::uint64_t hi = next_u32();
        std::uint64_t lo = next_u32();
        return static_cast<double>(((hi << 32) | lo) >> 11) * (1.0 / 9007199254740992.0);
    }

    float uniform(float lo, float hi) { return lo + (hi - lo) * uniform_unit(); }

    // unbiased integer in [0, n)
    std::uint32_t uniform_int(std::uint32_t n) {
        require(n > 0, "Rng::uniform_int: n must be positive");
        const std::uint32_t bound = static_cast<std::uint32_t>(-static_cast<std::int64_t>(n) % n);
        for (;;) {
            std::uint32_t r = next_u32();
            if (r >= bound) return r % n;
        }
    }

    // Box-Muller; second value cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform_unit_double();
        double u2 = uniform_unit_double();
        while (u1 <= 1e-300) u1 = uniform_unit_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            const std::size_t j = uniform_int(static_cast<std::uint32_t>(i + 1));
            std::swap(v[i], v[j]);
        }
    }

private:
    std::mt19937 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace slkd
