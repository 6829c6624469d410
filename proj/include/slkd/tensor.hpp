#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "slkd/common.hpp"

namespace slkd {

inline std::string shape_str(const std::vector<int>& shape) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ",";
        os << shape[i];
    }
    os << ")";
    return os.str();
}

inline std::int64_t shape_numel(const std::vector<int>& shape) {
    std::int64_t n = 1;
    for (int e : shape) n *= e;
    return n;
}

// Dense row-major array of rank <= 4. T is float in the public API; the
// finite-difference test shadow instantiates double.
template <class T>
struct TensorT {
    std::vector<int> shape;
    std::vector<T> data;

    TensorT() = default;
    TensorT(std::vector<int> s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
        validate_shape("Tensor");
        require(static_cast<std::int64_t>(data.size()) == shape_numel(shape),
                "Tensor: data length " + std::to_string(data.size()) + " does not match shape " + shape_str(shape));
    }

    static TensorT zeros(std::vector<int> s) {
        TensorT t;
        t.shape = std::move(s);
        t.validate_shape("Tensor::zeros");
        t.data.assign(static_cast<std::size_t>(shape_numel(t.shape)), T(0));
        return t;
    }

    void validate_shape(const char* who) const {
        require(!shape.empty() && shape.size() <= 4, std::string(who) + ": rank must be 1..4, got " + shape_str(shape));
        for (int e : shape) require(e > 0, std::string(who) + ": extents must be positive, got " + shape_str(shape));
    }

    std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }
    int rank() const { return static_cast<int>(shape.size()); }

    T& at2(int i, int j) { return data[static_cast<std::size_t>(i) * shape[1] + j]; }
    T at2(int i, int j) const { return data[static_cast<std::size_t>(i) * shape[1] + j]; }

    T& at4(int n, int c, int h, int w) {
        return data[((static_cast<std::size_t>(n) * shape[1] + c) * shape[2] + h) * shape[3] + w];
    }
    T at4(int n, int c, int h, int w) const {
        return data[((static_cast<std::size_t>(n) * shape[1] + c) * shape[2] + h) * shape[3] + w];
    }

    bool same_shape(const TensorT& o) const { return shape == o.shape; }

    bool all_finite() const {
        for (T v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }
};

using Tensor = TensorT<float>;

template <class T>
inline void check_finite(const TensorT<T>& t, const std::string& ctx) {
    require(t.all_finite(), ctx + ": tensor contains non-finite values");
}

template <class T>
inline TensorT<T> reshape_copy(const TensorT<T>& t, std::vector<int> new_shape) {
    require(shape_numel(new_shape) == t.numel(),
            "reshape: element count mismatch " + shape_str(t.shape) + " -> " + shape_str(new_shape));
    TensorT<T> out;
    out.shape = std::move(new_shape);
    out.data = t.data;
    return out;
}

} // namespace slkd
