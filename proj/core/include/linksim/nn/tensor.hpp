#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "linksim/types.hpp"

namespace linksim::nn {

// batch x channels x length, row-major with length contiguous. float is the
// training/inference scalar; tests instantiate double for finite-difference
// oracles.
template <typename T>
struct Tensor3 {
    int batch = 0;
    int channels = 0;
    int length = 0;
    std::vector<T> data;

    Tensor3() = default;
    Tensor3(int b, int c, int l)
        : batch(b), channels(c), length(l),
          data(static_cast<std::size_t>(b) * c * l, T(0)) {}

    std::size_t size() const { return data.size(); }

    T& at(int b, int c, int l) {
        return data[(static_cast<std::size_t>(b) * channels + c) * length + l];
    }
    T at(int b, int c, int l) const {
        return data[(static_cast<std::size_t>(b) * channels + c) * length + l];
    }
    T* row(int b, int c) {
        return data.data() + (static_cast<std::size_t>(b) * channels + c) * length;
    }
    const T* row(int b, int c) const {
        return data.data() + (static_cast<std::size_t>(b) * channels + c) * length;
    }

    bool same_shape(const Tensor3& o) const {
        return batch == o.batch && channels == o.channels && length == o.length;
    }
    std::string shape_str() const {
        return "(" + std::to_string(batch) + "," + std::to_string(channels) + "," +
               std::to_string(length) + ")";
    }
    bool all_finite() const {
        for (const T v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }
};

using Tensor3f = Tensor3<float>;

// Mutable view of one parameter array and its gradient, for the optimizer
// and the checkpoint writer.
template <typename T>
struct ParamView {
    T* value = nullptr;
    T* grad = nullptr;
    std::size_t n = 0;
};

} // namespace linksim::nn
