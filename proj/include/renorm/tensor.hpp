#pragma once

// Dense component arrays of rank-r tensors over an n-dimensional chart,
// stored row-major with all indices lowered unless stated otherwise.

#include "renorm/jet.hpp"

#include <cstddef>
#include <vector>

namespace renorm {

template <typename T>
class BasicTensor {
public:
    BasicTensor() = default;
    BasicTensor(int n, int rank, const T& fill) : n_(n), rank_(rank) {
        std::size_t size = 1;
        for (int r = 0; r < rank; ++r) size *= static_cast<std::size_t>(n);
        c_.assign(size, fill);
    }

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] int rank() const { return rank_; }
    [[nodiscard]] std::size_t size() const { return c_.size(); }

    T& operator[](std::size_t flat) { return c_[flat]; }
    const T& operator[](std::size_t flat) const { return c_[flat]; }

    template <typename... I>
    T& operator()(I... idx) {
        return c_[flat(idx...)];
    }
    template <typename... I>
    const T& operator()(I... idx) const {
        return c_[flat(idx...)];
    }

    template <typename... I>
    [[nodiscard]] std::size_t flat(I... idx) const {
        std::size_t f = 0;
        ((f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
        return f;
    }

    [[nodiscard]] std::vector<T>& data() { return c_; }
    [[nodiscard]] const std::vector<T>& data() const { return c_; }

private:
    int n_ = 0;
    int rank_ = 0;
    std::vector<T> c_;
};

using Tensor = BasicTensor<double>;
using JetTensor = BasicTensor<Jet>;

/// Value (order-0 part) of every component.
inline Tensor values(const JetTensor& t) {
    Tensor out(t.dim(), t.rank(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].value();
    return out;
}

}  // namespace renorm
