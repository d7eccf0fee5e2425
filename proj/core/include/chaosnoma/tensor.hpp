#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace chaosnoma {

// Dense row-major tensor.  The scalar type is templated so the same network
// code runs in 32-bit for production and in 64-bit for gradient checking.
template <typename T>
struct Tensor {
  std::vector<std::size_t> dims;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape)
      : dims(std::move(shape)), data(product(dims), T{}) {}

  static std::size_t product(const std::vector<std::size_t>& d) {
    std::size_t n = 1;
    for (std::size_t v : d) n *= v;
    return n;
  }

  std::size_t numel() const { return data.size(); }
  std::size_t rank() const { return dims.size(); }
  std::size_t dim(std::size_t i) const { return dims[i]; }
  T* ptr() { return data.data(); }
  const T* ptr() const { return data.data(); }
  void zero() { std::fill(data.begin(), data.end(), T{}); }
  bool same_shape(const Tensor& o) const { return dims == o.dims; }
};

// A named view of one parameter tensor and its gradient buffer.  Layers hand
// these out so the optimizer and the weight store never need to know layer
// internals.  grad is null for non-learnable state (running statistics).
template <typename T>
struct ParamRef {
  std::string name;
  Tensor<T>* value = nullptr;
  Tensor<T>* grad = nullptr;
};

}  // namespace chaosnoma
