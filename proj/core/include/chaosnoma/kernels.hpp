#pragma once

#include <cstddef>

namespace chaosnoma {

// Small dense matrix kernels, row-major, C = A * B variants.  All kernels are
// written with the vector-unit in mind: the inner loop is always a contiguous
// multiply-accumulate sweep over the output row, which auto-vectorizes
// without any reordering of per-element accumulation (results stay bit-exact
// for a given build regardless of call site or thread count).

// C[M x N] (+)= A[M x K] * B[K x N]
template <typename T>
void mm_nn(const T* a, const T* b, T* c, std::size_t m, std::size_t k,
           std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c + i * n;
    if (!accumulate)
      for (std::size_t j = 0; j < n; ++j) crow[j] = T{};
    const T* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const T s = arow[p];
      const T* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += s * brow[j];
    }
  }
}

// C[K x N] (+)= A^T * B where A is [M x K] and B is [M x N]
template <typename T>
void mm_tn(const T* a, const T* b, T* c, std::size_t m, std::size_t k,
           std::size_t n, bool accumulate) {
  if (!accumulate)
    for (std::size_t i = 0; i < k * n; ++i) c[i] = T{};
  for (std::size_t p = 0; p < m; ++p) {
    const T* arow = a + p * k;
    const T* brow = b + p * n;
    for (std::size_t i = 0; i < k; ++i) {
      const T s = arow[i];
      T* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += s * brow[j];
    }
  }
}

// dst[N x M] = transpose of src[M x N]
template <typename T>
void transpose(const T* src, T* dst, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) dst[j * m + i] = src[i * n + j];
}

}  // namespace chaosnoma
