#pragma once

#include <string>
#include <vector>

#include "chaosnoma/tensor.hpp"

namespace chaosnoma {

// Binary tensor container, little-endian: magic "DNCW", format version (u32),
// tensor count (u32), then per tensor: name length (u32) + UTF-8 name, rank
// (u32), dims (u32 each), payload as IEEE-754 binary32.  Round-trips are
// bit-exact.

inline constexpr std::uint32_t kWeightFormatVersion = 1;

struct NamedTensor {
  std::string name;
  Tensor<float> tensor;
};

void save_weights(const std::string& path,
                  const std::vector<ParamRef<float>>& tensors);

std::vector<NamedTensor> load_weights(const std::string& path);

// Copies loaded tensors into the referenced ones, matched by name.  Throws if
// a referenced name is missing or shaped differently.
void assign_weights(const std::vector<NamedTensor>& loaded,
                    const std::vector<ParamRef<float>>& refs);

}  // namespace chaosnoma
