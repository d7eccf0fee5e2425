#include "chaosnoma/weights_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace chaosnoma {

namespace {

constexpr char kMagic[4] = {'D', 'N', 'C', 'W'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>((v >> 8) & 0xFF),
                        static_cast<unsigned char>((v >> 16) & 0xFF),
                        static_cast<unsigned char>((v >> 24) & 0xFF)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("weight file: truncated");
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(os, bits);
}

float get_f32(std::istream& is) {
  const std::uint32_t bits = get_u32(is);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

void save_weights(const std::string& path,
                  const std::vector<ParamRef<float>>& tensors) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("weight file: cannot open for writing: " + path);
  os.write(kMagic, 4);
  put_u32(os, kWeightFormatVersion);
  put_u32(os, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& ref : tensors) {
    if (ref.value == nullptr)
      throw std::invalid_argument("save_weights: null tensor reference");
    put_u32(os, static_cast<std::uint32_t>(ref.name.size()));
    os.write(ref.name.data(), static_cast<std::streamsize>(ref.name.size()));
    const Tensor<float>& t = *ref.value;
    put_u32(os, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.dims) put_u32(os, static_cast<std::uint32_t>(d));
    for (float v : t.data) put_f32(os, v);
  }
  if (!os) throw std::runtime_error("weight file: write failed: " + path);
}

std::vector<NamedTensor> load_weights(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("weight file: cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("weight file: bad magic: " + path);
  const std::uint32_t version = get_u32(is);
  if (version != kWeightFormatVersion)
    throw std::runtime_error("weight file: unsupported version");
  const std::uint32_t count = get_u32(is);
  std::vector<NamedTensor> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = get_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw std::runtime_error("weight file: truncated name");
    const std::uint32_t rank = get_u32(is);
    std::vector<std::size_t> dims(rank);
    for (auto& d : dims) d = get_u32(is);
    Tensor<float> t(dims);
    for (auto& v : t.data) v = get_f32(is);
    out.push_back({std::move(name), std::move(t)});
  }
  return out;
}

void assign_weights(const std::vector<NamedTensor>& loaded,
                    const std::vector<ParamRef<float>>& refs) {
  for (const auto& ref : refs) {
    const NamedTensor* found = nullptr;
    for (const auto& nt : loaded)
      if (nt.name == ref.name) {
        found = &nt;
        break;
      }
    if (found == nullptr)
      throw std::runtime_error("weight file: missing tensor " + ref.name);
    if (!(found->tensor.dims == ref.value->dims))
      throw std::runtime_error("weight file: shape mismatch for " + ref.name);
    ref.value->data = found->tensor.data;
  }
}

}  // namespace chaosnoma
