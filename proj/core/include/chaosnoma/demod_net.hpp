#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chaosnoma/nn.hpp"

namespace chaosnoma {

// Architecture knobs.  Defaults give the production network: 32 conv filters
// (which are also the attention tokens), kernels 3 and 6, 8 heads of width
// 64, and a 64-unit hidden classifier layer.
struct Hyperparams {
  std::size_t filters = 32;
  std::size_t kernel1 = 3;
  std::size_t kernel2 = 6;
  std::size_t heads = 8;
  std::size_t head_dim = 64;
  std::size_t fc_hidden = 64;
};

// The full demodulator network:
//   input 2 x beta
//   -> conv1 (k=3)  -> n x (beta-2) -> BN -> ReLU
//   -> conv2 (k=6)  -> n x (beta-7) -> BN -> ReLU
//   -> multi-head self-attention over the n channel tokens -> n x (beta-7)
//   -> global average pool -> n
//   -> FC n->64 -> ReLU -> FC 64->2 logits
// Softmax and the loss live outside (SoftmaxCrossEntropy / softmax2).
template <typename T>
class DemodNet {
 public:
  DemodNet(std::size_t beta, const Hyperparams& hp, std::uint64_t init_seed);

  // input B x 2 x beta -> logits B x 2.  Train mode uses batch statistics in
  // the BN layers and records caches for backward.
  Tensor<T> forward(const Tensor<T>& input, bool train);
  // grad_logits B x 2 -> gradient w.r.t. the input, accumulating parameter
  // gradients along the way.
  Tensor<T> backward(const Tensor<T>& grad_logits);

  std::vector<ParamRef<T>> parameters();
  std::vector<ParamRef<T>> buffers();
  // parameters + buffers in the canonical persistence order.
  std::vector<ParamRef<T>> state();

  // Learnable-value count per layer group, in network order.
  std::vector<std::pair<std::string, std::size_t>> parameter_counts();

  // Output shape after every stage for the given geometry.
  static std::vector<std::pair<std::string, std::vector<std::size_t>>>
  shape_chain(std::size_t beta, const Hyperparams& hp);

  std::size_t beta() const { return beta_; }
  const Hyperparams& hyperparams() const { return hp_; }
  std::size_t attention_length() const { return len2_; }
  const MultiHeadSelfAttention<T>& attention() const { return mhsa_; }

 private:
  std::size_t beta_;
  Hyperparams hp_;
  std::size_t len1_, len2_;
  RngStream init_rng_;  // declared before the layers: they draw from it in order
  Conv1d<T> conv1_;
  BatchNorm1d<T> bn1_;
  Relu<T> relu1_;
  Conv1d<T> conv2_;
  BatchNorm1d<T> bn2_;
  Relu<T> relu2_;
  MultiHeadSelfAttention<T> mhsa_;
  GlobalAveragePool<T> gap_;
  Linear<T> fc1_;
  Relu<T> relu3_;
  Linear<T> fc2_;
  bool has_forward_ = false;
};

}  // namespace chaosnoma
