#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chaosnoma/rng.hpp"
#include "chaosnoma/tensor.hpp"

namespace chaosnoma {

// Layers follow one protocol: forward(input[, train]) caches what backward
// needs; backward(grad_out) accumulates parameter gradients and returns the
// gradient with respect to the input.  Calling backward without a recorded
// forward throws std::logic_error.  Layers are single-writer during training;
// inference on frozen parameters is safe for concurrent readers only through
// separate layer instances (caches are mutable state).

// 1-D valid convolution, stride 1.  Input B x C_in x L, output
// B x C_out x (L - k + 1).  Weight C_out x C_in x k, bias C_out.
template <typename T>
class Conv1d {
 public:
  Conv1d(std::size_t in_ch, std::size_t out_ch, std::size_t ksize,
         RngStream& init_rng);
  Tensor<T> forward(const Tensor<T>& input);
  Tensor<T> backward(const Tensor<T>& grad_out);
  std::vector<ParamRef<T>> parameters(const std::string& prefix);
  std::size_t param_count() const;
  std::size_t in_channels() const { return in_ch_; }
  std::size_t out_channels() const { return out_ch_; }
  std::size_t kernel_size() const { return ksize_; }

 private:
  std::size_t in_ch_, out_ch_, ksize_;
  Tensor<T> weight_, bias_, grad_weight_, grad_bias_;
  Tensor<T> input_cache_;
  bool has_forward_ = false;
};

// Per-channel batch normalization over B x C x L activations.  Train mode
// normalizes by batch statistics and updates running statistics; infer mode
// uses the stored running statistics.
template <typename T>
class BatchNorm1d {
 public:
  explicit BatchNorm1d(std::size_t channels);
  Tensor<T> forward(const Tensor<T>& input, bool train);
  Tensor<T> backward(const Tensor<T>& grad_out);
  std::vector<ParamRef<T>> parameters(const std::string& prefix);
  std::vector<ParamRef<T>> buffers(const std::string& prefix);
  std::size_t param_count() const { return 2 * channels_; }

  static constexpr double kEps = 1e-5;
  static constexpr double kMomentum = 0.1;

 private:
  std::size_t channels_;
  Tensor<T> scale_, shift_, grad_scale_, grad_shift_;
  Tensor<T> running_mean_, running_var_;
  Tensor<T> xhat_cache_;
  std::vector<double> inv_std_cache_;
  bool has_forward_ = false;
};

// Elementwise max(0, x) on any shape.
template <typename T>
class Relu {
 public:
  Tensor<T> forward(const Tensor<T>& input);
  Tensor<T> backward(const Tensor<T>& grad_out);

 private:
  Tensor<T> input_cache_;
  bool has_forward_ = false;
};

// Scaled dot-product multi-head self-attention over the channel tokens.
// Input B x n x L: the n channels are the tokens, each with L features.
// Per head i: Q = X W_q[i], K = X W_k[i], V = X W_v[i] (all n x d), attention
// softmax(Q K^T / sqrt(d)) V; heads concatenate to n x (h d) and project back
// through W_o to n x L.  No bias terms.
template <typename T>
class MultiHeadSelfAttention {
 public:
  MultiHeadSelfAttention(std::size_t tokens, std::size_t length,
                         std::size_t heads, std::size_t head_dim,
                         RngStream& init_rng);
  Tensor<T> forward(const Tensor<T>& input);
  Tensor<T> backward(const Tensor<T>& grad_out);
  std::vector<ParamRef<T>> parameters(const std::string& prefix);
  std::size_t param_count() const;
  // Attention rows for the last forward batch, laid out h x B x n x n.
  const Tensor<T>& attention_cache() const { return attn_; }

 private:
  std::size_t tokens_, length_, heads_, head_dim_;
  Tensor<T> wq_, wk_, wv_;  // h x L x d each
  Tensor<T> wo_;            // (h d) x L
  Tensor<T> grad_wq_, grad_wk_, grad_wv_, grad_wo_;
  Tensor<T> input_cache_;              // B x n x L
  Tensor<T> q_, k_, v_;                // h x B x n x d
  Tensor<T> attn_;                     // h x B x n x n
  Tensor<T> concat_;                   // (B n) x (h d)
  bool has_forward_ = false;
};

// Per-channel temporal mean: B x C x L -> B x C.
template <typename T>
class GlobalAveragePool {
 public:
  Tensor<T> forward(const Tensor<T>& input);
  Tensor<T> backward(const Tensor<T>& grad_out);

 private:
  std::vector<std::size_t> input_dims_;
  bool has_forward_ = false;
};

// Fully connected layer: B x F -> B x O, weight O x F, bias O.
template <typename T>
class Linear {
 public:
  Linear(std::size_t in_features, std::size_t out_features, RngStream& init_rng);
  Tensor<T> forward(const Tensor<T>& input);
  Tensor<T> backward(const Tensor<T>& grad_out);
  std::vector<ParamRef<T>> parameters(const std::string& prefix);
  std::size_t param_count() const { return out_f_ * in_f_ + out_f_; }

 private:
  std::size_t in_f_, out_f_;
  Tensor<T> weight_, bias_, grad_weight_, grad_bias_;
  Tensor<T> input_cache_;
  bool has_forward_ = false;
};

// Softmax over two logits plus binary cross-entropy, mean over the batch.
// Probabilities are clamped to [1e-12, 1 - 1e-12] inside the log only; the
// gradient uses the standard unclamped identity (softmax - one_hot) / B.
template <typename T>
class SoftmaxCrossEntropy {
 public:
  // logits: B x 2; labels: B values in {0, 1}.  Returns mean loss.
  double forward(const Tensor<T>& logits, const std::vector<std::uint8_t>& labels);
  Tensor<T> backward();  // gradient w.r.t. logits
  const Tensor<T>& probabilities() const { return probs_; }

 private:
  Tensor<T> probs_;
  std::vector<std::uint8_t> labels_;
  bool has_forward_ = false;
};

// Softmax of a single pair of logits, evaluated in 64-bit.
void softmax2(double logit0, double logit1, double& p0, double& p1);

// Adam with bias correction over a fixed parameter registry.  Moments are
// kept in 64-bit regardless of the parameter scalar type.
template <typename T>
class Adam {
 public:
  explicit Adam(std::vector<ParamRef<T>> params, double lr = 1e-3,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step();
  void zero_grad();
  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }
  std::size_t step_count() const { return t_; }

 private:
  std::vector<ParamRef<T>> params_;
  std::vector<std::vector<double>> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
};

// Reduce-on-plateau: multiplies the learning rate by `factor` after
// `patience` consecutive epochs whose validation loss fails to improve on the
// best seen by more than `rel_threshold` relatively.
class PlateauScheduler {
 public:
  explicit PlateauScheduler(double factor = 0.1, int patience = 3,
                            double rel_threshold = 1e-4)
      : factor_(factor), patience_(patience), rel_threshold_(rel_threshold) {}

  // Feed one epoch's validation loss; returns the learning rate to use next.
  double observe(double val_loss, double current_lr);

 private:
  double factor_;
  int patience_;
  double rel_threshold_;
  double best_ = 0.0;
  bool has_best_ = false;
  int stale_ = 0;
};

}  // namespace chaosnoma
