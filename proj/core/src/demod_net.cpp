#include "chaosnoma/demod_net.hpp"

#include <stdexcept>

namespace chaosnoma {

namespace {

std::size_t conv_len(std::size_t len, std::size_t k) {
  if (len < k)
    throw std::invalid_argument("network geometry: block shorter than kernel");
  return len - k + 1;
}

void check_beta(std::size_t beta, const Hyperparams& hp) {
  // The two valid convolutions remove (k1 - 1) + (k2 - 1) samples; with the
  // default kernels the attention length is beta - 7, so beta >= 8.
  const std::size_t shrink = (hp.kernel1 - 1) + (hp.kernel2 - 1);
  if (beta < shrink + 1)
    throw std::invalid_argument("network geometry: beta too small for kernels");
}

}  // namespace

template <typename T>
DemodNet<T>::DemodNet(std::size_t beta, const Hyperparams& hp,
                      std::uint64_t init_seed)
    : beta_((check_beta(beta, hp), beta)),
      hp_(hp),
      len1_(conv_len(beta, hp.kernel1)),
      len2_(conv_len(len1_, hp.kernel2)),
      init_rng_(seed_stream(init_seed, stream_id(stream_purpose::kInit, 0))),
      conv1_(2, hp.filters, hp.kernel1, init_rng_),
      bn1_(hp.filters),
      conv2_(hp.filters, hp.filters, hp.kernel2, init_rng_),
      bn2_(hp.filters),
      mhsa_(hp.filters, len2_, hp.heads, hp.head_dim, init_rng_),
      gap_(),
      fc1_(hp.filters, hp.fc_hidden, init_rng_),
      fc2_(hp.fc_hidden, 2, init_rng_) {}

template <typename T>
Tensor<T> DemodNet<T>::forward(const Tensor<T>& input, bool train) {
  if (input.rank() != 3 || input.dim(1) != 2 || input.dim(2) != beta_)
    throw std::invalid_argument("DemodNet: input must be B x 2 x beta");
  Tensor<T> x = conv1_.forward(input);
  x = bn1_.forward(x, train);
  x = relu1_.forward(x);
  x = conv2_.forward(x);
  x = bn2_.forward(x, train);
  x = relu2_.forward(x);
  x = mhsa_.forward(x);
  x = gap_.forward(x);
  x = fc1_.forward(x);
  x = relu3_.forward(x);
  x = fc2_.forward(x);
  has_forward_ = train;  // backward only makes sense after a training pass
  return x;
}

template <typename T>
Tensor<T> DemodNet<T>::backward(const Tensor<T>& grad_logits) {
  if (!has_forward_)
    throw std::logic_error("DemodNet: backward before training forward");
  Tensor<T> g = fc2_.backward(grad_logits);
  g = relu3_.backward(g);
  g = fc1_.backward(g);
  g = gap_.backward(g);
  g = mhsa_.backward(g);
  g = relu2_.backward(g);
  g = bn2_.backward(g);
  g = conv2_.backward(g);
  g = relu1_.backward(g);
  g = bn1_.backward(g);
  g = conv1_.backward(g);
  return g;
}

template <typename T>
std::vector<ParamRef<T>> DemodNet<T>::parameters() {
  std::vector<ParamRef<T>> out;
  for (auto& p : conv1_.parameters("conv1")) out.push_back(p);
  for (auto& p : bn1_.parameters("bn1")) out.push_back(p);
  for (auto& p : conv2_.parameters("conv2")) out.push_back(p);
  for (auto& p : bn2_.parameters("bn2")) out.push_back(p);
  for (auto& p : mhsa_.parameters("mhsa")) out.push_back(p);
  for (auto& p : fc1_.parameters("fc1")) out.push_back(p);
  for (auto& p : fc2_.parameters("fc2")) out.push_back(p);
  return out;
}

template <typename T>
std::vector<ParamRef<T>> DemodNet<T>::buffers() {
  std::vector<ParamRef<T>> out;
  for (auto& p : bn1_.buffers("bn1")) out.push_back(p);
  for (auto& p : bn2_.buffers("bn2")) out.push_back(p);
  return out;
}

template <typename T>
std::vector<ParamRef<T>> DemodNet<T>::state() {
  std::vector<ParamRef<T>> out;
  for (auto& p : conv1_.parameters("conv1")) out.push_back(p);
  for (auto& p : bn1_.parameters("bn1")) out.push_back(p);
  for (auto& p : bn1_.buffers("bn1")) out.push_back(p);
  for (auto& p : conv2_.parameters("conv2")) out.push_back(p);
  for (auto& p : bn2_.parameters("bn2")) out.push_back(p);
  for (auto& p : bn2_.buffers("bn2")) out.push_back(p);
  for (auto& p : mhsa_.parameters("mhsa")) out.push_back(p);
  for (auto& p : fc1_.parameters("fc1")) out.push_back(p);
  for (auto& p : fc2_.parameters("fc2")) out.push_back(p);
  return out;
}

template <typename T>
std::vector<std::pair<std::string, std::size_t>> DemodNet<T>::parameter_counts() {
  return {{"conv1", conv1_.param_count()}, {"bn1", bn1_.param_count()},
          {"conv2", conv2_.param_count()}, {"bn2", bn2_.param_count()},
          {"mhsa", mhsa_.param_count()},   {"fc1", fc1_.param_count()},
          {"fc2", fc2_.param_count()}};
}

template <typename T>
std::vector<std::pair<std::string, std::vector<std::size_t>>>
DemodNet<T>::shape_chain(std::size_t beta, const Hyperparams& hp) {
  check_beta(beta, hp);
  const std::size_t n = hp.filters;
  const std::size_t l1 = conv_len(beta, hp.kernel1);
  const std::size_t l2 = conv_len(l1, hp.kernel2);
  return {{"input", {2, beta}}, {"conv1", {n, l1}},  {"bn1", {n, l1}},
          {"relu1", {n, l1}},   {"conv2", {n, l2}},  {"bn2", {n, l2}},
          {"relu2", {n, l2}},   {"mhsa", {n, l2}},   {"gap", {n}},
          {"fc1", {hp.fc_hidden}}, {"relu3", {hp.fc_hidden}},
          {"fc2", {2}},         {"softmax", {2}}};
}

template class DemodNet<float>;
template class DemodNet<double>;

}  // namespace chaosnoma
