#include "chaosnoma/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chaosnoma/kernels.hpp"

namespace chaosnoma {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_forward(bool has_forward) {
  if (!has_forward) throw std::logic_error("backward called before forward");
}

template <typename T>
void fill_gaussian(Tensor<T>& t, double stddev, RngStream& rng) {
  for (auto& v : t.data) v = static_cast<T>(stddev * rng.normal());
}

template <typename T>
void fill_uniform_sym(Tensor<T>& t, double limit, RngStream& rng) {
  for (auto& v : t.data)
    v = static_cast<T>(limit * (2.0 * rng.uniform() - 1.0));
}

}  // namespace

// ---------------------------------------------------------------- Conv1d ---

template <typename T>
Conv1d<T>::Conv1d(std::size_t in_ch, std::size_t out_ch, std::size_t ksize,
                  RngStream& init_rng)
    : in_ch_(in_ch), out_ch_(out_ch), ksize_(ksize) {
  require(in_ch > 0 && out_ch > 0 && ksize > 0, "Conv1d: bad construction");
  weight_ = Tensor<T>({out_ch_, in_ch_, ksize_});
  bias_ = Tensor<T>({out_ch_});
  grad_weight_ = Tensor<T>({out_ch_, in_ch_, ksize_});
  grad_bias_ = Tensor<T>({out_ch_});
  const double fan_in = static_cast<double>(in_ch_ * ksize_);
  fill_gaussian(weight_, std::sqrt(2.0 / fan_in), init_rng);
}

template <typename T>
Tensor<T> Conv1d<T>::forward(const Tensor<T>& input) {
  require(input.rank() == 3 && input.dim(1) == in_ch_,
          "Conv1d: input must be B x C_in x L");
  const std::size_t batch = input.dim(0);
  const std::size_t len_in = input.dim(2);
  require(len_in >= ksize_, "Conv1d: input shorter than kernel");
  const std::size_t len_out = len_in - ksize_ + 1;

  input_cache_ = input;
  has_forward_ = true;

  Tensor<T> out({batch, out_ch_, len_out});
  for (std::size_t b = 0; b < batch; ++b) {
    const T* in_b = input.ptr() + b * in_ch_ * len_in;
    T* out_b = out.ptr() + b * out_ch_ * len_out;
    for (std::size_t oc = 0; oc < out_ch_; ++oc) {
      T* orow = out_b + oc * len_out;
      const T bv = bias_.data[oc];
      for (std::size_t l = 0; l < len_out; ++l) orow[l] = bv;
      for (std::size_t ic = 0; ic < in_ch_; ++ic) {
        const T* irow = in_b + ic * len_in;
        const T* wrow = weight_.ptr() + (oc * in_ch_ + ic) * ksize_;
        for (std::size_t kk = 0; kk < ksize_; ++kk) {
          const T w = wrow[kk];
          const T* shifted = irow + kk;
          for (std::size_t l = 0; l < len_out; ++l) orow[l] += w * shifted[l];
        }
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> Conv1d<T>::backward(const Tensor<T>& grad_out) {
  require_forward(has_forward_);
  const std::size_t batch = input_cache_.dim(0);
  const std::size_t len_in = input_cache_.dim(2);
  const std::size_t len_out = len_in - ksize_ + 1;
  require(grad_out.rank() == 3 && grad_out.dim(0) == batch &&
              grad_out.dim(1) == out_ch_ && grad_out.dim(2) == len_out,
          "Conv1d: gradient shape mismatch");

  const std::size_t patch = in_ch_ * ksize_;
  const std::size_t rows = batch * len_out;

  // Unfold the cached input into (B L_out) x (C_in k) patches and transpose
  // grad_out into (B L_out) x C_out so both parameter and input gradients
  // become single dense products.
  std::vector<T> x_col(rows * patch);
  std::vector<T> dout_t(rows * out_ch_);
  for (std::size_t b = 0; b < batch; ++b) {
    const T* in_b = input_cache_.ptr() + b * in_ch_ * len_in;
    const T* go_b = grad_out.ptr() + b * out_ch_ * len_out;
    for (std::size_t l = 0; l < len_out; ++l) {
      T* xrow = x_col.data() + (b * len_out + l) * patch;
      for (std::size_t ic = 0; ic < in_ch_; ++ic)
        for (std::size_t kk = 0; kk < ksize_; ++kk)
          xrow[ic * ksize_ + kk] = in_b[ic * len_in + l + kk];
      T* drow = dout_t.data() + (b * len_out + l) * out_ch_;
      for (std::size_t oc = 0; oc < out_ch_; ++oc)
        drow[oc] = go_b[oc * len_out + l];
    }
  }

  mm_tn(dout_t.data(), x_col.data(), grad_weight_.ptr(), rows, out_ch_, patch,
        /*accumulate=*/true);
  for (std::size_t r = 0; r < rows; ++r) {
    const T* drow = dout_t.data() + r * out_ch_;
    for (std::size_t oc = 0; oc < out_ch_; ++oc)
      grad_bias_.data[oc] += drow[oc];
  }

  std::vector<T> dx_col(rows * patch);
  mm_nn(dout_t.data(), weight_.ptr(), dx_col.data(), rows, out_ch_, patch,
        /*accumulate=*/false);

  Tensor<T> grad_in({batch, in_ch_, len_in});
  for (std::size_t b = 0; b < batch; ++b) {
    T* gi_b = grad_in.ptr() + b * in_ch_ * len_in;
    for (std::size_t l = 0; l < len_out; ++l) {
      const T* xrow = dx_col.data() + (b * len_out + l) * patch;
      for (std::size_t ic = 0; ic < in_ch_; ++ic)
        for (std::size_t kk = 0; kk < ksize_; ++kk)
          gi_b[ic * len_in + l + kk] += xrow[ic * ksize_ + kk];
    }
  }
  return grad_in;
}

template <typename T>
std::vector<ParamRef<T>> Conv1d<T>::parameters(const std::string& prefix) {
  return {{prefix + ".weight", &weight_, &grad_weight_},
          {prefix + ".bias", &bias_, &grad_bias_}};
}

template <typename T>
std::size_t Conv1d<T>::param_count() const {
  return weight_.numel() + bias_.numel();
}

// ----------------------------------------------------------- BatchNorm1d ---

template <typename T>
BatchNorm1d<T>::BatchNorm1d(std::size_t channels) : channels_(channels) {
  require(channels > 0, "BatchNorm1d: bad channel count");
  scale_ = Tensor<T>({channels_});
  shift_ = Tensor<T>({channels_});
  grad_scale_ = Tensor<T>({channels_});
  grad_shift_ = Tensor<T>({channels_});
  running_mean_ = Tensor<T>({channels_});
  running_var_ = Tensor<T>({channels_});
  std::fill(scale_.data.begin(), scale_.data.end(), T{1});
  std::fill(running_var_.data.begin(), running_var_.data.end(), T{1});
}

template <typename T>
Tensor<T> BatchNorm1d<T>::forward(const Tensor<T>& input, bool train) {
  require(input.rank() == 3 && input.dim(1) == channels_,
          "BatchNorm1d: input must be B x C x L");
  const std::size_t batch = input.dim(0);
  const std::size_t len = input.dim(2);
  const std::size_t count = batch * len;
  Tensor<T> out(input.dims);

  if (!train) {
    has_forward_ = false;  // backward is only defined after a train forward
    for (std::size_t c = 0; c < channels_; ++c) {
      const double inv =
          1.0 / std::sqrt(static_cast<double>(running_var_.data[c]) + kEps);
      const double a = static_cast<double>(scale_.data[c]) * inv;
      const double d = static_cast<double>(shift_.data[c]) -
                       a * static_cast<double>(running_mean_.data[c]);
      for (std::size_t b = 0; b < batch; ++b) {
        const T* irow = input.ptr() + (b * channels_ + c) * len;
        T* orow = out.ptr() + (b * channels_ + c) * len;
        for (std::size_t l = 0; l < len; ++l)
          orow[l] = static_cast<T>(a * static_cast<double>(irow[l]) + d);
      }
    }
    return out;
  }

  require(count >= 2, "BatchNorm1d: train mode needs at least 2 values per channel");
  xhat_cache_ = Tensor<T>(input.dims);
  inv_std_cache_.assign(channels_, 0.0);
  has_forward_ = true;

  for (std::size_t c = 0; c < channels_; ++c) {
    double sum = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const T* irow = input.ptr() + (b * channels_ + c) * len;
      for (std::size_t l = 0; l < len; ++l) sum += static_cast<double>(irow[l]);
    }
    const double mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const T* irow = input.ptr() + (b * channels_ + c) * len;
      for (std::size_t l = 0; l < len; ++l) {
        const double d = static_cast<double>(irow[l]) - mean;
        sq += d * d;
      }
    }
    const double var = sq / static_cast<double>(count);
    const double inv_std = 1.0 / std::sqrt(var + kEps);
    inv_std_cache_[c] = inv_std;

    const double g = static_cast<double>(scale_.data[c]);
    const double s = static_cast<double>(shift_.data[c]);
    for (std::size_t b = 0; b < batch; ++b) {
      const T* irow = input.ptr() + (b * channels_ + c) * len;
      T* xrow = xhat_cache_.ptr() + (b * channels_ + c) * len;
      T* orow = out.ptr() + (b * channels_ + c) * len;
      for (std::size_t l = 0; l < len; ++l) {
        const double xh = (static_cast<double>(irow[l]) - mean) * inv_std;
        xrow[l] = static_cast<T>(xh);
        orow[l] = static_cast<T>(g * xh + s);
      }
    }

    // Running statistics: biased variance normalizes the batch, the unbiased
    // estimate feeds the running buffer used at inference.
    const double unbiased =
        count > 1 ? var * static_cast<double>(count) /
                        static_cast<double>(count - 1)
                  : var;
    running_mean_.data[c] = static_cast<T>(
        (1.0 - kMomentum) * static_cast<double>(running_mean_.data[c]) +
        kMomentum * mean);
    running_var_.data[c] = static_cast<T>(
        (1.0 - kMomentum) * static_cast<double>(running_var_.data[c]) +
        kMomentum * unbiased);
  }
  return out;
}

template <typename T>
Tensor<T> BatchNorm1d<T>::backward(const Tensor<T>& grad_out) {
  require_forward(has_forward_);
  require(grad_out.same_shape(xhat_cache_), "BatchNorm1d: gradient shape mismatch");
  const std::size_t batch = grad_out.dim(0);
  const std::size_t len = grad_out.dim(2);
  const double count = static_cast<double>(batch * len);

  Tensor<T> grad_in(grad_out.dims);
  for (std::size_t c = 0; c < channels_; ++c) {
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const T* gy = grad_out.ptr() + (b * channels_ + c) * len;
      const T* xh = xhat_cache_.ptr() + (b * channels_ + c) * len;
      for (std::size_t l = 0; l < len; ++l) {
        sum_dy += static_cast<double>(gy[l]);
        sum_dy_xhat += static_cast<double>(gy[l]) * static_cast<double>(xh[l]);
      }
    }
    grad_shift_.data[c] += static_cast<T>(sum_dy);
    grad_scale_.data[c] += static_cast<T>(sum_dy_xhat);

    const double g = static_cast<double>(scale_.data[c]);
    const double inv_std = inv_std_cache_[c];
    const double mean_dy = sum_dy / count;
    const double mean_dy_xhat = sum_dy_xhat / count;
    for (std::size_t b = 0; b < batch; ++b) {
      const T* gy = grad_out.ptr() + (b * channels_ + c) * len;
      const T* xh = xhat_cache_.ptr() + (b * channels_ + c) * len;
      T* gi = grad_in.ptr() + (b * channels_ + c) * len;
      for (std::size_t l = 0; l < len; ++l) {
        const double dxhat = static_cast<double>(gy[l]) * g;
        const double centered = dxhat - g * mean_dy -
                                static_cast<double>(xh[l]) * g * mean_dy_xhat;
        gi[l] = static_cast<T>(inv_std * centered);
      }
    }
  }
  return grad_in;
}

template <typename T>
std::vector<ParamRef<T>> BatchNorm1d<T>::parameters(const std::string& prefix) {
  return {{prefix + ".scale", &scale_, &grad_scale_},
          {prefix + ".shift", &shift_, &grad_shift_}};
}

template <typename T>
std::vector<ParamRef<T>> BatchNorm1d<T>::buffers(const std::string& prefix) {
  return {{prefix + ".running_mean", &running_mean_, nullptr},
          {prefix + ".running_var", &running_var_, nullptr}};
}

// ------------------------------------------------------------------ Relu ---

template <typename T>
Tensor<T> Relu<T>::forward(const Tensor<T>& input) {
  input_cache_ = input;
  has_forward_ = true;
  Tensor<T> out(input.dims);
  for (std::size_t i = 0; i < input.numel(); ++i)
    out.data[i] = input.data[i] > T{} ? input.data[i] : T{};
  return out;
}

template <typename T>
Tensor<T> Relu<T>::backward(const Tensor<T>& grad_out) {
  require_forward(has_forward_);
  require(grad_out.same_shape(input_cache_), "Relu: gradient shape mismatch");
  Tensor<T> grad_in(grad_out.dims);
  for (std::size_t i = 0; i < grad_out.numel(); ++i)
    grad_in.data[i] = input_cache_.data[i] > T{} ? grad_out.data[i] : T{};
  return grad_in;
}

// ------------------------------------------------ MultiHeadSelfAttention ---

template <typename T>
MultiHeadSelfAttention<T>::MultiHeadSelfAttention(std::size_t tokens,
                                                 std::size_t length,
                                                 std::size_t heads,
                                                 std::size_t head_dim,
                                                 RngStream& init_rng)
    : tokens_(tokens), length_(length), heads_(heads), head_dim_(head_dim) {
  require(tokens > 0 && length > 0 && heads >= 1 && head_dim >= 1,
          "MultiHeadSelfAttention: bad construction");
  wq_ = Tensor<T>({heads_, length_, head_dim_});
  wk_ = Tensor<T>({heads_, length_, head_dim_});
  wv_ = Tensor<T>({heads_, length_, head_dim_});
  wo_ = Tensor<T>({heads_ * head_dim_, length_});
  grad_wq_ = Tensor<T>(wq_.dims);
  grad_wk_ = Tensor<T>(wk_.dims);
  grad_wv_ = Tensor<T>(wv_.dims);
  grad_wo_ = Tensor<T>(wo_.dims);
  // Symmetric uniform init scaled by the incoming feature count: projections
  // see L features, the output projection sees h*d.
  const double proj_limit = std::sqrt(1.0 / static_cast<double>(length_));
  const double out_limit =
      std::sqrt(1.0 / static_cast<double>(heads_ * head_dim_));
  fill_uniform_sym(wq_, proj_limit, init_rng);
  fill_uniform_sym(wk_, proj_limit, init_rng);
  fill_uniform_sym(wv_, proj_limit, init_rng);
  fill_uniform_sym(wo_, out_limit, init_rng);
}

template <typename T>
Tensor<T> MultiHeadSelfAttention<T>::forward(const Tensor<T>& input) {
  require(input.rank() == 3 && input.dim(1) == tokens_ &&
              input.dim(2) == length_,
          "MultiHeadSelfAttention: input must be B x n x L");
  const std::size_t batch = input.dim(0);
  const std::size_t n = tokens_;
  const std::size_t d = head_dim_;
  const std::size_t rows = batch * n;  // stacked tokens across the batch

  input_cache_ = input;
  q_ = Tensor<T>({heads_, batch, n, d});
  k_ = Tensor<T>({heads_, batch, n, d});
  v_ = Tensor<T>({heads_, batch, n, d});
  attn_ = Tensor<T>({heads_, batch, n, n});
  concat_ = Tensor<T>({rows, heads_ * d});
  has_forward_ = true;

  const T* xs = input.ptr();  // (B n) x L view
  for (std::size_t h = 0; h < heads_; ++h) {
    mm_nn(xs, wq_.ptr() + h * length_ * d, q_.ptr() + h * rows * d, rows,
          length_, d, false);
    mm_nn(xs, wk_.ptr() + h * length_ * d, k_.ptr() + h * rows * d, rows,
          length_, d, false);
    mm_nn(xs, wv_.ptr() + h * length_ * d, v_.ptr() + h * rows * d, rows,
          length_, d, false);
  }

  const T inv_sqrt_d = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<T> kt(d * n);
  std::vector<T> z(n * d);
  for (std::size_t h = 0; h < heads_; ++h) {
    for (std::size_t b = 0; b < batch; ++b) {
      const T* qb = q_.ptr() + (h * batch + b) * n * d;
      const T* kb = k_.ptr() + (h * batch + b) * n * d;
      const T* vb = v_.ptr() + (h * batch + b) * n * d;
      T* score = attn_.ptr() + (h * batch + b) * n * n;

      transpose(kb, kt.data(), n, d);
      mm_nn(qb, kt.data(), score, n, d, n, false);

      for (std::size_t i = 0; i < n; ++i) {
        T* row = score + i * n;
        T mx = row[0] * inv_sqrt_d;
        for (std::size_t j = 0; j < n; ++j) {
          row[j] *= inv_sqrt_d;
          mx = std::max(mx, row[j]);
        }
        T sum{};
        for (std::size_t j = 0; j < n; ++j) {
          row[j] = std::exp(row[j] - mx);
          sum += row[j];
        }
        const T inv_sum = T{1} / sum;
        for (std::size_t j = 0; j < n; ++j) row[j] *= inv_sum;
      }

      mm_nn(score, vb, z.data(), n, n, d, false);
      for (std::size_t i = 0; i < n; ++i) {
        T* dst = concat_.ptr() + (b * n + i) * heads_ * d + h * d;
        const T* src = z.data() + i * d;
        for (std::size_t j = 0; j < d; ++j) dst[j] = src[j];
      }
    }
  }

  Tensor<T> out({batch, n, length_});
  mm_nn(concat_.ptr(), wo_.ptr(), out.ptr(), rows, heads_ * d, length_, false);
  return out;
}

template <typename T>
Tensor<T> MultiHeadSelfAttention<T>::backward(const Tensor<T>& grad_out) {
  require_forward(has_forward_);
  require(grad_out.same_shape(input_cache_),
          "MultiHeadSelfAttention: gradient shape mismatch");
  const std::size_t batch = grad_out.dim(0);
  const std::size_t n = tokens_;
  const std::size_t d = head_dim_;
  const std::size_t hd = heads_ * d;
  const std::size_t rows = batch * n;
  const T inv_sqrt_d = static_cast<T>(1.0 / std::sqrt(static_cast<double>(d)));

  const T* dy = grad_out.ptr();  // (B n) x L view

  mm_tn(concat_.ptr(), dy, grad_wo_.ptr(), rows, hd, length_, true);

  std::vector<T> wo_t(length_ * hd);
  transpose(wo_.ptr(), wo_t.data(), hd, length_);
  std::vector<T> dconcat(rows * hd);
  mm_nn(dy, wo_t.data(), dconcat.data(), rows, length_, hd, false);

  Tensor<T> grad_in({batch, n, length_});
  std::vector<T> dqh(rows * d), dkh(rows * d), dvh(rows * d);
  std::vector<T> dz(n * d), vt(d * n), da(n * n), ds(n * n);
  std::vector<T> w_t(d * length_);

  for (std::size_t h = 0; h < heads_; ++h) {
    for (std::size_t b = 0; b < batch; ++b) {
      const T* qb = q_.ptr() + (h * batch + b) * n * d;
      const T* kb = k_.ptr() + (h * batch + b) * n * d;
      const T* vb = v_.ptr() + (h * batch + b) * n * d;
      const T* ab = attn_.ptr() + (h * batch + b) * n * n;

      for (std::size_t i = 0; i < n; ++i) {
        const T* src = dconcat.data() + (b * n + i) * hd + h * d;
        T* dst = dz.data() + i * d;
        for (std::size_t j = 0; j < d; ++j) dst[j] = src[j];
      }

      transpose(vb, vt.data(), n, d);
      mm_nn(dz.data(), vt.data(), da.data(), n, d, n, false);
      mm_tn(ab, dz.data(), dvh.data() + b * n * d, n, n, d, false);

      // Softmax rows: ds_ij = a_ij (da_ij - sum_k da_ik a_ik), then the
      // 1/sqrt(d) score scaling.
      for (std::size_t i = 0; i < n; ++i) {
        const T* arow = ab + i * n;
        const T* darow = da.data() + i * n;
        T dot{};
        for (std::size_t j = 0; j < n; ++j) dot += darow[j] * arow[j];
        T* dsrow = ds.data() + i * n;
        for (std::size_t j = 0; j < n; ++j)
          dsrow[j] = arow[j] * (darow[j] - dot) * inv_sqrt_d;
      }

      mm_nn(ds.data(), kb, dqh.data() + b * n * d, n, n, d, false);
      mm_tn(ds.data(), qb, dkh.data() + b * n * d, n, n, d, false);
    }

    const T* xs = input_cache_.ptr();
    mm_tn(xs, dqh.data(), grad_wq_.ptr() + h * length_ * d, rows, length_, d, true);
    mm_tn(xs, dkh.data(), grad_wk_.ptr() + h * length_ * d, rows, length_, d, true);
    mm_tn(xs, dvh.data(), grad_wv_.ptr() + h * length_ * d, rows, length_, d, true);

    transpose(wq_.ptr() + h * length_ * d, w_t.data(), length_, d);
    mm_nn(dqh.data(), w_t.data(), grad_in.ptr(), rows, d, length_, true);
    transpose(wk_.ptr() + h * length_ * d, w_t.data(), length_, d);
    mm_nn(dkh.data(), w_t.data(), grad_in.ptr(), rows, d, length_, true);
    transpose(wv_.ptr() + h * length_ * d, w_t.data(), length_, d);
    mm_nn(dvh.data(), w_t.data(), grad_in.ptr(), rows, d, length_, true);
  }
  return grad_in;
}

template <typename T>
std::vector<ParamRef<T>> MultiHeadSelfAttention<T>::parameters(
    const std::string& prefix) {
  return {{prefix + ".wq", &wq_, &grad_wq_},
          {prefix + ".wk", &wk_, &grad_wk_},
          {prefix + ".wv", &wv_, &grad_wv_},
          {prefix + ".wo", &wo_, &grad_wo_}};
}

template <typename T>
std::size_t MultiHeadSelfAttention<T>::param_count() const {
  return wq_.numel() + wk_.numel() + wv_.numel() + wo_.numel();
}

// ----------------------------------------------------- GlobalAveragePool ---

template <typename T>
Tensor<T> GlobalAveragePool<T>::forward(const Tensor<T>& input) {
  require(input.rank() == 3 && input.dim(2) >= 1,
          "GlobalAveragePool: input must be B x C x L");
  input_dims_ = input.dims;
  has_forward_ = true;
  const std::size_t batch = input.dim(0);
  const std::size_t ch = input.dim(1);
  const std::size_t len = input.dim(2);
  Tensor<T> out({batch, ch});
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t c = 0; c < ch; ++c) {
      const T* row = input.ptr() + (b * ch + c) * len;
      double acc = 0.0;
      for (std::size_t l = 0; l < len; ++l) acc += static_cast<double>(row[l]);
      out.data[b * ch + c] = static_cast<T>(acc / static_cast<double>(len));
    }
  return out;
}

template <typename T>
Tensor<T> GlobalAveragePool<T>::backward(const Tensor<T>& grad_out) {
  require_forward(has_forward_);
  const std::size_t batch = input_dims_[0];
  const std::size_t ch = input_dims_[1];
  const std::size_t len = input_dims_[2];
  require(grad_out.rank() == 2 && grad_out.dim(0) == batch &&
              grad_out.dim(1) == ch,
          "GlobalAveragePool: gradient shape mismatch");
  Tensor<T> grad_in(input_dims_);
  const T inv_len = static_cast<T>(1.0 / static_cast<double>(len));
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t c = 0; c < ch; ++c) {
      const T g = grad_out.data[b * ch + c] * inv_len;
      T* row = grad_in.ptr() + (b * ch + c) * len;
      for (std::size_t l = 0; l < len; ++l) row[l] = g;
    }
  return grad_in;
}

// ---------------------------------------------------------------- Linear ---

template <typename T>
Linear<T>::Linear(std::size_t in_features, std::size_t out_features,
                  RngStream& init_rng)
    : in_f_(in_features), out_f_(out_features) {
  require(in_features > 0 && out_features > 0, "Linear: bad construction");
  weight_ = Tensor<T>({out_f_, in_f_});
  bias_ = Tensor<T>({out_f_});
  grad_weight_ = Tensor<T>(weight_.dims);
  grad_bias_ = Tensor<T>(bias_.dims);
  fill_gaussian(weight_, std::sqrt(2.0 / static_cast<double>(in_f_)), init_rng);
}

template <typename T>
Tensor<T> Linear<T>::forward(const Tensor<T>& input) {
  require(input.rank() == 2 && input.dim(1) == in_f_,
          "Linear: input must be B x F");
  const std::size_t batch = input.dim(0);
  input_cache_ = input;
  has_forward_ = true;
  Tensor<T> out({batch, out_f_});
  for (std::size_t b = 0; b < batch; ++b) {
    const T* xrow = input.ptr() + b * in_f_;
    T* orow = out.ptr() + b * out_f_;
    for (std::size_t o = 0; o < out_f_; ++o) {
      const T* wrow = weight_.ptr() + o * in_f_;
      T acc = bias_.data[o];
      for (std::size_t f = 0; f < in_f_; ++f) acc += wrow[f] * xrow[f];
      orow[o] = acc;
    }
  }
  return out;
}

template <typename T>
Tensor<T> Linear<T>::backward(const Tensor<T>& grad_out) {
  require_forward(has_forward_);
  const std::size_t batch = input_cache_.dim(0);
  require(grad_out.rank() == 2 && grad_out.dim(0) == batch &&
              grad_out.dim(1) == out_f_,
          "Linear: gradient shape mismatch");
  mm_tn(grad_out.ptr(), input_cache_.ptr(), grad_weight_.ptr(), batch, out_f_,
        in_f_, true);
  for (std::size_t b = 0; b < batch; ++b) {
    const T* grow = grad_out.ptr() + b * out_f_;
    for (std::size_t o = 0; o < out_f_; ++o) grad_bias_.data[o] += grow[o];
  }
  Tensor<T> grad_in({batch, in_f_});
  mm_nn(grad_out.ptr(), weight_.ptr(), grad_in.ptr(), batch, out_f_, in_f_,
        false);
  return grad_in;
}

template <typename T>
std::vector<ParamRef<T>> Linear<T>::parameters(const std::string& prefix) {
  return {{prefix + ".weight", &weight_, &grad_weight_},
          {prefix + ".bias", &bias_, &grad_bias_}};
}

// ------------------------------------------------- SoftmaxCrossEntropy ----

void softmax2(double logit0, double logit1, double& p0, double& p1) {
  const double mx = std::max(logit0, logit1);
  const double e0 = std::exp(logit0 - mx);
  const double e1 = std::exp(logit1 - mx);
  const double inv = 1.0 / (e0 + e1);
  p0 = e0 * inv;
  p1 = e1 * inv;
}

template <typename T>
double SoftmaxCrossEntropy<T>::forward(const Tensor<T>& logits,
                                       const std::vector<std::uint8_t>& labels) {
  require(logits.rank() == 2 && logits.dim(1) == 2,
          "SoftmaxCrossEntropy: logits must be B x 2");
  const std::size_t batch = logits.dim(0);
  require(labels.size() == batch, "SoftmaxCrossEntropy: label count mismatch");
  for (auto b : labels) require(b <= 1, "SoftmaxCrossEntropy: labels must be bits");

  probs_ = Tensor<T>({batch, 2});
  labels_ = labels;
  has_forward_ = true;

  constexpr double kClamp = 1e-12;
  double loss = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    double p0, p1;
    softmax2(static_cast<double>(logits.data[2 * b]),
             static_cast<double>(logits.data[2 * b + 1]), p0, p1);
    probs_.data[2 * b] = static_cast<T>(p0);
    probs_.data[2 * b + 1] = static_cast<T>(p1);
    const double p_label = labels[b] == 1 ? p1 : p0;
    loss -= std::log(std::clamp(p_label, kClamp, 1.0 - kClamp));
  }
  return loss / static_cast<double>(batch);
}

template <typename T>
Tensor<T> SoftmaxCrossEntropy<T>::backward() {
  require_forward(has_forward_);
  const std::size_t batch = probs_.dim(0);
  Tensor<T> grad({batch, 2});
  const T inv_b = static_cast<T>(1.0 / static_cast<double>(batch));
  for (std::size_t b = 0; b < batch; ++b) {
    const T y1 = labels_[b] == 1 ? T{1} : T{0};
    grad.data[2 * b] = (probs_.data[2 * b] - (T{1} - y1)) * inv_b;
    grad.data[2 * b + 1] = (probs_.data[2 * b + 1] - y1) * inv_b;
  }
  return grad;
}

// ------------------------------------------------------------------ Adam ---

template <typename T>
Adam<T>::Adam(std::vector<ParamRef<T>> params, double lr, double beta1,
              double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2),
      eps_(eps) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    require(p.value != nullptr && p.grad != nullptr,
            "Adam: parameters need value and gradient");
    require(p.value->same_shape(*p.grad), "Adam: gradient shape mismatch");
    m_.emplace_back(p.value->numel(), 0.0);
    v_.emplace_back(p.value->numel(), 0.0);
  }
}

template <typename T>
void Adam<T>::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    T* w = params_[i].value->ptr();
    const T* g = params_[i].grad->ptr();
    double* m = m_[i].data();
    double* v = v_[i].data();
    const std::size_t count = params_[i].value->numel();
    for (std::size_t j = 0; j < count; ++j) {
      const double gj = static_cast<double>(g[j]);
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * gj;
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * gj * gj;
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      w[j] = static_cast<T>(static_cast<double>(w[j]) -
                            lr_ * mhat / (std::sqrt(vhat) + eps_));
    }
  }
}

template <typename T>
void Adam<T>::zero_grad() {
  for (auto& p : params_) p.grad->zero();
}

// ------------------------------------------------------ PlateauScheduler ---

double PlateauScheduler::observe(double val_loss, double current_lr) {
  bool improved;
  if (!has_best_)
    improved = true;
  else if (best_ > 0.0)
    improved = (best_ - val_loss) / best_ > rel_threshold_;
  else
    improved = val_loss < best_;
  if (improved) {
    best_ = val_loss;
    has_best_ = true;
    stale_ = 0;
    return current_lr;
  }
  if (++stale_ >= patience_) {
    stale_ = 0;
    return current_lr * factor_;
  }
  return current_lr;
}

// ------------------------------------------------ explicit instantiation ---

template class Conv1d<float>;
template class Conv1d<double>;
template class BatchNorm1d<float>;
template class BatchNorm1d<double>;
template class Relu<float>;
template class Relu<double>;
template class MultiHeadSelfAttention<float>;
template class MultiHeadSelfAttention<double>;
template class GlobalAveragePool<float>;
template class GlobalAveragePool<double>;
template class Linear<float>;
template class Linear<double>;
template class SoftmaxCrossEntropy<float>;
template class SoftmaxCrossEntropy<double>;
template class Adam<float>;
template class Adam<double>;

}  // namespace chaosnoma
