// Tests for the assembled demodulator network: geometry, parameter budgets,
// deterministic initialization, and an end-to-end gradient check.
#include <cmath>
#include <stdexcept>
#include <vector>

#include "chaosnoma/demod_net.hpp"
#include "chaosnoma/rng.hpp"
#include "doctest.h"
#include "gradcheck.hpp"

using namespace chaosnoma;

namespace {

Tensor<double> random_input(std::size_t batch, std::size_t beta,
                            RngStream& rng) {
  Tensor<double> t({batch, 2, beta});
  for (auto& v : t.data) v = rng.normal();
  return t;
}

}  // namespace

TEST_CASE("stage shapes across the block-length grid") {
  const Hyperparams hp;  // production defaults
  for (std::size_t beta : {8u, 16u, 32u, 64u, 128u}) {
    const auto chain = DemodNet<float>::shape_chain(beta, hp);
    REQUIRE(chain.size() == 13);
    CHECK(chain[0].first == "input");
    CHECK(chain[0].second == std::vector<std::size_t>{2, beta});
    CHECK(chain[1].second == std::vector<std::size_t>{32, beta - 2});
    CHECK(chain[4].first == "conv2");
    CHECK(chain[4].second == std::vector<std::size_t>{32, beta - 7});
    CHECK(chain[7].first == "mhsa");
    CHECK(chain[7].second == std::vector<std::size_t>{32, beta - 7});
    CHECK(chain[8].second == std::vector<std::size_t>{32});
    CHECK(chain[9].second == std::vector<std::size_t>{64});
    CHECK(chain[11].second == std::vector<std::size_t>{2});
    CHECK(chain[12].first == "softmax");
  }
  // The second convolution needs at least one output sample: beta >= 8.
  CHECK_THROWS_AS((void)DemodNet<float>::shape_chain(7, hp),
                  std::invalid_argument);
}

TEST_CASE("parameter budget matches the published layer table") {
  DemodNet<float> net(16, Hyperparams{}, 7);
  const auto counts = net.parameter_counts();
  REQUIRE(counts.size() == 7);
  CHECK(counts[0] == std::pair<std::string, std::size_t>{"conv1", 224});
  CHECK(counts[1] == std::pair<std::string, std::size_t>{"bn1", 64});
  CHECK(counts[2] == std::pair<std::string, std::size_t>{"conv2", 6176});
  CHECK(counts[3] == std::pair<std::string, std::size_t>{"bn2", 64});
  CHECK(counts[5] == std::pair<std::string, std::size_t>{"fc1", 2112});
  CHECK(counts[6] == std::pair<std::string, std::size_t>{"fc2", 130});

  std::size_t non_attention = 0;
  for (const auto& [name, count] : counts)
    if (name != "mhsa") non_attention += count;
  CHECK(non_attention == 8770);

  // Attention grows with the token length: 4 h d L with L = beta - 7.
  CHECK(counts[4].second == 2048 * (16 - 7));
  DemodNet<float> wide(128, Hyperparams{}, 7);
  CHECK(wide.parameter_counts()[4].second == 2048 * (128 - 7));
}

TEST_CASE("initialization is a pure function of the seed") {
  const Hyperparams hp{.filters = 8, .heads = 2, .head_dim = 4, .fc_hidden = 8};
  DemodNet<float> a(16, hp, 42);
  DemodNet<float> b(16, hp, 42);
  DemodNet<float> c(16, hp, 43);

  auto pa = a.parameters();
  auto pb = b.parameters();
  auto pc = c.parameters();
  REQUIRE(pa.size() == pb.size());
  bool any_differs_from_c = false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].name == pb[i].name);
    CHECK(pa[i].value->data == pb[i].value->data);  // bit-identical
    if (pa[i].value->data != pc[i].value->data) any_differs_from_c = true;
  }
  CHECK(any_differs_from_c);

  // Same-seed networks produce bit-identical logits.
  RngStream rng(5);
  Tensor<float> x({3, 2, 16});
  for (auto& v : x.data) v = static_cast<float>(rng.normal());
  const auto ya = a.forward(x, false);
  const auto yb = b.forward(x, false);
  CHECK(ya.data == yb.data);
  REQUIRE(ya.dims == std::vector<std::size_t>{3, 2});
}

TEST_CASE("state covers parameters plus running statistics") {
  DemodNet<float> net(16, Hyperparams{.filters = 4, .heads = 1, .head_dim = 2,
                                      .fc_hidden = 4},
                      1);
  const auto params = net.parameters();
  const auto buffers = net.buffers();
  const auto state = net.state();
  CHECK(params.size() == 16);   // 2+2+2+2+4+2+2 tensors
  CHECK(buffers.size() == 4);   // two BN layers, mean + var each
  CHECK(state.size() == params.size() + buffers.size());
  for (const auto& b : buffers) CHECK(b.grad == nullptr);
}

TEST_CASE("train and inference modes use different normalization") {
  DemodNet<float> net(16, Hyperparams{.filters = 4, .heads = 1, .head_dim = 2,
                                      .fc_hidden = 4},
                      3);
  RngStream rng(9);
  Tensor<float> x({4, 2, 16});
  for (auto& v : x.data) v = static_cast<float>(rng.normal());
  const auto train_out = net.forward(x, true);
  const auto infer_out = net.forward(x, false);
  double diff = 0.0;
  for (std::size_t i = 0; i < train_out.numel(); ++i)
    diff = std::max(diff, std::abs(static_cast<double>(train_out.data[i]) -
                                   static_cast<double>(infer_out.data[i])));
  CHECK(diff > 0.0);
}

TEST_CASE("backward before forward is a logic error") {
  DemodNet<double> net(16, Hyperparams{.filters = 4, .heads = 1, .head_dim = 2,
                                       .fc_hidden = 4},
                       1);
  Tensor<double> g({1, 2});
  CHECK_THROWS_AS((void)net.backward(g), std::logic_error);
}

TEST_CASE("whole-network gradients match finite differences") {
  const Hyperparams hp{.filters = 4, .heads = 2, .head_dim = 3, .fc_hidden = 8};
  DemodNet<double> net(16, hp, 2024);
  RngStream rng(11);
  auto x = random_input(2, 16, rng);
  const std::vector<std::uint8_t> labels{0, 1};

  SoftmaxCrossEntropy<double> ce;
  const auto logits = net.forward(x, true);
  (void)ce.forward(logits, labels);
  const auto grad_in = net.backward(ce.backward());

  auto params = net.parameters();
  std::vector<Tensor<double>> analytic;
  for (auto& p : params) analytic.push_back(*p.grad);

  SoftmaxCrossEntropy<double> probe_ce;
  const auto loss = [&]() {
    return probe_ce.forward(net.forward(x, true), labels);
  };

  gradcheck::Report report;
  for (std::size_t i = 0; i < params.size(); ++i)
    gradcheck::check_tensor(*params[i].value, analytic[i], loss, report);
  gradcheck::check_tensor(x, grad_in, loss, report);
  CHECK(report.checked > 400);
  CHECK(report.max_rel < 1e-5);
}
