#include "chaosnoma/demodulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "chaosnoma/link.hpp"
#include "chaosnoma/threading.hpp"
#include "chaosnoma/weights_io.hpp"

namespace chaosnoma {

namespace {

// Writes one row-normalized feature into batch slot b of a B x 2 x beta input.
void pack_feature(const FeatureTensor& feature, Tensor<float>& input,
                  std::size_t b) {
  FeatureTensor norm = feature;
  normalize_rows(norm);
  const std::size_t beta = norm.beta;
  float* row0 = input.ptr() + b * 2 * beta;
  float* row1 = row0 + beta;
  for (std::size_t k = 0; k < beta; ++k) {
    row0[k] = static_cast<float>(norm.time_row[k]);
    row1[k] = static_cast<float>(norm.psd_row[k]);
  }
}

std::vector<std::vector<float>> snapshot_state(DemodNet<float>& net) {
  std::vector<std::vector<float>> out;
  for (const ParamRef<float>& p : net.state()) out.push_back(p.value->data);
  return out;
}

void restore_state(DemodNet<float>& net,
                   const std::vector<std::vector<float>>& snap) {
  std::vector<ParamRef<float>> state = net.state();
  if (snap.size() != state.size())
    throw std::logic_error("restore_state: snapshot size mismatch");
  for (std::size_t i = 0; i < state.size(); ++i) state[i].value->data = snap[i];
}

void fisher_yates(std::vector<std::size_t>& idx, RngStream& rng) {
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng.uniform_int(i)]);
}

}  // namespace

DemodulatorModel build_model(std::size_t beta, const Hyperparams& hyperparams,
                             std::uint64_t init_seed) {
  return DemodulatorModel{beta, hyperparams,
                          DemodNet<float>(beta, hyperparams, init_seed)};
}

std::pair<Bit, std::array<double, 2>> demodulate(DemodulatorModel& model,
                                                 const FeatureTensor& feature) {
  if (feature.beta != model.beta ||
      feature.time_row.size() != model.beta ||
      feature.psd_row.size() != model.beta)
    throw std::invalid_argument("demodulate: feature length mismatch");
  Tensor<float> input({1, 2, model.beta});
  pack_feature(feature, input, 0);
  const Tensor<float> logits = model.net.forward(input, /*train=*/false);
  double p0 = 0.0, p1 = 0.0;
  softmax2(static_cast<double>(logits.data[0]),
           static_cast<double>(logits.data[1]), p0, p1);
  const Bit bit = (p1 > p0) ? Bit{1} : Bit{0};
  return {bit, {p0, p1}};
}

Dataset generate_dataset(const ExperimentConfig& config, std::uint64_t seed,
                         std::size_t threads) {
  validate_config(config);
  const std::size_t n = config.n_vehicles;
  const std::size_t beta = config.beta;
  SystemSetup setup{n, beta, config.reference_power, vehicle_profiles(config),
                    config.csi_rho};

  Dataset ds;
  ds.n_vehicles = n;
  ds.beta = beta;
  ds.samples.resize(config.train.samples);

  parallel_for(config.train.samples, resolve_threads(threads),
               [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      RngStream rng =
          seed_stream(seed, stream_id(stream_purpose::kDataset, i));
      const std::size_t stage = 1 + rng.uniform_int(n);
      const double snr_db =
          rng.uniform_range(config.train.snr_low_db, config.train.snr_high_db);
      LinkBlock block = simulate_block(setup, snr_db, rng);

      // Teacher-forced peeling: earlier stages are rebuilt from their true
      // bits (fresh seeds) and subtracted through the receiver's view.
      std::vector<std::complex<double>> residual = block.rx;
      for (std::size_t j = 0; j + 1 < stage; ++j) {
        const std::vector<double> est = reconstruct_stream(
            block.bits[j], block.alloc.coefficients[j],
            config.reference_power, beta, rng);
        const std::vector<std::complex<double>> faded =
            apply_view(to_complex(est), block.views[j]);
        for (std::size_t k = 0; k < beta; ++k) residual[k] -= faded[k];
      }

      TrainingSample& s = ds.samples[i];
      s.feature = build_feature(residual, dominant_tap(block.views[stage - 1]));
      s.label = block.bits[stage - 1];
      s.sic_stage = stage;
      s.snr_db = snr_db;
    }
  });
  return ds;
}

std::vector<EpochStats> train(DemodulatorModel& model, const Dataset& dataset,
                              const TrainSettings& settings,
                              std::uint64_t seed) {
  const std::size_t n = dataset.samples.size();
  if (n == 0) throw std::invalid_argument("train: dataset is empty");
  if (settings.batch < 2)
    throw std::invalid_argument("train: batch must be >= 2");
  if (dataset.beta != model.beta)
    throw std::invalid_argument("train: dataset and model beta differ");
  if (!(settings.val_split > 0.0) || !(settings.val_split < 1.0))
    throw std::invalid_argument("train: val_split must lie in (0, 1)");

  // Deterministic split: one shuffle, tail becomes the validation set.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  {
    RngStream split_rng =
        seed_stream(seed, stream_id(stream_purpose::kShuffle, 0));
    fisher_yates(order, split_rng);
  }
  const std::size_t val_n = std::max<std::size_t>(
      1, static_cast<std::size_t>(static_cast<double>(n) * settings.val_split));
  if (val_n >= n || n - val_n < 2)
    throw std::invalid_argument("train: too few samples for the split");
  std::vector<std::size_t> train_idx(order.begin(), order.end() - val_n);
  const std::vector<std::size_t> val_idx(order.end() - val_n, order.end());

  const std::size_t beta = model.beta;
  Adam<float> opt(model.net.parameters(), settings.lr);
  PlateauScheduler scheduler;
  SoftmaxCrossEntropy<float> loss_layer;

  double best_val = std::numeric_limits<double>::infinity();
  std::vector<std::vector<float>> best_state = snapshot_state(model.net);

  std::vector<EpochStats> history;
  history.reserve(settings.epochs);

  for (std::size_t epoch = 1; epoch <= settings.epochs; ++epoch) {
    RngStream epoch_rng =
        seed_stream(seed, stream_id(stream_purpose::kShuffle, epoch));
    fisher_yates(train_idx, epoch_rng);

    const double epoch_lr = opt.learning_rate();
    double train_loss_sum = 0.0;
    std::size_t train_seen = 0;

    for (std::size_t at = 0; at < train_idx.size();) {
      const std::size_t b =
          std::min<std::size_t>(settings.batch, train_idx.size() - at);
      if (b < 2) break;  // a 1-sample tail cannot be batch-normalized
      Tensor<float> input({b, 2, beta});
      std::vector<std::uint8_t> labels(b);
      for (std::size_t s = 0; s < b; ++s) {
        const TrainingSample& sample = dataset.samples[train_idx[at + s]];
        pack_feature(sample.feature, input, s);
        labels[s] = sample.label;
      }
      const Tensor<float> logits = model.net.forward(input, /*train=*/true);
      const double loss = loss_layer.forward(logits, labels);
      opt.zero_grad();
      model.net.backward(loss_layer.backward());
      opt.step();
      train_loss_sum += loss * static_cast<double>(b);
      train_seen += b;
      at += b;
    }

    // Validation pass on running statistics.
    double val_loss_sum = 0.0;
    std::size_t val_correct = 0;
    for (std::size_t at = 0; at < val_idx.size();) {
      const std::size_t b =
          std::min<std::size_t>(settings.batch, val_idx.size() - at);
      Tensor<float> input({b, 2, beta});
      std::vector<std::uint8_t> labels(b);
      for (std::size_t s = 0; s < b; ++s) {
        const TrainingSample& sample = dataset.samples[val_idx[at + s]];
        pack_feature(sample.feature, input, s);
        labels[s] = sample.label;
      }
      const Tensor<float> logits = model.net.forward(input, /*train=*/false);
      val_loss_sum += loss_layer.forward(logits, labels) * static_cast<double>(b);
      for (std::size_t s = 0; s < b; ++s) {
        const float l0 = logits.data[2 * s];
        const float l1 = logits.data[2 * s + 1];
        const Bit decided = (l1 > l0) ? Bit{1} : Bit{0};
        if (decided == labels[s]) ++val_correct;
      }
      at += b;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss =
        train_seen ? train_loss_sum / static_cast<double>(train_seen) : 0.0;
    stats.val_loss = val_loss_sum / static_cast<double>(val_idx.size());
    stats.val_accuracy =
        static_cast<double>(val_correct) / static_cast<double>(val_idx.size());
    stats.learning_rate = epoch_lr;
    history.push_back(stats);

    if (stats.val_loss < best_val) {
      best_val = stats.val_loss;
      best_state = snapshot_state(model.net);
    }
    const double next_lr = scheduler.observe(stats.val_loss, opt.learning_rate());
    opt.set_learning_rate(next_lr);
  }

  restore_state(model.net, best_state);
  return history;
}

void save_model(const DemodulatorModel& model, const std::string& path) {
  // state() is non-const by protocol; persistence only reads the tensors.
  DemodNet<float>& net = const_cast<DemodulatorModel&>(model).net;
  save_weights(path, net.state());

  std::ofstream meta(path + ".meta");
  if (!meta) throw std::runtime_error("save_model: cannot write " + path + ".meta");
  meta << "format = demodulator-model\n"
       << "version = 1\n"
       << "beta = " << model.beta << "\n"
       << "filters = " << model.hyperparams.filters << "\n"
       << "kernel1 = " << model.hyperparams.kernel1 << "\n"
       << "kernel2 = " << model.hyperparams.kernel2 << "\n"
       << "heads = " << model.hyperparams.heads << "\n"
       << "head_dim = " << model.hyperparams.head_dim << "\n"
       << "fc_hidden = " << model.hyperparams.fc_hidden << "\n";
  if (!meta) throw std::runtime_error("save_model: write failed: " + path + ".meta");
}

DemodulatorModel load_model(const std::string& path) {
  std::ifstream meta(path + ".meta");
  if (!meta)
    throw std::runtime_error("load_model: cannot open " + path + ".meta");
  std::size_t beta = 0;
  Hyperparams hp;
  std::string line;
  while (std::getline(meta, line)) {
    std::istringstream ss(line);
    std::string key, eq;
    ss >> key >> eq;
    if (key.empty() || key[0] == '#') continue;
    if (eq != "=") throw std::runtime_error("load_model: bad meta line: " + line);
    if (key == "format") {
      std::string value;
      ss >> value;
      if (value != "demodulator-model")
        throw std::runtime_error("load_model: unexpected format: " + value);
    } else if (key == "version") {
      std::size_t v = 0;
      ss >> v;
      if (v != 1) throw std::runtime_error("load_model: unsupported version");
    } else if (key == "beta") ss >> beta;
    else if (key == "filters") ss >> hp.filters;
    else if (key == "kernel1") ss >> hp.kernel1;
    else if (key == "kernel2") ss >> hp.kernel2;
    else if (key == "heads") ss >> hp.heads;
    else if (key == "head_dim") ss >> hp.head_dim;
    else if (key == "fc_hidden") ss >> hp.fc_hidden;
    else throw std::runtime_error("load_model: unknown meta key: " + key);
  }
  if (beta == 0) throw std::runtime_error("load_model: meta missing beta");

  DemodulatorModel model = build_model(beta, hp, /*init_seed=*/0);
  assign_weights(load_weights(path), model.net.state());
  return model;
}

namespace {

constexpr char kDatasetMagic[4] = {'D', 'N', 'C', 'D'};

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("dataset file: truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(os, bits);
}

double get_f64(std::istream& is) {
  const std::uint64_t bits = get_u64(is);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::runtime_error("dataset file: cannot open for writing: " + path);
  os.write(kDatasetMagic, 4);
  put_u64(os, 1);  // format version
  put_u64(os, dataset.samples.size());
  put_u64(os, dataset.n_vehicles);
  put_u64(os, dataset.beta);
  for (const TrainingSample& s : dataset.samples) {
    if (s.feature.beta != dataset.beta)
      throw std::invalid_argument("save_dataset: inconsistent feature length");
    const char label = static_cast<char>(s.label);
    os.write(&label, 1);
    put_u64(os, s.sic_stage);
    put_f64(os, s.snr_db);
    for (double v : s.feature.time_row) put_f64(os, v);
    for (double v : s.feature.psd_row) put_f64(os, v);
  }
  if (!os) throw std::runtime_error("dataset file: write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("dataset file: cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kDatasetMagic, 4) != 0)
    throw std::runtime_error("dataset file: bad magic: " + path);
  if (get_u64(is) != 1)
    throw std::runtime_error("dataset file: unsupported version");
  Dataset ds;
  const std::uint64_t count = get_u64(is);
  ds.n_vehicles = get_u64(is);
  ds.beta = get_u64(is);
  ds.samples.resize(count);
  for (TrainingSample& s : ds.samples) {
    char label = 0;
    is.read(&label, 1);
    if (!is) throw std::runtime_error("dataset file: truncated");
    s.label = static_cast<Bit>(label);
    s.sic_stage = get_u64(is);
    s.snr_db = get_f64(is);
    s.feature.beta = ds.beta;
    s.feature.time_row.resize(ds.beta);
    s.feature.psd_row.resize(ds.beta);
    for (double& v : s.feature.time_row) v = get_f64(is);
    for (double& v : s.feature.psd_row) v = get_f64(is);
  }
  return ds;
}

}  // namespace chaosnoma
