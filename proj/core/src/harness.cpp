#include "chaosnoma/harness.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "chaosnoma/adversary.hpp"
#include "chaosnoma/link.hpp"
#include "chaosnoma/sic.hpp"
#include "chaosnoma/threading.hpp"

namespace chaosnoma {

namespace {

std::string format_number(double v) {
  std::array<char, 40> buf;
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_number failed");
  return std::string(buf.data(), end);
}

SystemSetup setup_from(const ExperimentConfig& config) {
  return SystemSetup{config.n_vehicles, config.beta, config.reference_power,
                     vehicle_profiles(config), config.csi_rho};
}

// Per-vehicle error counts for one SNR point.  Block b of point p always uses
// the stream keyed by (p << 40) | b regardless of threading.
std::vector<std::uint64_t> point_errors(const SystemSetup& setup, double snr_db,
                                        std::size_t point_index,
                                        std::size_t blocks,
                                        std::uint64_t master_seed,
                                        DemodulatorModel& model,
                                        std::size_t threads) {
  const std::size_t n = setup.n_vehicles;
  std::vector<std::vector<std::uint64_t>> partials;
  std::mutex collect;
  parallel_for(blocks, resolve_threads(threads),
               [&](std::size_t begin, std::size_t end) {
    DemodulatorModel local = model;  // private activation caches
    const DemodFn demod = [&local](const FeatureTensor& f) {
      return demodulate(local, f);
    };
    std::vector<std::uint64_t> errors(n, 0);
    for (std::size_t b = begin; b < end; ++b) {
      RngStream rng = seed_stream(
          master_seed,
          stream_id(stream_purpose::kTrial, (point_index << 40) | b));
      const LinkBlock block = simulate_block(setup, snr_db, rng);
      const std::vector<Bit> decided =
          sic_receive(block.rx, block.alloc, block.views, demod, rng);
      for (std::size_t v = 0; v < n; ++v)
        if (decided[v] != block.bits[v]) ++errors[v];
    }
    const std::lock_guard<std::mutex> lock(collect);
    partials.push_back(std::move(errors));
  });

  std::vector<std::uint64_t> totals(n, 0);
  for (const auto& part : partials)
    for (std::size_t v = 0; v < n; ++v) totals[v] += part[v];
  return totals;
}

std::vector<BerRecord> records_for_point(double snr_db,
                                         const std::vector<std::uint64_t>& errors,
                                         std::uint64_t blocks) {
  std::vector<BerRecord> records;
  records.reserve(errors.size());
  for (std::size_t v = 0; v < errors.size(); ++v) {
    BerRecord rec;
    rec.snr_db = snr_db;
    rec.vehicle = v + 1;
    rec.bits = blocks;
    rec.errors = errors[v];
    rec.ber = static_cast<double>(errors[v]) / static_cast<double>(blocks);
    const Interval ci = wilson_interval(errors[v], blocks);
    rec.ci_low = ci.low;
    rec.ci_high = ci.high;
    records.push_back(rec);
  }
  return records;
}

void check_model(const ExperimentConfig& config, const DemodulatorModel& model) {
  if (model.beta != config.beta)
    throw std::invalid_argument(
        "model was built for a different chips-per-bit length than the config");
}

void append_ber_row(std::string& out, const BerRecord& r) {
  out += format_number(r.snr_db);
  out += ',';
  out += std::to_string(r.vehicle);
  out += ',';
  out += std::to_string(r.bits);
  out += ',';
  out += std::to_string(r.errors);
  out += ',';
  out += format_number(r.ber);
  out += ',';
  out += format_number(r.ci_low);
  out += ',';
  out += format_number(r.ci_high);
}

}  // namespace

std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& config,
                                     DemodulatorModel& model,
                                     std::size_t threads) {
  validate_config(config);
  check_model(config, model);
  const SystemSetup setup = setup_from(config);

  std::vector<BerRecord> records;
  for (std::size_t p = 0; p < config.snr_grid_db.size(); ++p) {
    const double snr_db = config.snr_grid_db[p];
    const std::vector<std::uint64_t> errors =
        point_errors(setup, snr_db, p, config.bits_per_point,
                     config.master_seed, model, threads);
    for (BerRecord& rec :
         records_for_point(snr_db, errors, config.bits_per_point))
      records.push_back(rec);
  }
  return records;
}

SecurityReport run_security_eval(const ExperimentConfig& config,
                                 DemodulatorModel& model,
                                 std::size_t threads) {
  validate_config(config);
  check_model(config, model);
  const SystemSetup setup = setup_from(config);
  const ChannelProfile adversary_profile = eve_profile(config);
  const std::size_t n = config.n_vehicles;
  const std::size_t blocks = config.bits_per_point;

  SecurityReport report;
  for (std::size_t p = 0; p < config.snr_grid_db.size(); ++p) {
    const double snr_db = config.snr_grid_db[p];

    // Paired simulation: the legitimate receiver decodes each block, and the
    // same transmitted streams are re-propagated through independently drawn
    // adversary channels.
    std::vector<EveIntercept> intercepts(blocks);
    std::vector<std::vector<Bit>> truth(blocks);
    std::vector<std::vector<std::uint64_t>> partials;
    std::mutex collect;
    parallel_for(blocks, resolve_threads(threads),
                 [&](std::size_t begin, std::size_t end) {
      DemodulatorModel local = model;
      const DemodFn demod = [&local](const FeatureTensor& f) {
        return demodulate(local, f);
      };
      std::vector<std::uint64_t> errors(n, 0);
      for (std::size_t b = begin; b < end; ++b) {
        const std::uint64_t pb = (p << 40) | b;
        RngStream rng =
            seed_stream(config.master_seed, stream_id(stream_purpose::kTrial, pb));
        const LinkBlock block = simulate_block(setup, snr_db, rng);
        const std::vector<Bit> decided =
            sic_receive(block.rx, block.alloc, block.views, demod, rng);
        for (std::size_t v = 0; v < n; ++v)
          if (decided[v] != block.bits[v]) ++errors[v];
        truth[b] = block.bits;

        RngStream eve_rng = seed_stream(config.master_seed,
                                        stream_id(stream_purpose::kEveBlock, pb));
        EveIntercept& cept = intercepts[b];
        cept.rx.assign(config.beta, {0.0, 0.0});
        cept.views.reserve(n);
        std::vector<ChannelRealization> eve_channels;
        eve_channels.reserve(n);
        for (std::size_t v = 0; v < n; ++v) {
          eve_channels.push_back(
              draw_channel(adversary_profile, config.beta, eve_rng));
          const std::vector<std::complex<double>> faded = apply_channel(
              to_complex(block.stream_chips[v]), eve_channels[v], 0.0);
          for (std::size_t k = 0; k < config.beta; ++k) cept.rx[k] += faded[k];
        }
        add_awgn(cept.rx, block.noise_spectral_density, eve_rng);
        for (std::size_t v = 0; v < n; ++v)
          cept.views.push_back(receiver_view(eve_channels[v], config.beta, 0.0,
                                             /*rho=*/1.0, eve_rng));
      }
      const std::lock_guard<std::mutex> lock(collect);
      partials.push_back(std::move(errors));
    });

    std::vector<std::uint64_t> totals(n, 0);
    for (const auto& part : partials)
      for (std::size_t v = 0; v < n; ++v) totals[v] += part[v];

    SecurityPoint point;
    point.snr_db = snr_db;
    point.legit = records_for_point(snr_db, totals, blocks);

    EveConfig eve_cfg;
    eve_cfg.intercept_count = config.eve.intercepts;
    eve_cfg.eve_channel = adversary_profile;
    eve_cfg.training = config.train;
    eve_cfg.training.epochs = config.eve.epochs;
    eve_cfg.hyperparams = model.hyperparams;
    eve_cfg.reference_power = config.reference_power;
    eve_cfg.seed = derive_seed(config.master_seed,
                               stream_id(stream_purpose::kEveTrain, p));
    point.eve_ber = eve_train_and_score(eve_cfg, intercepts, truth, threads);

    std::vector<double> legit_ber(n);
    for (std::size_t v = 0; v < n; ++v) legit_ber[v] = point.legit[v].ber;
    point.leakage = leakage(point.eve_ber);
    point.secrecy = secrecy_capacity(legit_ber, point.eve_ber);
    report.points.push_back(std::move(point));
  }
  return report;
}

RobustnessResult run_robustness_sweep(const ExperimentConfig& config,
                                      DemodulatorModel& model,
                                      const std::vector<double>& rho_list,
                                      std::size_t threads) {
  if (rho_list.empty())
    throw std::invalid_argument("run_robustness_sweep: empty rho list");
  RobustnessResult result;
  for (double rho : rho_list) {
    if (!(rho >= 0.0) || rho > 1.0)
      throw std::invalid_argument("run_robustness_sweep: rho must lie in [0, 1]");
    ExperimentConfig point_config = config;
    point_config.csi_rho = rho;
    result.emplace_back(rho, run_ber_sweep(point_config, model, threads));
  }
  return result;
}

std::string ber_csv(const std::vector<BerRecord>& records) {
  std::string out = "snr_db,vehicle,bits,errors,ber,ci_low,ci_high\n";
  for (const BerRecord& r : records) {
    append_ber_row(out, r);
    out += '\n';
  }
  return out;
}

std::string security_csv(const SecurityReport& report) {
  std::string out =
      "snr_db,vehicle,bits,errors,ber,ci_low,ci_high,eve_ber,leakage,secrecy\n";
  for (const SecurityPoint& point : report.points) {
    for (std::size_t v = 0; v < point.legit.size(); ++v) {
      append_ber_row(out, point.legit[v]);
      out += ',';
      out += format_number(point.eve_ber[v]);
      out += ',';
      out += format_number(point.leakage);
      out += ',';
      out += format_number(point.secrecy);
      out += '\n';
    }
  }
  return out;
}

std::string robustness_csv(const RobustnessResult& result) {
  std::string out = "snr_db,vehicle,bits,errors,ber,ci_low,ci_high,rho\n";
  for (const auto& [rho, records] : result) {
    for (const BerRecord& r : records) {
      append_ber_row(out, r);
      out += ',';
      out += format_number(rho);
      out += '\n';
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace chaosnoma
