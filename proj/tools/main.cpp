// Batch command line front end: dataset generation, training, BER sweeps,
// security evaluation, robustness sweeps, and a configuration summary.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "chaosnoma/adversary.hpp"
#include "chaosnoma/config.hpp"
#include "chaosnoma/demodulator.hpp"
#include "chaosnoma/harness.hpp"
#include "chaosnoma/metrics.hpp"
#include "chaosnoma/threading.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string model_path;
  std::string out_dir = "results";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_model) {
  cmd->add_option("--config", args.config_path, "Experiment configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  if (needs_model)
    cmd->add_option("--model", args.model_path, "Trained model file")
        ->required()
        ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Master seed (overrides the config)")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--threads", args.threads, "Worker threads (default 1)");
}

chaosnoma::ExperimentConfig load(const CommonArgs& args) {
  chaosnoma::ExperimentConfig cfg = chaosnoma::load_config(args.config_path);
  if (args.seed_given) cfg.master_seed = args.seed;
  chaosnoma::set_default_threads(args.threads);
  return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  return (std::filesystem::path(args.out_dir) / name).string();
}

std::string history_csv(const std::vector<chaosnoma::EpochStats>& history) {
  std::string out = "epoch,train_loss,val_loss,val_accuracy,learning_rate\n";
  for (const auto& e : history) {
    out += std::to_string(e.epoch) + ',' + std::to_string(e.train_loss) + ',' +
           std::to_string(e.val_loss) + ',' + std::to_string(e.val_accuracy) +
           ',' + std::to_string(e.learning_rate) + '\n';
  }
  return out;
}

int cmd_dataset_gen(const CommonArgs& args) {
  const chaosnoma::ExperimentConfig cfg = load(args);
  const chaosnoma::Dataset ds =
      chaosnoma::generate_dataset(cfg, cfg.master_seed, args.threads);
  const std::string path = out_path(args, "dataset.bin");
  chaosnoma::save_dataset(ds, path);
  std::cout << "wrote " << ds.samples.size() << " samples (" << ds.n_vehicles
            << " vehicles, " << ds.beta << " chips/bit) to " << path << "\n";
  return 0;
}

int cmd_train(const CommonArgs& args) {
  const chaosnoma::ExperimentConfig cfg = load(args);

  // Reuse a dataset generated into the same output directory when present;
  // otherwise generate one from the config.
  const std::string dataset_path = out_path(args, "dataset.bin");
  chaosnoma::Dataset ds;
  if (std::filesystem::exists(dataset_path)) {
    ds = chaosnoma::load_dataset(dataset_path);
    if (ds.beta != cfg.beta)
      throw std::runtime_error("existing dataset.bin does not match the config");
    std::cout << "loaded " << ds.samples.size() << " samples from "
              << dataset_path << "\n";
  } else {
    ds = chaosnoma::generate_dataset(cfg, cfg.master_seed, args.threads);
  }

  chaosnoma::DemodulatorModel model = chaosnoma::build_model(
      cfg.beta, chaosnoma::Hyperparams{}, cfg.master_seed);
  const std::vector<chaosnoma::EpochStats> history =
      chaosnoma::train(model, ds, cfg.train, cfg.master_seed);

  const std::string model_path = out_path(args, "model.bin");
  chaosnoma::save_model(model, model_path);
  chaosnoma::write_text_file(out_path(args, "train_history.csv"),
                             history_csv(history));
  const chaosnoma::EpochStats& last = history.back();
  std::cout << "trained " << history.size() << " epochs; final val loss "
            << last.val_loss << ", val accuracy " << last.val_accuracy
            << "; model at " << model_path << "\n";
  return 0;
}

int cmd_ber(const CommonArgs& args) {
  const chaosnoma::ExperimentConfig cfg = load(args);
  chaosnoma::DemodulatorModel model = chaosnoma::load_model(args.model_path);
  const std::vector<chaosnoma::BerRecord> records =
      chaosnoma::run_ber_sweep(cfg, model, args.threads);
  const std::string path = out_path(args, "ber.csv");
  chaosnoma::write_text_file(path, chaosnoma::ber_csv(records));
  std::cout << "wrote " << records.size() << " rows to " << path << "\n";
  return 0;
}

int cmd_security(const CommonArgs& args) {
  const chaosnoma::ExperimentConfig cfg = load(args);
  chaosnoma::DemodulatorModel model = chaosnoma::load_model(args.model_path);
  const chaosnoma::SecurityReport report =
      chaosnoma::run_security_eval(cfg, model, args.threads);
  const std::string path = out_path(args, "security.csv");
  chaosnoma::write_text_file(path, chaosnoma::security_csv(report));
  for (const auto& point : report.points)
    std::cout << "snr " << point.snr_db << " dB: leakage " << point.leakage
              << ", secrecy " << point.secrecy << "\n";
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_robustness(const CommonArgs& args) {
  const chaosnoma::ExperimentConfig cfg = load(args);
  chaosnoma::DemodulatorModel model = chaosnoma::load_model(args.model_path);
  const chaosnoma::RobustnessResult result =
      chaosnoma::run_robustness_sweep(cfg, model, cfg.rho_grid, args.threads);
  const std::string path = out_path(args, "robustness.csv");
  chaosnoma::write_text_file(path, chaosnoma::robustness_csv(result));
  std::cout << "wrote " << result.size() << " channel-knowledge settings to "
            << path << "\n";
  return 0;
}

int cmd_info(const CommonArgs& args) {
  const chaosnoma::ExperimentConfig cfg = load(args);
  const chaosnoma::Hyperparams hp;
  std::cout << "vehicles: " << cfg.n_vehicles << "\nchips per bit: " << cfg.beta
            << "\n\nlearnable parameters:\n";
  std::size_t total = 0;
  chaosnoma::DemodulatorModel model =
      args.model_path.empty()
          ? chaosnoma::build_model(cfg.beta, hp, cfg.master_seed)
          : chaosnoma::load_model(args.model_path);
  for (const auto& [name, count] : model.net.parameter_counts()) {
    std::cout << "  " << name << ": " << count << "\n";
    total += count;
  }
  std::cout << "  total: " << total << "\n";

  const chaosnoma::ComplexityBreakdown cx = chaosnoma::complexity_estimate(
      cfg.beta, model.hyperparams.filters, model.hyperparams.heads,
      model.hyperparams.head_dim, model.hyperparams.kernel2);
  std::cout << "\noperations per decoded bit:\n"
            << "  spectral transform: " << cx.fft_term << "\n"
            << "  convolution: " << cx.conv_term << "\n"
            << "  attention projections: " << cx.projection_term << "\n"
            << "  attention scores (dominant): " << cx.attention_term << "\n"
            << "  pooling: " << cx.pooling_term << "\n"
            << "  output: " << cx.output_term << "\n"
            << "  total: " << cx.total() << "\n";

  std::cout << "\nenergy efficiency (no reference waveform): "
            << chaosnoma::energy_efficiency(0.0, 1.0) << "\n"
            << "spectral efficiency: "
            << chaosnoma::spectral_efficiency(cfg.n_vehicles, cfg.beta) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Chip-level simulator for chaotic-waveform power-domain multiple access "
      "with a learned cancellation receiver"};
  app.require_subcommand(1);

  CommonArgs dataset_args, train_args, ber_args, security_args,
      robustness_args, info_args;

  CLI::App* dataset_cmd = app.add_subcommand(
      "dataset-gen", "Generate a training dataset from a config");
  add_common(dataset_cmd, dataset_args, /*needs_model=*/false);

  CLI::App* train_cmd =
      app.add_subcommand("train", "Train the demodulator network");
  add_common(train_cmd, train_args, /*needs_model=*/false);

  CLI::App* ber_cmd = app.add_subcommand("ber", "Run a BER sweep");
  add_common(ber_cmd, ber_args, /*needs_model=*/true);

  CLI::App* security_cmd = app.add_subcommand(
      "security", "Evaluate the eavesdropper and the secrecy metrics");
  add_common(security_cmd, security_args, /*needs_model=*/true);

  CLI::App* robustness_cmd = app.add_subcommand(
      "robustness", "BER sweep under imperfect channel knowledge");
  add_common(robustness_cmd, robustness_args, /*needs_model=*/true);

  CLI::App* info_cmd = app.add_subcommand(
      "info", "Print parameter counts, complexity, and efficiency figures");
  info_cmd->add_option("--config", info_args.config_path, "Configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  info_cmd->add_option("--model", info_args.model_path, "Trained model file")
      ->check(CLI::ExistingFile);
  info_cmd->add_option("--out", info_args.out_dir, "Output directory");
  info_cmd->add_option("--seed", info_args.seed, "Master seed override")
      ->each([&info_args](const std::string&) { info_args.seed_given = true; });
  info_cmd->add_option("--threads", info_args.threads, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dataset_cmd->parsed()) return cmd_dataset_gen(dataset_args);
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (ber_cmd->parsed()) return cmd_ber(ber_args);
    if (security_cmd->parsed()) return cmd_security(security_args);
    if (robustness_cmd->parsed()) return cmd_robustness(robustness_args);
    if (info_cmd->parsed()) return cmd_info(info_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
