#include "vpnn/cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vpnn/error.hpp"
#include "vpnn/pipeline.hpp"

namespace vpnn {

namespace fs = std::filesystem;

namespace {

// Flags shared by train and evaluate; they override the config file.
struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> model;
  std::optional<std::string> transform;
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> filter_len;
  std::optional<std::string> data;
  std::optional<int> workers;
  std::vector<std::string> settings;

  void attach(CLI::App& app) {
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--model", model, "DNN1, DNN2, DNN3, WVPNN or CVPNN");
    app.add_option("--transform", transform, "none, window or color");
    app.add_option("--epochs", epochs, "training epochs");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--filter-len", filter_len, "BSS projection filter taps");
    app.add_option("--data", data, "dataset root (manifest.tsv)");
    app.add_option("--workers", workers, "parallel clip evaluations");
    app.add_option("--set", settings, "extra key=value override")
        ->allow_extra_args(false);
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg =
        config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (model) apply_setting(cfg, "model", *model);
    if (transform) apply_setting(cfg, "transform", *transform);
    if (epochs) cfg.epochs = *epochs;
    if (seed) cfg.seed = *seed;
    if (filter_len) cfg.filter_len = *filter_len;
    if (data) cfg.dataset_root = *data;
    if (workers) cfg.workers = *workers;
    for (const auto& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorKind::Config, "--set expects key=value, got '" + kv + "'");
      }
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
  }
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

void print_info(std::ostream& out, const ModelCheckpoint& ckpt) {
  const Model& m = ckpt.model;
  out << "model\t" << to_string(m.kind) << '\n'
      << "transform\t" << to_string(m.transform()) << '\n'
      << "arch\t" << m.arch() << '\n'
      << "context\t" << m.context() << '\n'
      << "widths\t";
  const auto widths = m.widths();
  for (std::size_t k = 0; k < widths.size(); ++k) {
    out << (k ? "-" : "") << widths[k];
  }
  out << '\n'
      << "param_count\t" << m.parameters() << '\n'
      << "color_n\t" << m.color.n << '\n'
      << "normalization\t" << ckpt.normalization << '\n'
      << "epochs\t" << ckpt.epochs << '\n'
      << "final_loss\t";
  if (ckpt.final_loss) {
    out << std::setprecision(10) << *ckpt.final_loss;
  } else {
    out << "-";
  }
  out << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Vector-product neural networks for singing voice separation",
               "vpnn"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic paired-stem dataset");
  SynthOptions synth_opts;
  fs::path synth_out;
  synth->add_option("--out", synth_out, "dataset root")->required();
  synth->add_option("--seed", synth_opts.seed, "random seed");
  synth->add_option("--train-clips", synth_opts.train_clips, "train clips");
  synth->add_option("--test-clips", synth_opts.test_clips, "test clips");
  synth->add_option("--duration", synth_opts.duration_s, "seconds per clip");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model and write a checkpoint");
  ConfigFlags train_flags;
  train_flags.attach(*train_cmd);
  fs::path train_out;
  train_cmd->add_option("--out", train_out, "checkpoint path")->required();

  // separate
  auto* sep_cmd = app.add_subcommand("separate", "separate a mixture WAV");
  fs::path sep_ckpt, sep_input, sep_out;
  int sep_channel = 0;
  sep_cmd->add_option("checkpoint", sep_ckpt)->required();
  sep_cmd->add_option("mixture", sep_input)->required();
  sep_cmd->add_option("--out", sep_out, "output directory")->required();
  sep_cmd->add_option("--channel", sep_channel, "input channel (0 = left)");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "score a checkpoint on the test split");
  ConfigFlags eval_flags;
  eval_flags.attach(*eval_cmd);
  fs::path eval_ckpt;
  std::string eval_out;
  std::string oracle;
  eval_cmd->add_option("checkpoint", eval_ckpt, "checkpoint (omit with --oracle)");
  eval_cmd->add_option("--out", eval_out,
                       "report prefix: writes <out>.tsv, <out>.clips.tsv, <out>.json");
  eval_cmd->add_option("--oracle", oracle, "score an ideal mask instead: soft or binary")
      ->check(CLI::IsMember({"soft", "binary"}));

  // info
  auto* info_cmd = app.add_subcommand("info", "describe a checkpoint");
  fs::path info_ckpt;
  info_cmd->add_option("checkpoint", info_ckpt)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (synth->parsed()) {
      const DatasetManifest m = synth_dataset(synth_out, synth_opts);
      out << "wrote " << m.clips.size() << " clips to " << synth_out.string()
          << '\n';
    } else if (train_cmd->parsed()) {
      const ExperimentConfig cfg = train_flags.resolve();
      if (cfg.dataset_root.empty()) {
        throw Error(ErrorKind::Config, "no dataset given (--data or data=)");
      }
      const DatasetManifest manifest = load_manifest(cfg.dataset_root);
      const TrainingResult result =
          train(cfg, manifest, [&out](int epoch, double j) {
            out << "epoch " << epoch + 1 << "\tJ " << std::setprecision(8) << j
                << '\n';
          });
      checkpoint_save(train_out, result.checkpoint);
      out << "saved " << train_out.string() << " ("
          << result.checkpoint.model.parameters() << " parameters)\n";
    } else if (sep_cmd->parsed()) {
      const ModelCheckpoint ckpt = checkpoint_load(sep_ckpt);
      const Waveform mixture = wav_read(sep_input, sep_channel);
      const Separation sep = separate(ckpt.model, mixture);
      fs::create_directories(sep_out);
      wav_write(sep_out / "vocal.wav", sep.vocal, SampleFormat::Float32);
      wav_write(sep_out / "music.wav", sep.music, SampleFormat::Float32);
      out << "wrote " << (sep_out / "vocal.wav").string() << " and "
          << (sep_out / "music.wav").string() << '\n';
    } else if (eval_cmd->parsed()) {
      const ExperimentConfig cfg = eval_flags.resolve();
      if (cfg.dataset_root.empty()) {
        throw Error(ErrorKind::Config, "no dataset given (--data or data=)");
      }
      const EvaluationOptions opts{cfg.filter_len, cfg.channel, cfg.workers};
      EvaluationReport report;
      if (!oracle.empty()) {
        if (!eval_ckpt.empty()) {
          throw Error(ErrorKind::Config, "give either a checkpoint or --oracle");
        }
        const DatasetManifest manifest = load_manifest(cfg.dataset_root);
        const bool soft = oracle == "soft";
        report = evaluate(
            manifest,
            [soft](const ClipAudio& a) {
              return soft ? ideal_soft_mask(a.mixture, *a.vocal, *a.music)
                          : ideal_binary_mask(a.mixture, *a.vocal, *a.music);
            },
            opts, soft ? "IdealSoftMask" : "IdealBinaryMask", "-", 1);
      } else {
        if (eval_ckpt.empty()) {
          throw Error(ErrorKind::Config, "evaluate needs a checkpoint or --oracle");
        }
        const ModelCheckpoint ckpt = checkpoint_load(eval_ckpt);
        report = evaluate(ckpt, load_manifest(cfg.dataset_root), opts);
      }
      write_summary_tsv(out, report);
      if (!eval_out.empty()) {
        auto summary = open_output(eval_out + ".tsv");
        write_summary_tsv(summary, report);
        auto clips = open_output(eval_out + ".clips.tsv");
        write_clip_tsv(clips, report);
        auto json = open_output(eval_out + ".json");
        write_report_json(json, report);
      }
    } else if (info_cmd->parsed()) {
      print_info(out, checkpoint_load(info_ckpt));
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::Config ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vpnn
