#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "vpnn/eval.hpp"
#include "vpnn/network.hpp"
#include "vpnn/optim.hpp"
#include "vpnn/transform.hpp"

namespace vpnn {

enum class OptimizerKind { Adam, Sgd };

/// Transform each model family is defined with.
TransformKind transform_for(ModelKind kind);
/// Frames of temporal context seen per t-f unit (1 or 3).
int context_for(ModelKind kind);
/// Hidden width used when the config leaves it unset: 1536 for DNN2/DNN3,
/// 512 otherwise.
Index default_hidden_width(ModelKind kind);

/// Everything an experiment run needs. Loaded from a flat `key = value`
/// file; see apply_setting for the accepted keys.
struct ExperimentConfig {
  ModelKind model = ModelKind::CVPNN;
  std::optional<TransformKind> transform;  // unset: derived from model
  Index hidden_width = 0;                  // 0: default_hidden_width(model)
  Index hidden_layers = 3;
  ColorParams color;
  OptimizerKind optimizer = OptimizerKind::Adam;
  AdamConfig adam;
  Index batch_frames = 128;
  int epochs = 100;
  std::uint64_t seed = 0;
  std::size_t filter_len = kDefaultFilterLen;
  std::filesystem::path dataset_root;
  int channel = 0;
  int workers = 1;

  Index effective_hidden_width() const;
  TransformKind effective_transform() const;

  /// Throws Config on inconsistent settings (e.g. CVPNN with the window
  /// transform) or out-of-range values.
  void validate() const;
};

/// Keys: model, transform, hidden_width, hidden_layers, color_n, optimizer,
/// lr, beta1, beta2, epsilon, batch_frames, epochs, seed, filter_len, data,
/// channel, workers. Throws Config for unknown keys or malformed values.
void apply_setting(ExperimentConfig& cfg, std::string_view key,
                   std::string_view value);

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace vpnn
