#pragma once

// A trainable separation model: one of the five network families together
// with the magnitude encoding it consumes and emits. Inputs and outputs are
// passed around as component planes (one plane for real networks, three for
// vector-product networks) with one column per frame.

#include <string>
#include <variant>
#include <vector>

#include "vpnn/audio.hpp"
#include "vpnn/config.hpp"
#include "vpnn/network.hpp"
#include "vpnn/transform.hpp"

namespace vpnn {

using Planes = std::vector<Matrix>;

struct Model {
  ModelKind kind = ModelKind::CVPNN;
  ColorParams color;
  Index bins = kBins;
  Index hidden_width = 0;
  Index hidden_layers = 0;
  std::variant<VPNetwork, RealNetwork> network;

  TransformKind transform() const { return transform_for(kind); }
  int context() const { return context_for(kind); }
  /// e.g. "512x3"
  std::string arch() const;
  std::int64_t parameters() const;
  /// Input width, hidden widths..., output width (2 · bins).
  std::vector<Index> widths() const;
  /// Throws ShapeMismatch when the network does not match kind/bins/widths.
  void validate() const;
};

std::vector<Index> layer_widths(ModelKind kind, Index bins, Index hidden_width,
                                Index hidden_layers);

/// Freshly initialized model for `cfg` (deterministic in cfg.seed).
Model make_model(const ExperimentConfig& cfg, Index bins = kBins);

/// Encoded network input for normalized mixture magnitudes (bins x frames).
Planes encode_input(const Model& model, const Matrix& mixture);
/// Encoded training target: sources stacked [vocal; music] (2·bins rows).
Planes encode_target(const Model& model, const Matrix& vocal,
                     const Matrix& music);
/// Network output back to stacked normalized magnitudes in [0,1].
Matrix decode_output(const Model& model, const Planes& output);

Planes model_forward(const Model& model, const Planes& input);

/// Columns `cols` of every plane.
Planes gather_columns(const Planes& planes, const std::vector<Index>& cols);

}  // namespace vpnn
