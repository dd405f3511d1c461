#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "vpnn/checkpoint.hpp"
#include "vpnn/dataset.hpp"
#include "vpnn/eval.hpp"

namespace vpnn {

// ---------------------------------------------------------------------------
// Training

struct TrainingResult {
  ModelCheckpoint checkpoint;
  std::vector<double> loss_history;  // per-epoch mean J per frame
};

/// Called after every epoch with (epoch index, mean J).
using EpochObserver = std::function<void(int, double)>;

/// Minibatch optimization of J over a prepared training set. Deterministic
/// for a fixed config. Throws Divergence when J stops being finite.
TrainingResult train(const ExperimentConfig& cfg, Model model,
                     const TrainingSet& set, const EpochObserver& observer = {});
TrainingResult train(const ExperimentConfig& cfg,
                     const DatasetManifest& manifest,
                     const EpochObserver& observer = {});

// ---------------------------------------------------------------------------
// Separation

struct Separation {
  Waveform vocal;
  Waveform music;
};

/// Stacked normalized magnitude estimates [vocal; music] (2·bins x frames)
/// for normalized mixture magnitudes.
Matrix predict_magnitudes(const Model& model, const Matrix& mixture);

/// Resamples to 16 kHz, masks the mixture spectrogram with the model's soft
/// mask and resynthesizes both sources at the (resampled) input length.
Separation separate(const Model& model, const Waveform& mixture);

/// Separation from known stems: ideal soft (ratio) mask or ideal binary
/// mask. Upper-bound references for the learned models.
Separation ideal_soft_mask(const Waveform& mixture, const Waveform& vocal,
                           const Waveform& music);
Separation ideal_binary_mask(const Waveform& mixture, const Waveform& vocal,
                             const Waveform& music);

// ---------------------------------------------------------------------------
// Evaluation

struct SourceScore {
  BssResult bss;
  double nsdr = 0.0;
};

struct ClipReport {
  std::string id;
  std::size_t length = 0;
  SourceScore vocal;
  SourceScore music;
};

struct EvaluationReport {
  std::string model;
  std::string arch;
  int context = 1;
  std::vector<ClipReport> clips;
  GlobalMetrics vocal;
  GlobalMetrics music;
};

struct EvaluationOptions {
  std::size_t filter_len = kDefaultFilterLen;
  int channel = 0;
  int workers = 1;
};

using Separator = std::function<Separation(const ClipAudio&)>;

/// Scores every test clip of `manifest` with `separator`. Throws EmptySplit
/// when there are no test clips and Io when a clip lacks reference stems.
EvaluationReport evaluate(const DatasetManifest& manifest,
                          const Separator& separator,
                          const EvaluationOptions& options,
                          std::string model_label, std::string arch,
                          int context);
EvaluationReport evaluate(const ModelCheckpoint& ckpt,
                          const DatasetManifest& manifest,
                          const EvaluationOptions& options);

/// Header `model\tarch\tcontext\tGNSDR\tGSIR\tGSAR` and one row with the
/// singing-voice global metrics.
void write_summary_tsv(std::ostream& out, const EvaluationReport& report);
/// One row per clip and source.
void write_clip_tsv(std::ostream& out, const EvaluationReport& report);
/// Everything, as JSON.
void write_report_json(std::ostream& out, const EvaluationReport& report);

}  // namespace vpnn
