#pragma once

// Paired-stem corpora laid out as
//   <root>/manifest.tsv                       clip_id  split  duration
//   <root>/<clip_id>/{mix.wav,vocal.wav,music.wav}
// plus the synthetic generator and training-set construction.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vpnn/audio.hpp"
#include "vpnn/config.hpp"
#include "vpnn/model.hpp"

namespace vpnn {

struct ClipEntry {
  std::string id;
  std::string split;  // "train" or "test"
  double duration = 0.0;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<ClipEntry> clips;

  std::vector<ClipEntry> split(const std::string& name) const;
  std::filesystem::path clip_dir(const ClipEntry& clip) const;
};

DatasetManifest load_manifest(const std::filesystem::path& root);
void write_manifest(const DatasetManifest& manifest);

/// 16 kHz audio of one clip. When both stems exist the mixture is their
/// sample-wise sum; otherwise it is read from mix.wav and the stems are
/// empty.
struct ClipAudio {
  Waveform mixture;
  std::optional<Waveform> vocal;
  std::optional<Waveform> music;
};

/// Throws Io for missing files, InvalidArgument for stems of different
/// lengths.
ClipAudio load_clip(const DatasetManifest& manifest, const ClipEntry& clip,
                    int channel = 0);

// ---------------------------------------------------------------------------
// Analysis framing. Signals are zero-padded by window - hop samples at the
// front and enough at the back that every original sample is covered by a
// full set of overlapping frames; synthesis output is trimmed back.

Waveform pad_for_analysis(const Waveform& w);
Waveform trim_after_synthesis(const Waveform& w, std::size_t original_len);
ComplexSpectrogram analyze(const Waveform& w);

// ---------------------------------------------------------------------------

struct SynthOptions {
  std::uint64_t seed = 0;
  int train_clips = 6;
  int test_clips = 4;
  double duration_s = 4.0;
};

/// Writes float32 stems and mixture at 16 kHz plus manifest.tsv under
/// `root`. "vocal" is a vibrato tone (f0 in [200,400] Hz, two overtones)
/// with note changes; "music" is high-passed noise plus a low triad in
/// [80,160] Hz. Bit-identical output per seed.
DatasetManifest synth_dataset(const std::filesystem::path& root,
                              const SynthOptions& options);

// ---------------------------------------------------------------------------

struct TrainingSet {
  Planes inputs;   // encoded mixture frames, all train clips concatenated
  Planes targets;  // encoded [vocal; music] frames
  Index frames = 0;
  std::vector<std::vector<Index>> batches;  // first-epoch batch order
};

/// Frame indices shuffled by (seed, epoch) and cut into batches.
std::vector<std::vector<Index>> make_batches(Index frames, Index batch_frames,
                                             std::uint64_t seed,
                                             std::uint64_t epoch);

/// Train split only. Throws EmptySplit without train clips, Io for missing
/// stems, InvalidArgument for length-mismatched stems.
TrainingSet build_training_set(const DatasetManifest& manifest,
                               const ExperimentConfig& cfg,
                               const Model& model);

}  // namespace vpnn
