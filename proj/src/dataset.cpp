#include "vpnn/dataset.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "vpnn/error.hpp"

namespace vpnn {

namespace fs = std::filesystem;

std::vector<ClipEntry> DatasetManifest::split(const std::string& name) const {
  std::vector<ClipEntry> out;
  std::copy_if(clips.begin(), clips.end(), std::back_inserter(out),
               [&](const ClipEntry& c) { return c.split == name; });
  return out;
}

fs::path DatasetManifest::clip_dir(const ClipEntry& clip) const {
  return root / clip.id;
}

DatasetManifest load_manifest(const fs::path& root) {
  const fs::path path = root / "manifest.tsv";
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  DatasetManifest m;
  m.root = root;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    ClipEntry c;
    std::string duration;
    if (!std::getline(fields, c.id, '\t') ||
        !std::getline(fields, c.split, '\t') ||
        !std::getline(fields, duration, '\t')) {
      throw Error(ErrorKind::Parse, path.string() + ":" +
                                        std::to_string(line_no) +
                                        ": expected clip_id, split, duration");
    }
    if (line_no == 1 && c.id == "clip_id") continue;  // header
    if (c.split != "train" && c.split != "test") {
      throw Error(ErrorKind::Parse, path.string() + ":" +
                                        std::to_string(line_no) +
                                        ": split must be train or test");
    }
    try {
      c.duration = std::stod(duration);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, path.string() + ":" +
                                        std::to_string(line_no) +
                                        ": bad duration '" + duration + "'");
    }
    m.clips.push_back(std::move(c));
  }
  return m;
}

void write_manifest(const DatasetManifest& manifest) {
  const fs::path path = manifest.root / "manifest.tsv";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "clip_id\tsplit\tduration\n";
  out.precision(17);
  for (const auto& c : manifest.clips) {
    out << c.id << '\t' << c.split << '\t' << c.duration << '\n';
  }
}

ClipAudio load_clip(const DatasetManifest& manifest, const ClipEntry& clip,
                    int channel) {
  const fs::path dir = manifest.clip_dir(clip);
  const fs::path vocal_path = dir / "vocal.wav";
  const fs::path music_path = dir / "music.wav";
  ClipAudio audio;
  if (fs::exists(vocal_path) && fs::exists(music_path)) {
    Waveform vocal = resample_to_16k(wav_read(vocal_path, channel));
    Waveform music = resample_to_16k(wav_read(music_path, channel));
    if (vocal.size() != music.size()) {
      throw Error(ErrorKind::InvalidArgument,
                  "clip " + clip.id + ": vocal and music stems differ in length (" +
                      std::to_string(vocal.size()) + " vs " +
                      std::to_string(music.size()) + " samples)");
    }
    audio.mixture.sample_rate = kAnalysisRate;
    audio.mixture.samples.resize(vocal.size());
    for (std::size_t i = 0; i < vocal.size(); ++i) {
      audio.mixture.samples[i] = vocal.samples[i] + music.samples[i];
    }
    audio.vocal = std::move(vocal);
    audio.music = std::move(music);
  } else {
    const fs::path mix_path = dir / "mix.wav";
    if (!fs::exists(mix_path)) {
      throw Error(ErrorKind::Io, "clip " + clip.id +
                                     ": neither stems nor mix.wav found in " +
                                     dir.string());
    }
    audio.mixture = resample_to_16k(wav_read(mix_path, channel));
  }
  return audio;
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kFrontPad = kWindowLength - kHop;
}

Waveform pad_for_analysis(const Waveform& w) {
  std::size_t padded = kFrontPad + w.size() + kFrontPad;
  const std::size_t rem = (padded - kWindowLength) % kHop;
  if (rem != 0) padded += kHop - rem;
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.assign(padded, 0.0);
  std::copy(w.samples.begin(), w.samples.end(),
            out.samples.begin() + static_cast<std::ptrdiff_t>(kFrontPad));
  return out;
}

Waveform trim_after_synthesis(const Waveform& w, std::size_t original_len) {
  if (w.size() < kFrontPad + original_len) {
    throw Error(ErrorKind::ShapeMismatch,
                "trim_after_synthesis: signal shorter than its padding");
  }
  Waveform out;
  out.sample_rate = w.sample_rate;
  const auto first = w.samples.begin() + static_cast<std::ptrdiff_t>(kFrontPad);
  out.samples.assign(first, first + static_cast<std::ptrdiff_t>(original_len));
  return out;
}

ComplexSpectrogram analyze(const Waveform& w) { return stft(pad_for_analysis(w)); }

// ---------------------------------------------------------------------------

namespace {

struct Biquad {
  double b0, b1, b2, a1, a2;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;

  static Biquad highpass(double cutoff, double rate) {
    const double w0 = 2.0 * std::numbers::pi * cutoff / rate;
    const double alpha = std::sin(w0) / (2.0 * std::numbers::sqrt2 / 2.0);
    const double c = std::cos(w0);
    const double a0 = 1.0 + alpha;
    return {(1.0 + c) / 2.0 / a0, -(1.0 + c) / a0, (1.0 + c) / 2.0 / a0,
            -2.0 * c / a0, (1.0 - alpha) / a0};
  }

  double operator()(double x) {
    const double y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = x;
    y2 = y1;
    y1 = y;
    return y;
  }
};

// Raised-cosine fade of `ramp` samples at both ends of [0, len).
double note_envelope(std::size_t i, std::size_t len, std::size_t ramp) {
  const std::size_t edge = std::min(i, len - 1 - i);
  if (edge >= ramp) return 1.0;
  return 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(edge) / ramp);
}

std::vector<double> synth_vocal(std::mt19937_64& rng, std::size_t n) {
  constexpr double rate = kAnalysisRate;
  std::uniform_real_distribution<double> f0_dist(200.0, 400.0);
  std::uniform_real_distribution<double> note_len(0.35, 0.9);
  std::uniform_real_distribution<double> gap_len(0.0, 0.15);
  std::uniform_real_distribution<double> vib_rate(4.5, 6.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> out(n, 0.0);
  const std::array<double, 3> partials{1.0, 0.5, 0.25};
  const double gain = 0.3 / (partials[0] + partials[1] + partials[2]);
  double phase = 0.0;
  std::size_t pos = 0;
  while (pos < n) {
    const auto len = std::min<std::size_t>(
        n - pos, static_cast<std::size_t>(note_len(rng) * rate));
    const double f0 = f0_dist(rng);
    const double vr = vib_rate(rng);
    const double vphase = 2.0 * std::numbers::pi * unit(rng);
    for (std::size_t i = 0; i < len; ++i) {
      const double t = i / rate;
      const double f = f0 * (1.0 + 0.015 * std::sin(2.0 * std::numbers::pi * vr * t + vphase));
      phase += 2.0 * std::numbers::pi * f / rate;
      double v = 0.0;
      for (std::size_t h = 0; h < partials.size(); ++h) {
        v += partials[h] * std::sin(static_cast<double>(h + 1) * phase);
      }
      out[pos + i] = gain * note_envelope(i, len, 320) * v;
    }
    pos += len;
    pos += static_cast<std::size_t>(gap_len(rng) * rate);
  }
  return out;
}

std::vector<double> synth_music(std::mt19937_64& rng, std::size_t n) {
  constexpr double rate = kAnalysisRate;
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> root_dist(80.0, 160.0 / 1.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> out(n, 0.0);
  Biquad hp1 = Biquad::highpass(2500.0, rate);
  Biquad hp2 = Biquad::highpass(2500.0, rate);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.08 * hp2(hp1(noise(rng)));

  // A triad (root, major third, fifth) that changes every two seconds.
  const auto chord_len = static_cast<std::size_t>(2.0 * rate);
  const std::array<double, 3> ratios{1.0, 1.25, 1.5};
  std::array<double, 3> phases{};
  for (std::size_t start = 0; start < n; start += chord_len) {
    const std::size_t len = std::min(chord_len, n - start);
    const double root = root_dist(rng);
    for (double& p : phases) p = 2.0 * std::numbers::pi * unit(rng);
    for (std::size_t i = 0; i < len; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < ratios.size(); ++k) {
        v += std::sin(phases[k] + 2.0 * std::numbers::pi * root * ratios[k] *
                                      static_cast<double>(i) / rate);
      }
      out[start + i] += 0.1 * note_envelope(i, len, 160) * v;
    }
  }
  return out;
}

}  // namespace

DatasetManifest synth_dataset(const fs::path& root, const SynthOptions& options) {
  if (options.duration_s < 1.0) {
    throw Error(ErrorKind::InvalidArgument, "synth: duration must be >= 1 s");
  }
  if (options.train_clips < 0 || options.test_clips < 0) {
    throw Error(ErrorKind::InvalidArgument, "synth: clip counts must be >= 0");
  }
  fs::create_directories(root);
  std::mt19937_64 rng(options.seed);
  const auto n = static_cast<std::size_t>(std::llround(options.duration_s * kAnalysisRate));

  DatasetManifest manifest;
  manifest.root = root;
  const int total = options.train_clips + options.test_clips;
  for (int c = 0; c < total; ++c) {
    char id[32];
    std::snprintf(id, sizeof id, "synth%03d", c);
    ClipEntry entry{id, c < options.train_clips ? "train" : "test",
                    static_cast<double>(n) / kAnalysisRate};
    Waveform vocal{synth_vocal(rng, n), kAnalysisRate};
    Waveform music{synth_music(rng, n), kAnalysisRate};
    Waveform mix{std::vector<double>(n), kAnalysisRate};
    for (std::size_t i = 0; i < n; ++i) {
      // float32 files: round each stem first so the stored mixture is exactly
      // the sum of the stored stems at double precision.
      vocal.samples[i] = static_cast<float>(vocal.samples[i]);
      music.samples[i] = static_cast<float>(music.samples[i]);
      mix.samples[i] = vocal.samples[i] + music.samples[i];
    }
    const fs::path dir = manifest.clip_dir(entry);
    fs::create_directories(dir);
    wav_write(dir / "vocal.wav", vocal, SampleFormat::Float32);
    wav_write(dir / "music.wav", music, SampleFormat::Float32);
    wav_write(dir / "mix.wav", mix, SampleFormat::Float32);
    manifest.clips.push_back(std::move(entry));
  }
  write_manifest(manifest);
  return manifest;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<Index>> make_batches(Index frames, Index batch_frames,
                                             std::uint64_t seed,
                                             std::uint64_t epoch) {
  if (batch_frames < 1) {
    throw Error(ErrorKind::InvalidArgument, "batch_frames must be >= 1");
  }
  std::vector<Index> order(static_cast<std::size_t>(frames));
  std::iota(order.begin(), order.end(), Index{0});
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch),
                    static_cast<std::uint32_t>(epoch >> 32)};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Index>> batches;
  for (std::size_t start = 0; start < order.size();
       start += static_cast<std::size_t>(batch_frames)) {
    const std::size_t end =
        std::min(order.size(), start + static_cast<std::size_t>(batch_frames));
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

TrainingSet build_training_set(const DatasetManifest& manifest,
                               const ExperimentConfig& cfg,
                               const Model& model) {
  const std::vector<ClipEntry> train = manifest.split("train");
  if (train.empty()) {
    throw Error(ErrorKind::EmptySplit, "dataset " + manifest.root.string() +
                                           " has no train clips");
  }
  std::vector<Planes> inputs, targets;
  Index frames = 0;
  for (const auto& clip : train) {
    const ClipAudio audio = load_clip(manifest, clip, cfg.channel);
    if (!audio.vocal || !audio.music) {
      throw Error(ErrorKind::Io, "train clip " + clip.id +
                                     " lacks vocal.wav/music.wav stems");
    }
    const MagnitudeMatrix mix = normalize(magnitude(analyze(audio.mixture)));
    const Matrix vocal = normalize(magnitude(analyze(*audio.vocal)), mix.scale).data;
    const Matrix music = normalize(magnitude(analyze(*audio.music)), mix.scale).data;
    inputs.push_back(encode_input(model, mix.data));
    targets.push_back(encode_target(model, vocal, music));
    frames += mix.data.cols();
  }

  auto concat = [frames](const std::vector<Planes>& parts) {
    Planes out;
    for (std::size_t k = 0; k < parts.front().size(); ++k) {
      Matrix m(parts.front()[k].rows(), frames);
      Index col = 0;
      for (const auto& p : parts) {
        m.middleCols(col, p[k].cols()) = p[k];
        col += p[k].cols();
      }
      out.push_back(std::move(m));
    }
    return out;
  };

  TrainingSet set;
  set.inputs = concat(inputs);
  set.targets = concat(targets);
  set.frames = frames;
  set.batches = make_batches(frames, cfg.batch_frames, cfg.seed, 0);
  return set;
}

}  // namespace vpnn
