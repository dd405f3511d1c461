#include <algorithm>
#include <charconv>
#include <future>
#include <iomanip>
#include <string>

#include <json.hpp>

#include "vpnn/error.hpp"
#include "vpnn/pipeline.hpp"

namespace vpnn {

namespace {

constexpr Index kForwardChunk = 512;

Separation masked_separation(const Waveform& mixture, const MaskPair& masks,
                             const ComplexSpectrogram& spec) {
  auto [vocal, music] = apply_mask_and_reconstruct(spec, masks);
  return {trim_after_synthesis(vocal, mixture.size()),
          trim_after_synthesis(music, mixture.size())};
}

Waveform at_analysis_rate(const Waveform& w) { return resample_to_16k(w); }

}  // namespace

Matrix predict_magnitudes(const Model& model, const Matrix& mixture) {
  const Planes input = encode_input(model, mixture);
  const Index frames = mixture.cols();
  Planes output;
  for (Index start = 0; start < frames; start += kForwardChunk) {
    const Index count = std::min(kForwardChunk, frames - start);
    Planes chunk;
    for (const Matrix& p : input) chunk.push_back(p.middleCols(start, count));
    Planes y = model_forward(model, chunk);
    if (output.empty()) {
      for (const Matrix& p : y) output.emplace_back(p.rows(), frames);
    }
    for (std::size_t k = 0; k < y.size(); ++k) {
      output[k].middleCols(start, count) = y[k];
    }
  }
  return decode_output(model, output);
}

Separation separate(const Model& model, const Waveform& mixture) {
  if (model.bins != kBins) {
    throw Error(ErrorKind::ShapeMismatch,
                "model was built for " + std::to_string(model.bins) +
                    " frequency bins; the analysis produces " +
                    std::to_string(kBins));
  }
  const Waveform mix = at_analysis_rate(mixture);
  const ComplexSpectrogram spec = analyze(mix);
  const MagnitudeMatrix normalized = normalize(magnitude(spec));
  const Matrix stacked = predict_magnitudes(model, normalized.data);
  const Matrix vocal = denormalize({stacked.topRows(kBins), normalized.scale});
  const Matrix music = denormalize({stacked.bottomRows(kBins), normalized.scale});
  return masked_separation(mix, soft_mask(vocal, music), spec);
}

Separation ideal_soft_mask(const Waveform& mixture, const Waveform& vocal,
                           const Waveform& music) {
  const ComplexSpectrogram spec = analyze(mixture);
  return masked_separation(
      mixture,
      soft_mask(magnitude(analyze(vocal)), magnitude(analyze(music))), spec);
}

Separation ideal_binary_mask(const Waveform& mixture, const Waveform& vocal,
                             const Waveform& music) {
  const ComplexSpectrogram spec = analyze(mixture);
  const Matrix v = magnitude(analyze(vocal));
  const Matrix m = magnitude(analyze(music));
  MaskPair masks;
  masks.m1 = (v.array() > m.array()).cast<double>().matrix();
  masks.m2 = (1.0 - masks.m1.array()).matrix();
  return masked_separation(mixture, masks, spec);
}

// ---------------------------------------------------------------------------

namespace {

ClipReport score_clip(const DatasetManifest& manifest, const ClipEntry& clip,
                      const Separator& separator,
                      const EvaluationOptions& options) {
  const ClipAudio audio = load_clip(manifest, clip, options.channel);
  if (!audio.vocal || !audio.music) {
    throw Error(ErrorKind::Io, "test clip " + clip.id +
                                   " is missing reference stems "
                                   "(vocal.wav, music.wav)");
  }
  const Separation sep = separator(audio);
  const std::size_t len = audio.mixture.size();
  if (sep.vocal.size() != len || sep.music.size() != len) {
    throw Error(ErrorKind::ShapeMismatch,
                "clip " + clip.id + ": separated length differs from mixture");
  }
  const BssProjector projector({audio.vocal->samples, audio.music->samples},
                               options.filter_len);
  auto score = [&](const Waveform& estimate, std::size_t source) {
    SourceScore s;
    s.bss = sdr_sir_sar(projector.decompose(estimate.samples, source));
    const double mix_sdr =
        sdr_sir_sar(projector.decompose(audio.mixture.samples, source)).sdr;
    s.nsdr = s.bss.sdr - mix_sdr;
    return s;
  };
  return {clip.id, len, score(sep.vocal, 0), score(sep.music, 1)};
}

GlobalMetrics aggregate_source(const std::vector<ClipReport>& clips,
                               SourceScore ClipReport::*source) {
  std::vector<ClipScore> scores;
  for (const auto& c : clips) {
    const SourceScore& s = c.*source;
    scores.push_back({s.nsdr, s.bss.sir, s.bss.sar, c.length});
  }
  return aggregate_global(scores);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

EvaluationReport evaluate(const DatasetManifest& manifest,
                          const Separator& separator,
                          const EvaluationOptions& options,
                          std::string model_label, std::string arch,
                          int context) {
  const std::vector<ClipEntry> test = manifest.split("test");
  if (test.empty()) {
    throw Error(ErrorKind::EmptySplit, "dataset " + manifest.root.string() +
                                           " has no test clips");
  }
  EvaluationReport report;
  report.model = std::move(model_label);
  report.arch = std::move(arch);
  report.context = context;
  report.clips.resize(test.size());

  const auto workers = static_cast<std::size_t>(std::max(1, options.workers));
  for (std::size_t start = 0; start < test.size(); start += workers) {
    const std::size_t end = std::min(test.size(), start + workers);
    if (workers == 1) {
      report.clips[start] = score_clip(manifest, test[start], separator, options);
      continue;
    }
    std::vector<std::future<ClipReport>> pending;
    for (std::size_t i = start; i < end; ++i) {
      pending.push_back(std::async(std::launch::async, score_clip,
                                   std::cref(manifest), std::cref(test[i]),
                                   std::cref(separator), std::cref(options)));
    }
    for (std::size_t i = start; i < end; ++i) {
      report.clips[i] = pending[i - start].get();
    }
  }
  report.vocal = aggregate_source(report.clips, &ClipReport::vocal);
  report.music = aggregate_source(report.clips, &ClipReport::music);
  return report;
}

EvaluationReport evaluate(const ModelCheckpoint& ckpt,
                          const DatasetManifest& manifest,
                          const EvaluationOptions& options) {
  const Model& model = ckpt.model;
  return evaluate(
      manifest,
      [&model](const ClipAudio& audio) { return separate(model, audio.mixture); },
      options, std::string(to_string(model.kind)), model.arch(),
      model.context());
}

void write_summary_tsv(std::ostream& out, const EvaluationReport& report) {
  out << "model\tarch\tcontext\tGNSDR\tGSIR\tGSAR\n";
  out << report.model << '\t' << report.arch << '\t' << report.context << '\t'
      << format_double(report.vocal.gnsdr) << '\t'
      << format_double(report.vocal.gsir) << '\t'
      << format_double(report.vocal.gsar) << '\n';
}

void write_clip_tsv(std::ostream& out, const EvaluationReport& report) {
  out << "clip_id\tlength\tsource\tSDR\tNSDR\tSIR\tSAR\n";
  for (const auto& c : report.clips) {
    for (const auto& [name, s] :
         {std::pair<const char*, const SourceScore&>{"vocal", c.vocal},
          std::pair<const char*, const SourceScore&>{"music", c.music}}) {
      out << c.id << '\t' << c.length << '\t' << name << '\t'
          << format_double(s.bss.sdr) << '\t' << format_double(s.nsdr) << '\t'
          << format_double(s.bss.sir) << '\t' << format_double(s.bss.sar)
          << '\n';
    }
  }
}

void write_report_json(std::ostream& out, const EvaluationReport& report) {
  using nlohmann::json;
  auto global = [](const GlobalMetrics& g) {
    return json{{"GNSDR", g.gnsdr}, {"GSIR", g.gsir}, {"GSAR", g.gsar}};
  };
  auto source = [](const SourceScore& s) {
    return json{{"SDR", s.bss.sdr}, {"NSDR", s.nsdr}, {"SIR", s.bss.sir},
                {"SAR", s.bss.sar}};
  };
  json clips = json::array();
  for (const auto& c : report.clips) {
    clips.push_back({{"clip_id", c.id},
                     {"length", c.length},
                     {"vocal", source(c.vocal)},
                     {"music", source(c.music)}});
  }
  const json doc{{"model", report.model},
                 {"arch", report.arch},
                 {"context", report.context},
                 {"vocal", global(report.vocal)},
                 {"music", global(report.music)},
                 {"clips", clips}};
  out << doc.dump(2) << '\n';
}

}  // namespace vpnn
