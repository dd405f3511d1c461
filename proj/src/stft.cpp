#include <cmath>
#include <numbers>
#include <string>

#include "fft_util.hpp"
#include "vpnn/audio.hpp"
#include "vpnn/error.hpp"

namespace vpnn {

const std::vector<double>& analysis_window() {
  static const std::vector<double> window = [] {
    std::vector<double> w(kWindowLength);
    for (Index n = 0; n < kWindowLength; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kWindowLength);
    }
    return w;
  }();
  return window;
}

ComplexSpectrogram stft(const Waveform& w) {
  if (w.sample_rate != kAnalysisRate) {
    throw Error(ErrorKind::InvalidArgument,
                "stft: expected " + std::to_string(kAnalysisRate) +
                    " Hz input, got " + std::to_string(w.sample_rate));
  }
  const auto len = static_cast<Index>(w.samples.size());
  if (len < kWindowLength) {
    throw Error(ErrorKind::InvalidArgument,
                "stft: signal of " + std::to_string(len) +
                    " samples is shorter than one window");
  }
  const Index frames = 1 + (len - kWindowLength) / kHop;
  const auto& window = analysis_window();

  ComplexSpectrogram out;
  out.original_len = w.samples.size();
  out.bins.resize(kBins, frames);

  detail::RealFft fft;
  std::vector<double> frame(kWindowLength);
  std::vector<std::complex<double>> spectrum;
  for (Index t = 0; t < frames; ++t) {
    const double* src = w.samples.data() + t * kHop;
    for (Index n = 0; n < kWindowLength; ++n) frame[n] = src[n] * window[n];
    fft.forward(frame, spectrum);
    for (Index k = 0; k < kBins; ++k) out.bins(k, t) = spectrum[k];
  }
  return out;
}

Waveform istft(const ComplexSpectrogram& s) {
  if (s.bins.rows() != kBins) {
    throw Error(ErrorKind::ShapeMismatch,
                "istft: expected " + std::to_string(kBins) + " bins, got " +
                    std::to_string(s.bins.rows()));
  }
  const Index frames = s.bins.cols();
  const auto needed = static_cast<std::size_t>(
      frames > 0 ? (frames - 1) * kHop + kWindowLength : 0);
  if (needed > s.original_len) {
    throw Error(ErrorKind::ShapeMismatch,
                "istft: frame count exceeds the recorded signal length");
  }
  const auto& window = analysis_window();

  std::vector<double> acc(s.original_len, 0.0);
  std::vector<double> weight(s.original_len, 0.0);
  detail::RealFft fft;
  std::vector<std::complex<double>> spectrum(kBins);
  std::vector<double> frame;
  for (Index t = 0; t < frames; ++t) {
    for (Index k = 0; k < kBins; ++k) spectrum[k] = s.bins(k, t);
    fft.inverse(spectrum, kWindowLength, frame);
    const std::size_t offset = static_cast<std::size_t>(t * kHop);
    for (Index n = 0; n < kWindowLength; ++n) {
      acc[offset + n] += frame[n] * window[n];
      weight[offset + n] += window[n] * window[n];
    }
  }

  Waveform out;
  out.sample_rate = kAnalysisRate;
  out.samples.resize(s.original_len, 0.0);
  for (std::size_t i = 0; i < s.original_len; ++i) {
    if (weight[i] > 1e-10) out.samples[i] = acc[i] / weight[i];
  }
  return out;
}

Matrix magnitude(const ComplexSpectrogram& s) { return s.bins.cwiseAbs(); }

}  // namespace vpnn
