#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vpnn/vecmat.hpp"

namespace vpnn {

inline constexpr int kAnalysisRate = 16000;
inline constexpr Index kWindowLength = 1024;
inline constexpr Index kHop = 256;
inline constexpr Index kBins = kWindowLength / 2 + 1;

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kAnalysisRate;

  std::size_t size() const { return samples.size(); }
};

using ComplexMatrix = Eigen::MatrixXcd;

/// One column per frame; frame t covers samples [t·hop, t·hop + window).
struct ComplexSpectrogram {
  ComplexMatrix bins;  // kBins x frames
  std::size_t original_len = 0;

  Index frames() const { return bins.cols(); }
};

// ---------------------------------------------------------------------------
// WAV

enum class SampleFormat { Pcm16, Float32 };

struct WavData {
  int sample_rate = 0;
  SampleFormat format = SampleFormat::Pcm16;
  std::vector<std::vector<double>> channels;
};

/// RIFF/WAVE, PCM16 or IEEE float32 (plain or WAVE_FORMAT_EXTENSIBLE), any
/// channel count. Throws Parse on malformed or unsupported files, Io when the
/// file cannot be opened.
WavData wav_read_all(const std::filesystem::path& path);
/// A single channel of a file (stereo: 0 = left, 1 = right).
Waveform wav_read(const std::filesystem::path& path, int channel = 0);
void wav_write(const std::filesystem::path& path, const Waveform& w,
               SampleFormat format = SampleFormat::Pcm16);
void wav_write(const std::filesystem::path& path, const WavData& data);

// ---------------------------------------------------------------------------
// Resampling

/// Band-limited rational-ratio downsampling (Kaiser-windowed sinc, 64 taps
/// per polyphase branch, cutoff at the output Nyquist). Output length is
/// round(len · target / source). Throws InvalidArgument for upsampling.
Waveform resample(const Waveform& w, int target_rate);
Waveform resample_to_16k(const Waveform& w);

// ---------------------------------------------------------------------------
// STFT

/// Periodic Hann window of kWindowLength samples.
const std::vector<double>& analysis_window();

/// Frames start at t·hop; trailing samples that do not fill a window are not
/// analysed. Throws InvalidArgument for signals shorter than one window or
/// rates other than 16 kHz.
ComplexSpectrogram stft(const Waveform& w);
/// Weighted overlap-add, normalized by the summed squared window per sample.
/// Samples no frame covers come back as zero.
Waveform istft(const ComplexSpectrogram& s);

Matrix magnitude(const ComplexSpectrogram& s);

// ---------------------------------------------------------------------------
// Masking

struct MaskPair {
  Matrix m1;
  Matrix m2;
};

inline constexpr double kMaskEpsilon = 1e-12;

/// m_k = mag_k / (mag1 + mag2 + ε), then renormalized so m1 + m2 = 1.
MaskPair soft_mask(const Matrix& mag1, const Matrix& mag2);

/// Each source keeps the mixture phase with magnitude mask_k · |mix|.
std::pair<Waveform, Waveform> apply_mask_and_reconstruct(
    const ComplexSpectrogram& mix, const MaskPair& masks);

}  // namespace vpnn
