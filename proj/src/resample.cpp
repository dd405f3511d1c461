#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>

#include "vpnn/audio.hpp"
#include "vpnn/error.hpp"

namespace vpnn {

namespace {

constexpr int kTapsPerPhase = 64;
constexpr double kKaiserBeta = 8.0;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double kaiser(double x, double half_width) {
  const double r = x / half_width;
  if (r <= -1.0 || r >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

}  // namespace

Waveform resample(const Waveform& w, int target_rate) {
  if (w.sample_rate <= 0 || target_rate <= 0) {
    throw Error(ErrorKind::InvalidArgument, "resample: rates must be > 0");
  }
  if (target_rate > w.sample_rate) {
    throw Error(ErrorKind::InvalidArgument,
                "resample: upsampling " + std::to_string(w.sample_rate) +
                    " Hz to " + std::to_string(target_rate) +
                    " Hz is not supported");
  }
  if (target_rate == w.sample_rate) return w;

  const std::int64_t g = std::gcd(w.sample_rate, target_rate);
  const std::int64_t up = target_rate / g;
  const std::int64_t down = w.sample_rate / g;
  const double cutoff = static_cast<double>(target_rate) / w.sample_rate;
  constexpr int half = kTapsPerPhase / 2;

  // taps[phase][k] weights input sample base + k - half + 1 for an output
  // at fractional offset phase / up past `base`.
  std::vector<std::array<double, kTapsPerPhase>> taps(up);
  for (std::int64_t phase = 0; phase < up; ++phase) {
    const double frac = static_cast<double>(phase) / up;
    double sum = 0.0;
    for (int k = 0; k < kTapsPerPhase; ++k) {
      const double tau = static_cast<double>(k - half + 1) - frac;
      const double h = cutoff * sinc(cutoff * tau) * kaiser(tau, half);
      taps[phase][k] = h;
      sum += h;
    }
    for (double& h : taps[phase]) h /= sum;
  }

  const auto in_len = static_cast<std::int64_t>(w.samples.size());
  const std::int64_t out_len = (in_len * up + down / 2) / down;
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<std::size_t>(out_len));
  for (std::int64_t n = 0; n < out_len; ++n) {
    const std::int64_t pos = n * down;
    const std::int64_t base = pos / up;
    const auto& h = taps[pos % up];
    double acc = 0.0;
    for (int k = 0; k < kTapsPerPhase; ++k) {
      const std::int64_t idx = base + k - half + 1;
      if (idx >= 0 && idx < in_len) acc += h[k] * w.samples[idx];
    }
    out.samples[n] = acc;
  }
  return out;
}

Waveform resample_to_16k(const Waveform& w) {
  return resample(w, kAnalysisRate);
}

}  // namespace vpnn
