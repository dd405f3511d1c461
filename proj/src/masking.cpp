#include <string>

#include "vpnn/audio.hpp"
#include "vpnn/error.hpp"

namespace vpnn {

MaskPair soft_mask(const Matrix& mag1, const Matrix& mag2) {
  if (mag1.rows() != mag2.rows() || mag1.cols() != mag2.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "soft_mask: magnitude shapes differ");
  }
  if ((mag1.size() > 0 && mag1.minCoeff() < 0.0) ||
      (mag2.size() > 0 && mag2.minCoeff() < 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "soft_mask: magnitudes must be nonnegative");
  }
  MaskPair masks{Matrix(mag1.rows(), mag1.cols()),
                 Matrix(mag1.rows(), mag1.cols())};
  for (Index j = 0; j < mag1.cols(); ++j) {
    for (Index i = 0; i < mag1.rows(); ++i) {
      const double denom = mag1(i, j) + mag2(i, j) + kMaskEpsilon;
      const double a = mag1(i, j) / denom;
      const double b = mag2(i, j) / denom;
      const double total = a + b;
      // Silent in both estimates: split evenly.
      masks.m1(i, j) = total > 0.0 ? a / total : 0.5;
      masks.m2(i, j) = total > 0.0 ? 1.0 - masks.m1(i, j) : 0.5;
    }
  }
  return masks;
}

std::pair<Waveform, Waveform> apply_mask_and_reconstruct(
    const ComplexSpectrogram& mix, const MaskPair& masks) {
  const Index rows = mix.bins.rows();
  const Index cols = mix.bins.cols();
  if (masks.m1.rows() != rows || masks.m1.cols() != cols ||
      masks.m2.rows() != rows || masks.m2.cols() != cols) {
    throw Error(ErrorKind::ShapeMismatch,
                "apply_mask_and_reconstruct: mask shape " +
                    std::to_string(masks.m1.rows()) + "x" +
                    std::to_string(masks.m1.cols()) +
                    " differs from spectrogram " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  // mask · |X| · e^{i∠X} = mask · X
  ComplexSpectrogram s1{mix.bins.cwiseProduct(masks.m1.cast<std::complex<double>>()),
                        mix.original_len};
  ComplexSpectrogram s2{mix.bins.cwiseProduct(masks.m2.cast<std::complex<double>>()),
                        mix.original_len};
  return {istft(s1), istft(s2)};
}

}  // namespace vpnn
