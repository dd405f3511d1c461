#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace vpnn::detail {

/// Real-input FFT returning the nfft/2 + 1 non-negative-frequency bins, and
/// its inverse (scaled by 1/nfft). Not thread-safe; use one per thread.
class RealFft {
 public:
  RealFft() { fft_.SetFlag(Eigen::FFT<double>::HalfSpectrum); }

  void forward(const std::vector<double>& in,
               std::vector<std::complex<double>>& out) {
    fft_.fwd(out, in);
  }

  void inverse(const std::vector<std::complex<double>>& in, std::size_t nfft,
               std::vector<double>& out) {
    fft_.inv(out, in, static_cast<Eigen::Index>(nfft));
  }

 private:
  Eigen::FFT<double> fft_;
};

/// Smallest 2^a 3^b 5^c >= n.
inline std::size_t good_fft_size(std::size_t n) {
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2u, 3u, 5u}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

}  // namespace vpnn::detail
