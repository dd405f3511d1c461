#include "vpnn/eval.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "fft_util.hpp"
#include "vpnn/error.hpp"

namespace vpnn {

namespace {

using Complex = std::complex<double>;

constexpr double kRelativeJitter = 1e-10;
constexpr double kTinyEnergy = 1e-20;

std::vector<Complex> spectrum_of(std::span<const double> x, std::size_t nfft,
                                 detail::RealFft& fft) {
  std::vector<double> padded(nfft, 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  std::vector<Complex> out;
  fft.forward(padded, out);
  return out;
}

// c(k) = Σ_u a(u) b(u + k), returned circularly indexed (negative k at
// nfft + k).
std::vector<double> cross_correlation(const std::vector<Complex>& a,
                                      const std::vector<Complex>& b,
                                      std::size_t nfft, detail::RealFft& fft) {
  std::vector<Complex> prod(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) prod[k] = std::conj(a[k]) * b[k];
  std::vector<double> out;
  fft.inverse(prod, nfft, out);
  return out;
}

Eigen::LLT<Eigen::MatrixXd> factor(Eigen::MatrixXd gram) {
  const double jitter =
      kRelativeJitter * gram.diagonal().mean() + kTinyEnergy;
  gram.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::Degenerate,
                "bss: reference Gram matrix is not positive definite");
  }
  return llt;
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double ratio_db(double num, double den) {
  if (den < kTinyEnergy) {
    return num < kTinyEnergy ? -kMetricCapDb : kMetricCapDb;
  }
  if (num <= 0.0) return -kMetricCapDb;
  return std::clamp(10.0 * std::log10(num / den), -kMetricCapDb, kMetricCapDb);
}

}  // namespace

BssProjector::BssProjector(std::vector<std::vector<double>> references,
                           std::size_t filter_len)
    : refs_(std::move(references)), filter_len_(filter_len) {
  if (refs_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "bss: no reference signals");
  }
  if (filter_len_ == 0) {
    throw Error(ErrorKind::InvalidArgument, "bss: filter_len must be >= 1");
  }
  length_ = refs_.front().size();
  for (std::size_t j = 0; j < refs_.size(); ++j) {
    if (refs_[j].size() != length_) {
      throw Error(ErrorKind::InvalidArgument,
                  "bss: reference lengths differ");
    }
    if (energy(refs_[j]) == 0.0) {
      throw Error(ErrorKind::Degenerate,
                  "bss: reference " + std::to_string(j) + " is all zero");
    }
  }
  if (length_ == 0) {
    throw Error(ErrorKind::InvalidArgument, "bss: empty reference signals");
  }

  nfft_ = detail::good_fft_size(length_ + filter_len_ - 1);
  detail::RealFft fft;
  for (const auto& r : refs_) ref_spectra_.push_back(spectrum_of(r, nfft_, fft));

  const std::size_t n = refs_.size();
  const auto L = static_cast<Eigen::Index>(filter_len_);
  Eigen::MatrixXd gram(n * L, n * L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const std::vector<double> c =
          cross_correlation(ref_spectra_[i], ref_spectra_[j], nfft_, fft);
      // <r_i delayed d1, r_j delayed d2> = c_ij(d1 - d2)
      for (Eigen::Index d1 = 0; d1 < L; ++d1) {
        for (Eigen::Index d2 = 0; d2 < L; ++d2) {
          const Eigen::Index lag = d1 - d2;
          const double v = c[lag >= 0 ? lag : nfft_ + lag];
          gram(i * L + d1, j * L + d2) = v;
          gram(j * L + d2, i * L + d1) = v;
        }
      }
    }
  }
  joint_ = factor(gram);
  for (std::size_t j = 0; j < n; ++j) {
    single_.push_back(factor(gram.block(j * L, j * L, L, L)));
  }
}

Eigen::VectorXd BssProjector::delayed_correlation(std::span<const double> x,
                                                  std::size_t j) const {
  detail::RealFft fft;
  const std::vector<double> c = cross_correlation(
      ref_spectra_[j], spectrum_of(x, nfft_, fft), nfft_, fft);
  Eigen::VectorXd out(static_cast<Eigen::Index>(filter_len_));
  for (std::size_t d = 0; d < filter_len_; ++d) out(d) = c[d];
  return out;
}

std::vector<double> BssProjector::synthesize(
    const Eigen::VectorXd& coeffs, std::span<const std::size_t> sources) const {
  detail::RealFft fft;
  std::vector<Complex> acc(nfft_ / 2 + 1, Complex(0.0, 0.0));
  for (std::size_t s = 0; s < sources.size(); ++s) {
    std::vector<double> filt(nfft_, 0.0);
    for (std::size_t d = 0; d < filter_len_; ++d) {
      filt[d] = coeffs(s * filter_len_ + d);
    }
    std::vector<Complex> spec;
    fft.forward(filt, spec);
    const auto& ref = ref_spectra_[sources[s]];
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += spec[k] * ref[k];
  }
  std::vector<double> out;
  fft.inverse(acc, nfft_, out);
  out.resize(length_ + filter_len_ - 1);
  return out;
}

Decomposition BssProjector::decompose(std::span<const double> estimate,
                                      std::size_t target_index) const {
  if (estimate.size() != length_) {
    throw Error(ErrorKind::InvalidArgument,
                "bss: estimate has " + std::to_string(estimate.size()) +
                    " samples, references have " + std::to_string(length_));
  }
  if (target_index >= refs_.size()) {
    throw Error(ErrorKind::InvalidArgument, "bss: target index out of range");
  }
  const auto L = static_cast<Eigen::Index>(filter_len_);
  const std::size_t n = refs_.size();

  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n) * L);
  for (std::size_t j = 0; j < n; ++j) {
    rhs.segment(j * L, L) = delayed_correlation(estimate, j);
  }

  const Eigen::VectorXd target_coeffs =
      single_[target_index].solve(rhs.segment(target_index * L, L));
  const std::size_t target_source[] = {target_index};
  std::vector<double> target = synthesize(target_coeffs, target_source);

  const Eigen::VectorXd joint_coeffs = joint_.solve(rhs);
  std::vector<std::size_t> all(n);
  for (std::size_t j = 0; j < n; ++j) all[j] = j;
  const std::vector<double> joint = synthesize(joint_coeffs, all);

  const std::size_t padded = length_ + filter_len_ - 1;
  Decomposition d;
  d.target = std::move(target);
  d.interference.resize(padded);
  d.artifact.resize(padded);
  for (std::size_t t = 0; t < padded; ++t) {
    const double e = t < length_ ? estimate[t] : 0.0;
    d.interference[t] = joint[t] - d.target[t];
    d.artifact[t] = e - d.target[t] - d.interference[t];
  }
  return d;
}

Decomposition bss_decompose(std::span<const double> estimate,
                            const std::vector<std::vector<double>>& refs,
                            std::size_t target_index, std::size_t filter_len) {
  return BssProjector(refs, filter_len).decompose(estimate, target_index);
}

BssResult sdr_sir_sar(const Decomposition& d) {
  const std::size_t n = d.target.size();
  if (d.interference.size() != n || d.artifact.size() != n) {
    throw Error(ErrorKind::ShapeMismatch,
                "sdr_sir_sar: decomposition components differ in length");
  }
  double target = 0.0, interf = 0.0, artif = 0.0, distortion = 0.0,
         target_interf = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    target += d.target[t] * d.target[t];
    interf += d.interference[t] * d.interference[t];
    artif += d.artifact[t] * d.artifact[t];
    const double e = d.interference[t] + d.artifact[t];
    distortion += e * e;
    const double s = d.target[t] + d.interference[t];
    target_interf += s * s;
  }
  return {ratio_db(target, distortion), ratio_db(target, interf),
          ratio_db(target_interf, artif)};
}

double nsdr(const BssProjector& projector, std::span<const double> estimate,
            std::span<const double> mixture, std::size_t target_index) {
  const double est = sdr_sir_sar(projector.decompose(estimate, target_index)).sdr;
  const double mix = sdr_sir_sar(projector.decompose(mixture, target_index)).sdr;
  return est - mix;
}

double nsdr(std::span<const double> estimate, std::span<const double> mixture,
            const std::vector<std::vector<double>>& refs,
            std::size_t target_index, std::size_t filter_len) {
  return nsdr(BssProjector(refs, filter_len), estimate, mixture, target_index);
}

GlobalMetrics aggregate_global(std::span<const ClipScore> clips) {
  if (clips.empty()) {
    throw Error(ErrorKind::EmptySplit, "aggregate_global: no clips");
  }
  double total = 0.0;
  for (const auto& c : clips) total += static_cast<double>(c.length);
  if (!(total > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "aggregate_global: total clip length is zero");
  }
  GlobalMetrics g;
  for (const auto& c : clips) {
    const double w = static_cast<double>(c.length) / total;
    g.gnsdr += w * c.nsdr;
    g.gsir += w * c.sir;
    g.gsar += w * c.sar;
  }
  return g;
}

}  // namespace vpnn
