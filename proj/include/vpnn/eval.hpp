#pragma once

// Source-separation quality in the style of BSS Eval v3: the estimate is
// split by least-squares projection onto `filter_len`-tap delayed copies of
// the references. Signals are zero-extended by filter_len - 1 samples so the
// delayed copies fit; all decomposition components have that padded length.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace vpnn {

inline constexpr std::size_t kDefaultFilterLen = 512;
inline constexpr double kMetricCapDb = 100.0;

struct Decomposition {
  std::vector<double> target;
  std::vector<double> interference;
  std::vector<double> artifact;
};

struct BssResult {
  double sdr = 0.0;
  double sir = 0.0;
  double sar = 0.0;
};

/// Factors the reference Gram matrices once so many estimates (e.g. a
/// separated source and the mixture) can be decomposed cheaply.
class BssProjector {
 public:
  /// Throws InvalidArgument for empty references, differing lengths or
  /// filter_len == 0, Degenerate for an all-zero reference.
  BssProjector(std::vector<std::vector<double>> references,
               std::size_t filter_len = kDefaultFilterLen);

  std::size_t signal_length() const { return length_; }
  std::size_t filter_len() const { return filter_len_; }
  std::size_t source_count() const { return refs_.size(); }

  Decomposition decompose(std::span<const double> estimate,
                          std::size_t target_index) const;

 private:
  // Correlation <ref_j delayed by d, x> for d in [0, filter_len).
  Eigen::VectorXd delayed_correlation(std::span<const double> x,
                                      std::size_t j) const;
  std::vector<double> synthesize(const Eigen::VectorXd& coeffs,
                                 std::span<const std::size_t> sources) const;

  std::vector<std::vector<double>> refs_;
  std::size_t length_ = 0;
  std::size_t filter_len_ = 0;
  std::size_t nfft_ = 0;
  std::vector<std::vector<std::complex<double>>> ref_spectra_;
  Eigen::LLT<Eigen::MatrixXd> joint_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> single_;
};

Decomposition bss_decompose(std::span<const double> estimate,
                            const std::vector<std::vector<double>>& refs,
                            std::size_t target_index,
                            std::size_t filter_len = kDefaultFilterLen);

/// Energy ratios in dB, clamped to ±kMetricCapDb (a vanishing denominator
/// gives the +cap).
BssResult sdr_sir_sar(const Decomposition& d);

/// SDR(estimate) - SDR(mixture used as the estimate), both against the same
/// reference set.
double nsdr(const BssProjector& projector, std::span<const double> estimate,
            std::span<const double> mixture, std::size_t target_index);
double nsdr(std::span<const double> estimate, std::span<const double> mixture,
            const std::vector<std::vector<double>>& refs,
            std::size_t target_index,
            std::size_t filter_len = kDefaultFilterLen);

struct ClipScore {
  double nsdr = 0.0;
  double sir = 0.0;
  double sar = 0.0;
  std::size_t length = 0;  // samples
};

struct GlobalMetrics {
  double gnsdr = 0.0;
  double gsir = 0.0;
  double gsar = 0.0;
};

/// Length-weighted means, w_i = len_i / Σ len. Throws EmptySplit for no
/// clips.
GlobalMetrics aggregate_global(std::span<const ClipScore> clips);

}  // namespace vpnn
