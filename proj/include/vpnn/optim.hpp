#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vpnn/network.hpp"

namespace vpnn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

/// First/second moment accumulators, one per parameter plane. Vector-valued
/// parameters are three independent planes; there is no coupling between
/// components.
struct AdamState {
  AdamConfig config;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  std::int64_t t = 0;

  AdamState() = default;
  AdamState(const AdamConfig& cfg, std::span<const Matrix* const> params);
};

/// In-place update of every plane in `params`.
void adam_step(std::span<Matrix* const> params,
               std::span<const Matrix* const> grads, AdamState& state);

void sgd_step(std::span<Matrix* const> params,
              std::span<const Matrix* const> grads, double lr);

// Network-level conveniences.
AdamState make_adam_state(const AdamConfig& cfg, const VPNetwork& net);
AdamState make_adam_state(const AdamConfig& cfg, const RealNetwork& net);
void adam_step(VPNetwork& net, const VPGradients& grads, AdamState& state);
void adam_step(RealNetwork& net, const RealGradients& grads, AdamState& state);
void sgd_step(VPNetwork& net, const VPGradients& grads, double lr);
void sgd_step(RealNetwork& net, const RealGradients& grads, double lr);

/// Value-semantics variant: returns the updated parameters and state and
/// leaves the arguments untouched.
struct AdamUpdate {
  std::vector<Matrix> params;
  AdamState state;
};
AdamUpdate adam_update(std::vector<Matrix> params,
                       const std::vector<Matrix>& grads, AdamState state);

}  // namespace vpnn
