#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "vpnn/vecmat.hpp"

namespace vpnn {

/// The five model families compared in the experiments.
enum class ModelKind { DNN1, DNN2, DNN3, WVPNN, CVPNN };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
bool is_vector_model(ModelKind kind);

/// Logistic sigmoid, componentwise.
Matrix sigmoid(const Matrix& z);

// ---------------------------------------------------------------------------
// Vector-product network

struct VPLayer {
  VecMatrix weights;  // out x in
  VecMatrix bias;     // out x 1, broadcast across columns
};

struct VPNetwork {
  std::vector<VPLayer> layers;

  Index input_width() const;
  Index output_width() const;
  /// Throws ShapeMismatch when layers do not chain or a bias is misshapen.
  void validate() const;
};

struct VPCache {
  std::vector<VecMatrix> pre_activations;  // Z^1..Z^L
  std::vector<VecMatrix> activations;      // A^0..A^L
};

struct VPForward {
  VecMatrix output;
  VPCache cache;
};

struct VPGradients {
  std::vector<VecMatrix> weights;
  std::vector<VecMatrix> bias;
};

using VecProduct = VecMatrix (*)(const VecMatrix&, const VecMatrix&);

/// A^l = σ(W^l ⊗ A^{l-1} + B^l); columns of `input` are independent frames.
VPForward vp_forward(const VPNetwork& net, const VecMatrix& input,
                     VecProduct product = &vec_matmul);

/// Gradients of a scalar loss L given dL/dY. For z = w × a + b and
/// g = dL/dz: dL/dw = a × g, dL/da = g × w, dL/db = g.
VPGradients vp_backward(const VPNetwork& net, const VPCache& cache,
                        const VecMatrix& output_grad);

VPNetwork init_vp_network(const std::vector<Index>& widths,
                          std::uint64_t seed);

std::int64_t param_count(const VPNetwork& net);

// ---------------------------------------------------------------------------
// Real-valued baseline

struct RealLayer {
  Matrix weights;  // out x in
  Matrix bias;     // out x 1
};

struct RealNetwork {
  ModelKind kind = ModelKind::DNN1;
  std::vector<RealLayer> layers;

  Index input_width() const;
  Index output_width() const;
  void validate() const;
};

struct RealCache {
  std::vector<Matrix> activations;  // A^0..A^L
};

struct RealForward {
  Matrix output;
  RealCache cache;
};

struct RealGradients {
  std::vector<Matrix> weights;
  std::vector<Matrix> bias;
};

RealForward real_forward(const RealNetwork& net, const Matrix& input);
RealGradients real_backward(const RealNetwork& net, const RealCache& cache,
                            const Matrix& output_grad);

RealNetwork init_real_network(ModelKind kind, const std::vector<Index>& widths,
                              std::uint64_t seed);

std::int64_t param_count(const RealNetwork& net);

// ---------------------------------------------------------------------------
// Objective: J = ‖Z̃1 - Z1‖² + ‖Z̃2 - Z2‖²

struct VPLoss {
  double value = 0.0;
  VecMatrix grad1;  // dJ/dZ̃1
  VecMatrix grad2;  // dJ/dZ̃2
};

VPLoss loss_j(const VecMatrix& pred1, const VecMatrix& target1,
              const VecMatrix& pred2, const VecMatrix& target2);

struct RealLoss {
  double value = 0.0;
  Matrix grad1;
  Matrix grad2;
};

RealLoss loss_j(const Matrix& pred1, const Matrix& target1,
                const Matrix& pred2, const Matrix& target2);

/// Loss on a joint prediction whose first `bins` rows are source 1 and the
/// next `bins` rows source 2. Returns J and dJ/dprediction of the stacked
/// shape.
struct StackedVPLoss {
  double value = 0.0;
  VecMatrix grad;
};
StackedVPLoss stacked_loss(const VecMatrix& prediction,
                           const VecMatrix& target);

struct StackedRealLoss {
  double value = 0.0;
  Matrix grad;
};
StackedRealLoss stacked_loss(const Matrix& prediction, const Matrix& target);

// ---------------------------------------------------------------------------
// Flat parameter access for optimizers and checkpointing. Order: layer by
// layer, weights before bias, planes 1..3 for vector layers.

std::vector<Matrix*> parameter_planes(VPNetwork& net);
std::vector<const Matrix*> parameter_planes(const VPNetwork& net);
std::vector<const Matrix*> gradient_planes(const VPGradients& grads);

std::vector<Matrix*> parameter_planes(RealNetwork& net);
std::vector<const Matrix*> parameter_planes(const RealNetwork& net);
std::vector<const Matrix*> gradient_planes(const RealGradients& grads);

}  // namespace vpnn
