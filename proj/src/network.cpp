#include "vpnn/network.hpp"

#include <cmath>
#include <random>
#include <string>

#include "vpnn/error.hpp"

namespace vpnn {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::DNN1: return "DNN1";
    case ModelKind::DNN2: return "DNN2";
    case ModelKind::DNN3: return "DNN3";
    case ModelKind::WVPNN: return "WVPNN";
    case ModelKind::CVPNN: return "CVPNN";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::DNN1, ModelKind::DNN2, ModelKind::DNN3,
                      ModelKind::WVPNN, ModelKind::CVPNN}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::Config, "unknown model '" + std::string(name) +
                                     "' (expected DNN1, DNN2, DNN3, WVPNN "
                                     "or CVPNN)");
}

bool is_vector_model(ModelKind kind) {
  return kind == ModelKind::WVPNN || kind == ModelKind::CVPNN;
}

Matrix sigmoid(const Matrix& z) {
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

namespace {

Matrix sigmoid_adjoint(const Matrix& grad, const Matrix& activation) {
  return grad.cwiseProduct(activation.cwiseProduct(
      (1.0 - activation.array()).matrix()));
}

void check_widths(const std::vector<Index>& widths) {
  if (widths.size() < 2) {
    throw Error(ErrorKind::InvalidArgument,
                "network needs at least an input and an output width");
  }
  for (Index w : widths) {
    if (w <= 0) {
      throw Error(ErrorKind::InvalidArgument, "zero-width layer");
    }
  }
}

Matrix glorot_plane(Index out, Index in, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(out, in);
  for (Index j = 0; j < in; ++j) {
    for (Index i = 0; i < out; ++i) m(i, j) = dist(rng);
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

Index VPNetwork::input_width() const {
  return layers.empty() ? 0 : layers.front().weights.cols();
}

Index VPNetwork::output_width() const {
  return layers.empty() ? 0 : layers.back().weights.rows();
}

void VPNetwork::validate() const {
  if (layers.empty()) {
    throw Error(ErrorKind::ShapeMismatch, "network has no layers");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& layer = layers[k];
    if (layer.bias.rows() != layer.weights.rows() || layer.bias.cols() != 1) {
      throw Error(ErrorKind::ShapeMismatch,
                  "layer " + std::to_string(k) + ": bias must be out x 1");
    }
    if (k > 0 && layer.weights.cols() != layers[k - 1].weights.rows()) {
      throw Error(ErrorKind::ShapeMismatch,
                  "layer " + std::to_string(k) + " does not chain");
    }
  }
}

VPForward vp_forward(const VPNetwork& net, const VecMatrix& input,
                     VecProduct product) {
  if (input.rows() != net.input_width()) {
    throw Error(ErrorKind::ShapeMismatch,
                "vp_forward: input has " + std::to_string(input.rows()) +
                    " rows, network expects " +
                    std::to_string(net.input_width()));
  }
  VPForward result;
  result.cache.activations.reserve(net.layers.size() + 1);
  result.cache.pre_activations.reserve(net.layers.size());
  result.cache.activations.push_back(input);
  for (const auto& layer : net.layers) {
    VecMatrix z = product(layer.weights, result.cache.activations.back());
    for (int k = 0; k < 3; ++k) {
      z.plane(k).colwise() += layer.bias.plane(k).col(0);
    }
    VecMatrix a(sigmoid(z.p1()), sigmoid(z.p2()), sigmoid(z.p3()));
    result.cache.pre_activations.push_back(std::move(z));
    result.cache.activations.push_back(std::move(a));
  }
  result.output = result.cache.activations.back();
  return result;
}

VPGradients vp_backward(const VPNetwork& net, const VPCache& cache,
                        const VecMatrix& output_grad) {
  const std::size_t depth = net.layers.size();
  if (cache.activations.size() != depth + 1 ||
      cache.pre_activations.size() != depth) {
    throw Error(ErrorKind::ShapeMismatch,
                "vp_backward: cache does not belong to this network");
  }
  if (!output_grad.same_shape(cache.activations.back())) {
    throw Error(ErrorKind::ShapeMismatch,
                "vp_backward: output gradient shape differs from output");
  }
  VPGradients grads;
  grads.weights.resize(depth);
  grads.bias.resize(depth);

  VecMatrix upstream = output_grad;
  for (std::size_t l = depth; l-- > 0;) {
    const VecMatrix& a = cache.activations[l + 1];
    const VecMatrix& a_prev = cache.activations[l];
    VecMatrix g(sigmoid_adjoint(upstream.p1(), a.p1()),
                sigmoid_adjoint(upstream.p2(), a.p2()),
                sigmoid_adjoint(upstream.p3(), a.p3()));
    // dW(i,j) = Σ_k a_jk × g_ik = -(G ⊗ Aᵀ)(i,j)
    grads.weights[l] = vm_scale(vec_matmul(g, vm_transpose(a_prev)), -1.0);
    grads.bias[l] = VecMatrix(g.p1().rowwise().sum(), g.p2().rowwise().sum(),
                              g.p3().rowwise().sum());
    if (l > 0) {
      // dA(j,k) = Σ_i g_ik × w_ij = -(Wᵀ ⊗ G)(j,k)
      upstream = vm_scale(
          vec_matmul(vm_transpose(net.layers[l].weights), g), -1.0);
    }
  }
  return grads;
}

VPNetwork init_vp_network(const std::vector<Index>& widths,
                          std::uint64_t seed) {
  check_widths(widths);
  std::mt19937_64 rng(seed);
  VPNetwork net;
  for (std::size_t k = 1; k < widths.size(); ++k) {
    const Index in = widths[k - 1];
    const Index out = widths[k];
    Matrix p1 = glorot_plane(out, in, rng);
    Matrix p2 = glorot_plane(out, in, rng);
    Matrix p3 = glorot_plane(out, in, rng);
    net.layers.push_back({VecMatrix(std::move(p1), std::move(p2), std::move(p3)),
                          VecMatrix(out, 1)});
  }
  return net;
}

std::int64_t param_count(const VPNetwork& net) {
  std::int64_t total = 0;
  for (const auto& layer : net.layers) {
    total += 3 * (layer.weights.rows() * layer.weights.cols() +
                  layer.bias.rows() * layer.bias.cols());
  }
  return total;
}

// ---------------------------------------------------------------------------

Index RealNetwork::input_width() const {
  return layers.empty() ? 0 : layers.front().weights.cols();
}

Index RealNetwork::output_width() const {
  return layers.empty() ? 0 : layers.back().weights.rows();
}

void RealNetwork::validate() const {
  if (layers.empty()) {
    throw Error(ErrorKind::ShapeMismatch, "network has no layers");
  }
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& layer = layers[k];
    if (layer.bias.rows() != layer.weights.rows() || layer.bias.cols() != 1) {
      throw Error(ErrorKind::ShapeMismatch,
                  "layer " + std::to_string(k) + ": bias must be out x 1");
    }
    if (k > 0 && layer.weights.cols() != layers[k - 1].weights.rows()) {
      throw Error(ErrorKind::ShapeMismatch,
                  "layer " + std::to_string(k) + " does not chain");
    }
  }
}

RealForward real_forward(const RealNetwork& net, const Matrix& input) {
  if (input.rows() != net.input_width()) {
    throw Error(ErrorKind::ShapeMismatch,
                "real_forward: input has " + std::to_string(input.rows()) +
                    " rows, network expects " +
                    std::to_string(net.input_width()));
  }
  RealForward result;
  result.cache.activations.reserve(net.layers.size() + 1);
  result.cache.activations.push_back(input);
  for (const auto& layer : net.layers) {
    Matrix z(layer.weights.rows(), input.cols());
    z.noalias() = layer.weights * result.cache.activations.back();
    z.colwise() += layer.bias.col(0);
    result.cache.activations.push_back(sigmoid(z));
  }
  result.output = result.cache.activations.back();
  return result;
}

RealGradients real_backward(const RealNetwork& net, const RealCache& cache,
                            const Matrix& output_grad) {
  const std::size_t depth = net.layers.size();
  if (cache.activations.size() != depth + 1) {
    throw Error(ErrorKind::ShapeMismatch,
                "real_backward: cache does not belong to this network");
  }
  const Matrix& out = cache.activations.back();
  if (output_grad.rows() != out.rows() || output_grad.cols() != out.cols()) {
    throw Error(ErrorKind::ShapeMismatch,
                "real_backward: output gradient shape differs from output");
  }
  RealGradients grads;
  grads.weights.resize(depth);
  grads.bias.resize(depth);
  Matrix upstream = output_grad;
  for (std::size_t l = depth; l-- > 0;) {
    Matrix g = sigmoid_adjoint(upstream, cache.activations[l + 1]);
    grads.weights[l].noalias() = g * cache.activations[l].transpose();
    grads.bias[l] = g.rowwise().sum();
    if (l > 0) {
      upstream.noalias() = net.layers[l].weights.transpose() * g;
    }
  }
  return grads;
}

RealNetwork init_real_network(ModelKind kind, const std::vector<Index>& widths,
                              std::uint64_t seed) {
  check_widths(widths);
  std::mt19937_64 rng(seed);
  RealNetwork net;
  net.kind = kind;
  for (std::size_t k = 1; k < widths.size(); ++k) {
    net.layers.push_back({glorot_plane(widths[k], widths[k - 1], rng),
                          Matrix::Zero(widths[k], 1)});
  }
  return net;
}

std::int64_t param_count(const RealNetwork& net) {
  std::int64_t total = 0;
  for (const auto& layer : net.layers) {
    total += layer.weights.size() + layer.bias.size();
  }
  return total;
}

// ---------------------------------------------------------------------------

VPLoss loss_j(const VecMatrix& pred1, const VecMatrix& target1,
              const VecMatrix& pred2, const VecMatrix& target2) {
  if (!pred1.same_shape(target1) || !pred2.same_shape(target2)) {
    throw Error(ErrorKind::ShapeMismatch,
                "loss_j: prediction and target shapes differ");
  }
  VecMatrix d1 = vm_sub(pred1, target1);
  VecMatrix d2 = vm_sub(pred2, target2);
  VPLoss loss;
  loss.value = vm_frob_sq(d1) + vm_frob_sq(d2);
  loss.grad1 = vm_scale(d1, 2.0);
  loss.grad2 = vm_scale(d2, 2.0);
  return loss;
}

RealLoss loss_j(const Matrix& pred1, const Matrix& target1,
                const Matrix& pred2, const Matrix& target2) {
  if (pred1.rows() != target1.rows() || pred1.cols() != target1.cols() ||
      pred2.rows() != target2.rows() || pred2.cols() != target2.cols()) {
    throw Error(ErrorKind::ShapeMismatch,
                "loss_j: prediction and target shapes differ");
  }
  RealLoss loss;
  Matrix d1 = pred1 - target1;
  Matrix d2 = pred2 - target2;
  loss.value = d1.squaredNorm() + d2.squaredNorm();
  loss.grad1 = 2.0 * d1;
  loss.grad2 = 2.0 * d2;
  return loss;
}

StackedVPLoss stacked_loss(const VecMatrix& prediction,
                           const VecMatrix& target) {
  if (!prediction.same_shape(target) || prediction.rows() % 2 != 0) {
    throw Error(ErrorKind::ShapeMismatch,
                "stacked_loss: prediction must match target and have an "
                "even row count");
  }
  const Index bins = prediction.rows() / 2;
  VPLoss l = loss_j(vm_rows(prediction, 0, bins), vm_rows(target, 0, bins),
                    vm_rows(prediction, bins, bins),
                    vm_rows(target, bins, bins));
  return {l.value, vm_vstack(l.grad1, l.grad2)};
}

StackedRealLoss stacked_loss(const Matrix& prediction, const Matrix& target) {
  if (prediction.rows() != target.rows() ||
      prediction.cols() != target.cols() || prediction.rows() % 2 != 0) {
    throw Error(ErrorKind::ShapeMismatch,
                "stacked_loss: prediction must match target and have an "
                "even row count");
  }
  const Index bins = prediction.rows() / 2;
  RealLoss l = loss_j(prediction.topRows(bins), target.topRows(bins),
                      prediction.bottomRows(bins), target.bottomRows(bins));
  Matrix grad(prediction.rows(), prediction.cols());
  grad << l.grad1, l.grad2;
  return {l.value, std::move(grad)};
}

// ---------------------------------------------------------------------------

std::vector<Matrix*> parameter_planes(VPNetwork& net) {
  std::vector<Matrix*> out;
  for (auto& layer : net.layers) {
    for (int k = 0; k < 3; ++k) out.push_back(&layer.weights.plane(k));
    for (int k = 0; k < 3; ++k) out.push_back(&layer.bias.plane(k));
  }
  return out;
}

std::vector<const Matrix*> parameter_planes(const VPNetwork& net) {
  std::vector<const Matrix*> out;
  for (const auto& layer : net.layers) {
    for (int k = 0; k < 3; ++k) out.push_back(&layer.weights.plane(k));
    for (int k = 0; k < 3; ++k) out.push_back(&layer.bias.plane(k));
  }
  return out;
}

std::vector<const Matrix*> gradient_planes(const VPGradients& grads) {
  std::vector<const Matrix*> out;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    for (int k = 0; k < 3; ++k) out.push_back(&grads.weights[l].plane(k));
    for (int k = 0; k < 3; ++k) out.push_back(&grads.bias[l].plane(k));
  }
  return out;
}

std::vector<Matrix*> parameter_planes(RealNetwork& net) {
  std::vector<Matrix*> out;
  for (auto& layer : net.layers) {
    out.push_back(&layer.weights);
    out.push_back(&layer.bias);
  }
  return out;
}

std::vector<const Matrix*> parameter_planes(const RealNetwork& net) {
  std::vector<const Matrix*> out;
  for (const auto& layer : net.layers) {
    out.push_back(&layer.weights);
    out.push_back(&layer.bias);
  }
  return out;
}

std::vector<const Matrix*> gradient_planes(const RealGradients& grads) {
  std::vector<const Matrix*> out;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    out.push_back(&grads.weights[l]);
    out.push_back(&grads.bias[l]);
  }
  return out;
}

}  // namespace vpnn
