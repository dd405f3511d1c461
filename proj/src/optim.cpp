#include "vpnn/optim.hpp"

#include <cmath>
#include <string>

#include "vpnn/error.hpp"

namespace vpnn {

void AdamConfig::validate() const {
  if (!(lr > 0.0)) throw Error(ErrorKind::InvalidArgument, "adam: lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "adam: betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "adam: epsilon must be > 0");
  }
}

AdamState::AdamState(const AdamConfig& cfg,
                     std::span<const Matrix* const> params)
    : config(cfg) {
  cfg.validate();
  m.reserve(params.size());
  v.reserve(params.size());
  for (const Matrix* p : params) {
    m.push_back(Matrix::Zero(p->rows(), p->cols()));
    v.push_back(Matrix::Zero(p->rows(), p->cols()));
  }
}

namespace {

template <class Params, class Grads>
void check_congruent(const Params& params, const Grads& grads,
                     const char* op) {
  if (params.size() != grads.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(op) + ": parameter/gradient count differs");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k]->rows() != grads[k]->rows() ||
        params[k]->cols() != grads[k]->cols()) {
      throw Error(ErrorKind::ShapeMismatch,
                  std::string(op) + ": plane " + std::to_string(k) +
                      " shape differs from its gradient");
    }
    if (!grads[k]->allFinite()) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string(op) + ": non-finite gradient in plane " +
                      std::to_string(k));
    }
  }
}

}  // namespace

void adam_step(std::span<Matrix* const> params,
               std::span<const Matrix* const> grads, AdamState& state) {
  check_congruent(params, grads, "adam_step");
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw Error(ErrorKind::ShapeMismatch,
                "adam_step: optimizer state does not match parameters");
  }
  const AdamConfig& c = state.config;
  state.t += 1;
  const double correction1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  const double correction2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& m = state.m[k];
    Matrix& v = state.v[k];
    if (m.rows() != params[k]->rows() || m.cols() != params[k]->cols()) {
      throw Error(ErrorKind::ShapeMismatch,
                  "adam_step: moment shape differs from parameter");
    }
    const Matrix& g = *grads[k];
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseAbs2();
    auto m_hat = m.array() / correction1;
    auto v_hat = v.array() / correction2;
    params[k]->array() -= c.lr * m_hat / (v_hat.sqrt() + c.epsilon);
  }
}

void sgd_step(std::span<Matrix* const> params,
              std::span<const Matrix* const> grads, double lr) {
  if (!(lr > 0.0)) throw Error(ErrorKind::InvalidArgument, "sgd: lr must be > 0");
  check_congruent(params, grads, "sgd_step");
  for (std::size_t k = 0; k < params.size(); ++k) {
    *params[k] -= lr * *grads[k];
  }
}

AdamState make_adam_state(const AdamConfig& cfg, const VPNetwork& net) {
  return AdamState(cfg, parameter_planes(net));
}

AdamState make_adam_state(const AdamConfig& cfg, const RealNetwork& net) {
  return AdamState(cfg, parameter_planes(net));
}

void adam_step(VPNetwork& net, const VPGradients& grads, AdamState& state) {
  adam_step(parameter_planes(net), gradient_planes(grads), state);
}

void adam_step(RealNetwork& net, const RealGradients& grads,
               AdamState& state) {
  adam_step(parameter_planes(net), gradient_planes(grads), state);
}

void sgd_step(VPNetwork& net, const VPGradients& grads, double lr) {
  sgd_step(parameter_planes(net), gradient_planes(grads), lr);
}

void sgd_step(RealNetwork& net, const RealGradients& grads, double lr) {
  sgd_step(parameter_planes(net), gradient_planes(grads), lr);
}

AdamUpdate adam_update(std::vector<Matrix> params,
                       const std::vector<Matrix>& grads, AdamState state) {
  std::vector<Matrix*> p;
  std::vector<const Matrix*> g;
  for (auto& m : params) p.push_back(&m);
  for (const auto& m : grads) g.push_back(&m);
  adam_step(p, g, state);
  return {std::move(params), std::move(state)};
}

}  // namespace vpnn
