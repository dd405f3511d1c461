#include <cmath>
#include <string>
#include <type_traits>

#include "vpnn/error.hpp"
#include "vpnn/optim.hpp"
#include "vpnn/pipeline.hpp"

namespace vpnn {

namespace {

[[noreturn]] void diverged(int epoch, std::size_t batch) {
  throw Error(ErrorKind::Divergence,
              "objective became non-finite at epoch " + std::to_string(epoch) +
                  ", batch " + std::to_string(batch) +
                  "; lower the learning rate");
}

// One optimizer step on a batch; returns J for the batch.
template <class Net>
double batch_step(Net& net, const Planes& input, const Planes& target,
                  const ExperimentConfig& cfg, AdamState& adam, int epoch,
                  std::size_t batch) {
  if constexpr (std::is_same_v<Net, VPNetwork>) {
    VPForward fwd = vp_forward(net, VecMatrix(input[0], input[1], input[2]));
    StackedVPLoss loss =
        stacked_loss(fwd.output, VecMatrix(target[0], target[1], target[2]));
    if (!std::isfinite(loss.value)) diverged(epoch, batch);
    VPGradients grads = vp_backward(net, fwd.cache, loss.grad);
    if (cfg.optimizer == OptimizerKind::Adam) {
      adam_step(net, grads, adam);
    } else {
      sgd_step(net, grads, cfg.adam.lr);
    }
    return loss.value;
  } else {
    RealForward fwd = real_forward(net, input[0]);
    StackedRealLoss loss = stacked_loss(fwd.output, target[0]);
    if (!std::isfinite(loss.value)) diverged(epoch, batch);
    RealGradients grads = real_backward(net, fwd.cache, loss.grad);
    if (cfg.optimizer == OptimizerKind::Adam) {
      adam_step(net, grads, adam);
    } else {
      sgd_step(net, grads, cfg.adam.lr);
    }
    return loss.value;
  }
}

}  // namespace

TrainingResult train(const ExperimentConfig& cfg, Model model,
                     const TrainingSet& set, const EpochObserver& observer) {
  cfg.validate();
  model.validate();
  if (set.frames < 1) {
    throw Error(ErrorKind::EmptySplit, "training set has no frames");
  }
  AdamState adam = std::visit(
      [&](const auto& net) { return make_adam_state(cfg.adam, net); },
      model.network);

  TrainingResult result;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto batches = make_batches(set.frames, cfg.batch_frames, cfg.seed,
                                      static_cast<std::uint64_t>(epoch));
    double total = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const Planes input = gather_columns(set.inputs, batches[b]);
      const Planes target = gather_columns(set.targets, batches[b]);
      total += std::visit(
          [&](auto& net) {
            return batch_step(net, input, target, cfg, adam, epoch, b);
          },
          model.network);
    }
    const double mean = total / static_cast<double>(set.frames);
    result.loss_history.push_back(mean);
    if (observer) observer(epoch, mean);
  }

  ModelCheckpoint& ckpt = result.checkpoint;
  ckpt.model = std::move(model);
  ckpt.epochs = cfg.epochs;
  if (!result.loss_history.empty()) ckpt.final_loss = result.loss_history.back();
  ckpt.loss_history = result.loss_history;
  ckpt.seed = cfg.seed;
  return result;
}

TrainingResult train(const ExperimentConfig& cfg,
                     const DatasetManifest& manifest,
                     const EpochObserver& observer) {
  Model model = make_model(cfg);
  const TrainingSet set = build_training_set(manifest, cfg, model);
  return train(cfg, std::move(model), set, observer);
}

}  // namespace vpnn
