#include "vpnn/model.hpp"

#include <algorithm>

#include "vpnn/error.hpp"

namespace vpnn {

namespace {

VecMatrix to_vec(const Planes& p) {
  if (p.size() != 3) {
    throw Error(ErrorKind::ShapeMismatch,
                "vector-product model expects three component planes");
  }
  return VecMatrix(p[0], p[1], p[2]);
}

const Matrix& single_plane(const Planes& p) {
  if (p.size() != 1) {
    throw Error(ErrorKind::ShapeMismatch,
                "real-valued model expects a single plane");
  }
  return p[0];
}

Matrix stack_sources(const Matrix& vocal, const Matrix& music) {
  if (vocal.rows() != music.rows() || vocal.cols() != music.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "source magnitudes differ in shape");
  }
  Matrix out(2 * vocal.rows(), vocal.cols());
  out << vocal, music;
  return out;
}

}  // namespace

std::string Model::arch() const {
  return std::to_string(hidden_width) + "x" + std::to_string(hidden_layers);
}

std::int64_t Model::parameters() const {
  return std::visit([](const auto& net) { return param_count(net); }, network);
}

std::vector<Index> Model::widths() const {
  return layer_widths(kind, bins, hidden_width, hidden_layers);
}

std::vector<Index> layer_widths(ModelKind kind, Index bins, Index hidden_width,
                                Index hidden_layers) {
  std::vector<Index> w;
  w.push_back(kind == ModelKind::DNN3 ? 3 * bins : bins);
  for (Index k = 0; k < hidden_layers; ++k) w.push_back(hidden_width);
  w.push_back(2 * bins);
  return w;
}

void Model::validate() const {
  const std::vector<Index> expected = widths();
  std::vector<Index> actual;
  std::visit(
      [&](const auto& net) {
        net.validate();
        actual.push_back(net.input_width());
        for (const auto& layer : net.layers) actual.push_back(layer.weights.rows());
      },
      network);
  if (actual != expected) {
    throw Error(ErrorKind::ShapeMismatch,
                "network layer widths do not match the " +
                    std::string(to_string(kind)) + " " + arch() +
                    " architecture");
  }
  if (is_vector_model(kind) != std::holds_alternative<VPNetwork>(network)) {
    throw Error(ErrorKind::ShapeMismatch,
                std::string(to_string(kind)) + " holds the wrong network type");
  }
}

Model make_model(const ExperimentConfig& cfg, Index bins) {
  cfg.validate();
  Model m;
  m.kind = cfg.model;
  m.color = cfg.color;
  m.bins = bins;
  m.hidden_width = cfg.effective_hidden_width();
  m.hidden_layers = cfg.hidden_layers;
  const auto widths = m.widths();
  if (is_vector_model(m.kind)) {
    m.network = init_vp_network(widths, cfg.seed);
  } else {
    m.network = init_real_network(m.kind, widths, cfg.seed);
  }
  return m;
}

Planes encode_input(const Model& model, const Matrix& mixture) {
  if (mixture.rows() != model.bins) {
    throw Error(ErrorKind::ShapeMismatch,
                "mixture has " + std::to_string(mixture.rows()) +
                    " bins, model expects " + std::to_string(model.bins));
  }
  switch (model.kind) {
    case ModelKind::DNN1:
    case ModelKind::DNN2: return {mixture};
    case ModelKind::DNN3: return {context_stack(mixture)};
    case ModelKind::WVPNN: {
      VecMatrix v = window_encode(mixture);
      return {v.p1(), v.p2(), v.p3()};
    }
    case ModelKind::CVPNN: {
      VecMatrix v = color_encode(mixture, model.color);
      return {v.p1(), v.p2(), v.p3()};
    }
  }
  return {};
}

Planes encode_target(const Model& model, const Matrix& vocal,
                     const Matrix& music) {
  const Matrix stacked = stack_sources(vocal, music);
  switch (model.transform()) {
    case TransformKind::None: return {stacked};
    case TransformKind::Window: {
      if (model.kind == ModelKind::DNN3) return {stacked};
      VecMatrix v = window_encode(stacked);
      return {v.p1(), v.p2(), v.p3()};
    }
    case TransformKind::Color: {
      VecMatrix v = color_encode(stacked, model.color);
      return {v.p1(), v.p2(), v.p3()};
    }
  }
  return {};
}

Matrix decode_output(const Model& model, const Planes& output) {
  switch (model.kind) {
    case ModelKind::DNN1:
    case ModelKind::DNN2:
    case ModelKind::DNN3:
      return single_plane(output).cwiseMax(0.0).cwiseMin(1.0);
    case ModelKind::WVPNN: return window_decode(to_vec(output));
    case ModelKind::CVPNN: return color_decode(to_vec(output), model.color);
  }
  return {};
}

Planes model_forward(const Model& model, const Planes& input) {
  return std::visit(
      [&](const auto& net) -> Planes {
        using Net = std::decay_t<decltype(net)>;
        if constexpr (std::is_same_v<Net, VPNetwork>) {
          VecMatrix y = vp_forward(net, to_vec(input)).output;
          return {y.p1(), y.p2(), y.p3()};
        } else {
          return {real_forward(net, single_plane(input)).output};
        }
      },
      model.network);
}

Planes gather_columns(const Planes& planes, const std::vector<Index>& cols) {
  Planes out;
  out.reserve(planes.size());
  for (const Matrix& p : planes) {
    Matrix m(p.rows(), static_cast<Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) m.col(c) = p.col(cols[c]);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace vpnn
