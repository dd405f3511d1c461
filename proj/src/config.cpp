#include "vpnn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vpnn/error.hpp"

namespace vpnn {

TransformKind transform_for(ModelKind kind) {
  switch (kind) {
    case ModelKind::CVPNN: return TransformKind::Color;
    case ModelKind::WVPNN:
    case ModelKind::DNN3: return TransformKind::Window;
    case ModelKind::DNN1:
    case ModelKind::DNN2: return TransformKind::None;
  }
  return TransformKind::None;
}

int context_for(ModelKind kind) {
  return transform_for(kind) == TransformKind::Window ? 3 : 1;
}

Index default_hidden_width(ModelKind kind) {
  return kind == ModelKind::DNN2 || kind == ModelKind::DNN3 ? 1536 : 512;
}

Index ExperimentConfig::effective_hidden_width() const {
  return hidden_width > 0 ? hidden_width : default_hidden_width(model);
}

TransformKind ExperimentConfig::effective_transform() const {
  return transform.value_or(transform_for(model));
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, msg); };
  if (transform && *transform != transform_for(model)) {
    fail(std::string(to_string(model)) + " requires the '" +
         std::string(to_string(transform_for(model))) +
         "' transform, not '" + std::string(to_string(*transform)) + "'");
  }
  if (hidden_width < 0) fail("hidden_width must be >= 0 (0 selects the default)");
  if (hidden_layers < 1) fail("hidden_layers must be >= 1");
  if (batch_frames < 1) fail("batch_frames must be >= 1");
  if (epochs < 0) fail("epochs must be >= 0");
  if (filter_len < 1) fail("filter_len must be >= 1");
  if (channel < 0) fail("channel must be >= 0");
  if (workers < 1) fail("workers must be >= 1");
  try {
    color.validate();
    adam.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::Config, "invalid value '" + std::string(value) +
                                       "' for " + std::string(key));
  }
  return out;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key,
                   std::string_view value) {
  value = trim(value);
  if (key == "model") {
    cfg.model = parse_model_kind(value);
  } else if (key == "transform") {
    cfg.transform = parse_transform_kind(value);
  } else if (key == "hidden_width") {
    cfg.hidden_width = parse_number<Index>(key, value);
  } else if (key == "hidden_layers") {
    cfg.hidden_layers = parse_number<Index>(key, value);
  } else if (key == "color_n") {
    cfg.color.n = parse_number<double>(key, value);
  } else if (key == "optimizer") {
    if (value == "adam") {
      cfg.optimizer = OptimizerKind::Adam;
    } else if (value == "sgd") {
      cfg.optimizer = OptimizerKind::Sgd;
    } else {
      throw Error(ErrorKind::Config, "unknown optimizer '" +
                                         std::string(value) +
                                         "' (expected adam or sgd)");
    }
  } else if (key == "lr") {
    cfg.adam.lr = parse_number<double>(key, value);
  } else if (key == "beta1") {
    cfg.adam.beta1 = parse_number<double>(key, value);
  } else if (key == "beta2") {
    cfg.adam.beta2 = parse_number<double>(key, value);
  } else if (key == "epsilon") {
    cfg.adam.epsilon = parse_number<double>(key, value);
  } else if (key == "batch_frames") {
    cfg.batch_frames = parse_number<Index>(key, value);
  } else if (key == "epochs") {
    cfg.epochs = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "filter_len") {
    cfg.filter_len = parse_number<std::size_t>(key, value);
  } else if (key == "data") {
    cfg.dataset_root = std::string(value);
  } else if (key == "channel") {
    cfg.channel = parse_number<int>(key, value);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value);
  } else {
    throw Error(ErrorKind::Config, "unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Config, "config line " + std::to_string(line_no) +
                                         ": expected key = value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace vpnn
